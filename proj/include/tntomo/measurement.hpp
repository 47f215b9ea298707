#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tntomo/channels.hpp"
#include "tntomo/lpdo.hpp"
#include "tntomo/mps.hpp"
#include "tntomo/peps.hpp"
#include "tntomo/targets.hpp"

namespace tntomo {

/// Measurement record for one global basis: outcome bitstrings (in support
/// order, '0' = +1 eigenvalue) with their counts.
struct ShotRecord {
  PauliString basis;  // letters in {X, Y, Z} on the full measured line
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t shots = 0;
};

enum class MarginalSource { Exact, Sampled };

/// Estimated or exact reduced density matrices over sliding windows.
/// 1D: windows ordered by start site. 2D: all 1xL windows (row-major), then
/// all Lx1 windows (column-major).
struct MarginalSet {
  std::size_t window_length = 0;
  std::vector<DensityMatrix> sigmas;
  MarginalSource source = MarginalSource::Exact;
  std::uint64_t shots_per_basis = 0;
  std::uint64_t seed = 0;
};

/// The 3^L translation-invariant measurement bases of period L over N sites.
/// Every non-identity Pauli word of length <= L on any window is obtained
/// from at least one of them by identity substitution.
inline std::vector<PauliString> measurement_bases(std::size_t window_length,
                                                  std::size_t n_sites) {
  require(window_length >= 1 && window_length <= n_sites,
          "measurement_bases: need 1 <= L <= N");
  std::vector<PauliString> bases;
  for (const std::string& pattern :
       letter_combinations("XYZ", window_length)) {
    std::string letters(n_sites, 'X');
    for (std::size_t j = 0; j < n_sites; ++j)
      letters[j] = pattern[j % window_length];
    bases.push_back(PauliString::chain(std::move(letters)));
  }
  return bases;
}

namespace detail {

inline DenseTensor op_tensor(const Matrix2cd& op, const std::string& row,
                             const std::string& col) {
  DenseTensor t({row, col}, {2, 2});
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) t.at({r, c}) = op(r, c);
  return t;
}

// <psi| P_j |psi> transfer step with a single-site operator inserted.
inline DenseTensor overlap_step_op(const DenseTensor& env,
                                   const DenseTensor& site,
                                   const Matrix2cd& op) {
  DenseTensor t = contract(env, site.conjugated(), {{"b", kLeft}});
  t = t.renamed({{std::string(kPhys), std::string("o")},
                 {std::string(kRight), std::string("b2")}});
  t = contract(t, op_tensor(op, "o", "t"), {{"o", "o"}});
  t = contract(t, site, {{"k", kLeft}, {"t", kPhys}});
  return t.renamed({{std::string("b2"), std::string("b")},
                    {std::string(kRight), std::string("k")}});
}

// Tr[rho P_j ...] transfer step for LPDOs.
inline DenseTensor lpdo_trace_step_op(const DenseTensor& env,
                                      const DenseTensor& site,
                                      const Matrix2cd& op) {
  DenseTensor t = contract(env, site, {{"m", kLeft}});
  t = t.renamed({{std::string(kPhys), std::string("t")},
                 {std::string(kRight), std::string("m2")}});
  t = contract(t, op_tensor(op, "o", "t"), {{"t", "t"}});
  t = contract(t, site.conjugated(),
               {{"n", kLeft}, {"o", kPhys}, {kKraus, kKraus}});
  return t.renamed({{std::string("m2"), std::string("m")},
                    {std::string(kRight), std::string("n")}});
}

}  // namespace detail

/// Tr[rho P] for a Pauli word on a 1D chain (any support inside the chain).
inline double pauli_expectation(const MPSState& psi, const PauliString& word) {
  DenseTensor env = detail::boundary_env();
  for (std::size_t j = 0; j < psi.n_sites(); ++j) {
    const char letter = word.letter_at({0, static_cast<int>(j)});
    env = (letter == 'I')
              ? detail::overlap_step(env, psi.sites[j], psi.sites[j])
              : detail::overlap_step_op(env, psi.sites[j],
                                        pauli_matrix(letter));
  }
  return trace_pairs(env, {{"b", "k"}}).value().real();
}

inline double pauli_expectation(const LPDOState& rho, const PauliString& word) {
  DenseTensor env = detail::lpdo_boundary_env();
  for (std::size_t j = 0; j < rho.n_sites(); ++j) {
    const char letter = word.letter_at({0, static_cast<int>(j)});
    env = (letter == 'I')
              ? detail::lpdo_trace_step(env, rho.sites[j])
              : detail::lpdo_trace_step_op(env, rho.sites[j],
                                           pauli_matrix(letter));
  }
  return trace_pairs(env, {{"m", "n"}}).value().real();
}

inline double pauli_expectation(const PEPSState& psi, const PauliString& word,
                                std::size_t chi = 0) {
  return peps_pauli_expectation(psi, word, chi);
}

/// Born sampling of a pure chain in a product Pauli basis. Sequential
/// conditional sampling (exact, no Markov chain); deterministic per seed.
inline ShotRecord sample_shots(const MPSState& psi, const PauliString& basis,
                               std::uint64_t shots, std::uint64_t seed) {
  require(shots > 0, "sample_shots: need at least one shot");
  require(basis.size() == psi.n_sites(), "sample_shots: basis must cover chain");
  MPSState rot = psi;
  for (std::size_t j = 0; j < psi.n_sites(); ++j)
    rot = apply_single_site(rot, j, basis_rotation(basis.ops[j]));

  const std::vector<DenseTensor> renvs = right_trace_envs(rot);
  Rng rng(seed);
  ShotRecord record;
  record.basis = basis;
  record.shots = shots;

  const std::size_t n = psi.n_sites();
  for (std::uint64_t s = 0; s < shots; ++s) {
    DenseTensor env = detail::boundary_env();
    std::string bits(n, '0');
    for (std::size_t j = 0; j < n; ++j) {
      DenseTensor cand[2];
      double w[2];
      for (std::size_t o = 0; o < 2; ++o) {
        DenseTensor slice = rot.sites[j].sliced(kPhys, o);
        DenseTensor t = contract(env, slice.conjugated(), {{"b", kLeft}});
        t = t.renamed(kRight, "b2");
        t = contract(t, slice, {{"k", kLeft}});
        cand[o] = t.renamed({{std::string("b2"), std::string("b")},
                             {std::string(kRight), std::string("k")}});
        w[o] = std::max(
            0.0, contract(cand[o], renvs[j + 1], {{"b", "b"}, {"k", "k"}})
                     .value()
                     .real());
      }
      const double total = w[0] + w[1];
      if (!(total > 0.0)) throw NumericError("sample_shots: zero weight");
      const std::size_t o = (rng.uniform01() * total < w[0]) ? 0 : 1;
      bits[j] = static_cast<char>('0' + o);
      env = cand[o];
    }
    ++record.counts[bits];
  }
  return record;
}

/// Born sampling of an LPDO chain in a product Pauli basis.
inline ShotRecord sample_shots(const LPDOState& rho, const PauliString& basis,
                               std::uint64_t shots, std::uint64_t seed) {
  require(shots > 0, "sample_shots: need at least one shot");
  require(basis.size() == rho.n_sites(), "sample_shots: basis must cover chain");
  LPDOState rot = rho;
  for (std::size_t j = 0; j < rho.n_sites(); ++j) {
    const Matrix2cd u = basis_rotation(basis.ops[j]);
    DenseTensor ut = detail::op_tensor(u, "po", kPhys);
    rot.sites[j] = contract(ut, rot.sites[j], {{kPhys, kPhys}})
                       .renamed("po", kPhys)
                       .permuted({kLeft, kPhys, kKraus, kRight});
  }

  const std::vector<DenseTensor> renvs = lpdo_right_trace_envs(rot);
  Rng rng(seed);
  ShotRecord record;
  record.basis = basis;
  record.shots = shots;

  const std::size_t n = rho.n_sites();
  for (std::uint64_t s = 0; s < shots; ++s) {
    DenseTensor env = detail::lpdo_boundary_env();
    std::string bits(n, '0');
    for (std::size_t j = 0; j < n; ++j) {
      DenseTensor cand[2];
      double w[2];
      for (std::size_t o = 0; o < 2; ++o) {
        DenseTensor slice = rot.sites[j].sliced(kPhys, o);
        DenseTensor t = contract(env, slice, {{"m", kLeft}});
        t = t.renamed(kRight, "m2");
        t = contract(t, slice.conjugated(), {{"n", kLeft}, {kKraus, kKraus}});
        cand[o] = t.renamed({{std::string("m2"), std::string("m")},
                             {std::string(kRight), std::string("n")}});
        w[o] = std::max(
            0.0, contract(cand[o], renvs[j + 1], {{"m", "m"}, {"n", "n"}})
                     .value()
                     .real());
      }
      const double total = w[0] + w[1];
      if (!(total > 0.0)) throw NumericError("sample_shots: zero weight");
      const std::size_t o = (rng.uniform01() * total < w[0]) ? 0 : 1;
      bits[j] = static_cast<char>('0' + o);
      env = cand[o];
    }
    ++record.counts[bits];
  }
  return record;
}

/// Born sampling of one full row (or column) of a PEPS; the basis support
/// must be exactly that line. Desk-scale lines are materialized densely.
inline ShotRecord sample_line_shots(const PEPSState& psi,
                                    const PauliString& basis,
                                    std::uint64_t shots, std::uint64_t seed,
                                    std::size_t chi = 0) {
  require(shots > 0, "sample_line_shots: need at least one shot");
  const bool horizontal = basis.support.size() > 1 &&
                          basis.support[1].row == basis.support[0].row;
  const std::size_t line_len = horizontal ? psi.cols : psi.rows;
  require(basis.size() == line_len, "sample_line_shots: basis must cover line");
  require(line_len <= 12, "sample_line_shots: line too long for dense sampling");

  DensityMatrix rho = reduced_density_matrix(
      psi, static_cast<std::size_t>(basis.support[0].row),
      static_cast<std::size_t>(basis.support[0].col), line_len, horizontal, chi);

  MatrixXcd u = MatrixXcd::Identity(1, 1);
  for (char c : basis.ops) u = kron(u, MatrixXcd(basis_rotation(c)));
  const MatrixXcd rotated = u * rho.mat * u.adjoint();

  const std::size_t dim = std::size_t{1} << line_len;
  std::vector<double> cum(dim);
  double acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    acc += std::max(0.0, rotated(static_cast<Eigen::Index>(i),
                                 static_cast<Eigen::Index>(i))
                             .real());
    cum[i] = acc;
  }
  if (!(acc > 0.0)) throw NumericError("sample_line_shots: zero weight");

  Rng rng(seed);
  ShotRecord record;
  record.basis = basis;
  record.shots = shots;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const std::size_t out = rng.discrete(cum.data(), dim);
    std::string bits(line_len, '0');
    for (std::size_t q = 0; q < line_len; ++q)
      if ((out >> (line_len - 1 - q)) & 1u) bits[q] = '1';
    ++record.counts[bits];
  }
  return record;
}

namespace detail {

/// Shared marginal-estimation core along one measured line. Every estimate
/// of a Pauli word is the unbiased +-1 product mean; estimates from all
/// matching bases are averaged uniformly.
inline std::vector<DensityMatrix> estimate_line_marginals(
    const std::vector<const ShotRecord*>& records,
    const std::vector<Coord>& line, std::size_t window_length) {
  const std::size_t n = line.size();
  require(window_length >= 1 && window_length <= n,
          "estimate_marginals: bad window length");
  for (const auto* rec : records) {
    require(rec->basis.support.size() == n,
            "estimate_marginals: record does not cover the line");
    for (std::size_t q = 0; q < n; ++q)
      require(rec->basis.support[q] == line[q],
              "estimate_marginals: record support mismatch");
  }

  const std::size_t wdim = std::size_t{1} << window_length;
  const std::vector<std::string> words =
      letter_combinations("IXYZ", window_length);

  std::vector<DensityMatrix> out;
  for (std::size_t start = 0; start + window_length <= n; ++start) {
    // per record: marginal outcome counts on this window
    std::vector<std::vector<double>> marg(records.size(),
                                          std::vector<double>(wdim, 0.0));
    for (std::size_t rix = 0; rix < records.size(); ++rix) {
      for (const auto& [bits, cnt] : records[rix]->counts) {
        std::size_t idx = 0;
        for (std::size_t q = 0; q < window_length; ++q)
          idx = (idx << 1) | static_cast<std::size_t>(bits[start + q] == '1');
        marg[rix][idx] += static_cast<double>(cnt);
      }
    }

    MatrixXcd sigma = MatrixXcd::Identity(wdim, wdim) / static_cast<double>(wdim);
    for (const auto& word : words) {
      bool all_identity = true;
      for (char c : word) all_identity = all_identity && c == 'I';
      if (all_identity) continue;  // identity coefficient pinned at 1

      double sum = 0.0;
      std::size_t matches = 0;
      for (std::size_t rix = 0; rix < records.size(); ++rix) {
        bool compatible = true;
        for (std::size_t q = 0; q < window_length; ++q)
          if (word[q] != 'I' &&
              records[rix]->basis.ops[start + q] != word[q]) {
            compatible = false;
            break;
          }
        if (!compatible) continue;
        double est = 0.0;
        for (std::size_t outix = 0; outix < wdim; ++outix) {
          int sign = 1;
          for (std::size_t q = 0; q < window_length; ++q)
            if (word[q] != 'I' && ((outix >> (window_length - 1 - q)) & 1u))
              sign = -sign;
          est += sign * marg[rix][outix];
        }
        sum += est / static_cast<double>(records[rix]->shots);
        ++matches;
      }
      require(matches > 0, "estimate_marginals: missing basis for word " + word);
      sigma += (sum / static_cast<double>(matches)) *
               pauli_word_matrix(word) / static_cast<double>(wdim);
    }

    DensityMatrix dm;
    for (std::size_t q = 0; q < window_length; ++q)
      dm.window.push_back(line[start + q]);
    dm.mat = sigma;
    out.push_back(std::move(dm));
  }
  return out;
}

}  // namespace detail

/// Marginal estimation for a 1D chain from shot records covering all 3^L
/// bases. The output is Hermitian with trace exactly 1 regardless of noise.
inline MarginalSet estimate_marginals(const std::vector<ShotRecord>& records,
                                      std::size_t window_length,
                                      std::size_t n_sites) {
  require(!records.empty(), "estimate_marginals: no records");
  std::vector<Coord> line(n_sites);
  for (std::size_t j = 0; j < n_sites; ++j)
    line[j] = {0, static_cast<int>(j)};
  std::vector<const ShotRecord*> ptrs;
  for (const auto& r : records) ptrs.push_back(&r);

  MarginalSet set;
  set.window_length = window_length;
  set.source = MarginalSource::Sampled;
  set.shots_per_basis = records.front().shots;
  set.sigmas = detail::estimate_line_marginals(ptrs, line, window_length);
  return set;
}

/// Exact marginals ("infinite-shot" mode): coefficients are analytic Pauli
/// expectations evaluated by tensor contraction, assembled through the same
/// 1/2^L sum of Pauli words as the sampled path.
template <typename ChainState>
inline MarginalSet exact_marginals(const ChainState& state,
                                   std::size_t window_length) {
  const std::size_t n = state.n_sites();
  require(window_length >= 1 && window_length <= n,
          "exact_marginals: bad window length");
  const std::size_t wdim = std::size_t{1} << window_length;
  const std::vector<std::string> words =
      letter_combinations("IXYZ", window_length);

  MarginalSet set;
  set.window_length = window_length;
  set.source = MarginalSource::Exact;
  for (std::size_t start = 0; start + window_length <= n; ++start) {
    MatrixXcd sigma = MatrixXcd::Zero(wdim, wdim);
    for (const auto& word : words) {
      bool all_identity = true;
      for (char c : word) all_identity = all_identity && c == 'I';
      const double coeff =
          all_identity
              ? 1.0
              : pauli_expectation(
                    state, PauliString::chain(word, static_cast<int>(start)));
      sigma += coeff * pauli_word_matrix(word) / static_cast<double>(wdim);
    }
    DensityMatrix dm;
    for (std::size_t q = 0; q < window_length; ++q)
      dm.window.push_back({0, static_cast<int>(start + q)});
    dm.mat = sigma;
    set.sigmas.push_back(std::move(dm));
  }
  return set;
}

/// Exact marginals of a PEPS over all 1xL and Lx1 windows, each obtained
/// from boundary-MPS environments at the given chi.
inline MarginalSet exact_marginals_peps(const PEPSState& psi,
                                        std::size_t window_length,
                                        std::size_t chi = 0) {
  MarginalSet set;
  set.window_length = window_length;
  set.source = MarginalSource::Exact;
  for (std::size_t r = 0; r < psi.rows; ++r)
    for (std::size_t c = 0; c + window_length <= psi.cols; ++c)
      set.sigmas.push_back(
          reduced_density_matrix(psi, r, c, window_length, true, chi));
  for (std::size_t c = 0; c < psi.cols; ++c)
    for (std::size_t r = 0; r + window_length <= psi.rows; ++r)
      set.sigmas.push_back(
          reduced_density_matrix(psi, r, c, window_length, false, chi));
  return set;
}

/// Sampled marginals for a chain state: measures all 3^L bases with m shots
/// each (per-basis seeds derived from `seed`) and estimates the windows.
template <typename ChainState>
inline MarginalSet sampled_marginals(const ChainState& state,
                                     std::size_t window_length,
                                     std::uint64_t shots, std::uint64_t seed) {
  const std::size_t n = state.n_sites();
  std::vector<ShotRecord> records;
  const auto bases = measurement_bases(window_length, n);
  for (std::size_t b = 0; b < bases.size(); ++b)
    records.push_back(
        sample_shots(state, bases[b], shots, derive_seed(seed, b)));
  MarginalSet set = estimate_marginals(records, window_length, n);
  set.seed = seed;
  return set;
}

// ---------------------------------------------------------------------------
// Shot record text interchange: a header line "basis <letters>" (chains) or
// "basis <letters> row|col <index>" (2D lines), then one "<bitstring> <count>"
// line per outcome; records separated by blank lines.
// ---------------------------------------------------------------------------

inline void write_shot_records(std::ostream& os,
                               const std::vector<ShotRecord>& records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    os << "basis " << rec.basis.ops;
    if (!rec.basis.support.empty() && rec.basis.support[0].row != 0)
      os << " row " << rec.basis.support[0].row;
    else if (rec.basis.support.size() > 1 &&
             rec.basis.support[1].row != rec.basis.support[0].row)
      os << " col " << rec.basis.support[0].col;
    os << "\n";
    for (const auto& [bits, cnt] : rec.counts) os << bits << " " << cnt << "\n";
    if (i + 1 < records.size()) os << "\n";
  }
}

inline std::vector<ShotRecord> read_shot_records(std::istream& is) {
  std::vector<ShotRecord> records;
  std::string line;
  ShotRecord current;
  bool in_record = false;
  auto flush = [&] {
    if (in_record) {
      require(!current.counts.empty(), "shot records: record with no counts");
      records.push_back(std::move(current));
      current = ShotRecord{};
      in_record = false;
    }
  };
  while (std::getline(is, line)) {
    if (line.empty()) {
      flush();
      continue;
    }
    std::istringstream ss(line);
    std::string head;
    ss >> head;
    if (head == "basis") {
      flush();
      std::string letters, axis;
      long index = 0;
      ss >> letters;
      std::vector<Coord> support(letters.size());
      if (ss >> axis >> index) {
        for (std::size_t q = 0; q < letters.size(); ++q)
          support[q] = (axis == "row")
                           ? Coord{static_cast<int>(index), static_cast<int>(q)}
                           : Coord{static_cast<int>(q), static_cast<int>(index)};
      } else {
        for (std::size_t q = 0; q < letters.size(); ++q)
          support[q] = {0, static_cast<int>(q)};
      }
      current.basis = PauliString(letters, support);
      in_record = true;
    } else {
      require(in_record, "shot records: counts before any basis line");
      std::uint64_t cnt = 0;
      std::istringstream row(line);
      std::string bits;
      row >> bits >> cnt;
      require(bits.size() == current.basis.size(),
              "shot records: outcome width mismatch");
      current.counts[bits] += cnt;
      current.shots += cnt;
    }
  }
  flush();
  return records;
}

inline void save_shot_records(const std::string& path,
                              const std::vector<ShotRecord>& records) {
  std::ofstream os(path);
  if (!os) throw NumericError("save_shot_records: cannot open '" + path + "'");
  write_shot_records(os, records);
}

inline std::vector<ShotRecord> load_shot_records(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw NumericError("load_shot_records: cannot open '" + path + "'");
  return read_shot_records(is);
}

}  // namespace tntomo
