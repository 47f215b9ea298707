#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tntomo/density_matrix.hpp"
#include "tntomo/mps.hpp"

namespace tntomo {

// PEPS site tensor labels.
inline constexpr const char* kUp = "u";
inline constexpr const char* kDown = "d";
inline constexpr const char* kLft = "l";
inline constexpr const char* kRgt = "r";

/// Pure state on an open square lattice: one (u, d, l, r, p) tensor per site,
/// stored row-major. Boundary virtual dimensions are 1.
struct PEPSState {
  std::size_t rows = 0, cols = 0;
  std::vector<DenseTensor> grid;

  const DenseTensor& at(std::size_t r, std::size_t c) const {
    return grid[r * cols + c];
  }
  DenseTensor& at(std::size_t r, std::size_t c) { return grid[r * cols + c]; }

  std::size_t n_sites() const { return rows * cols; }

  /// Largest virtual bond dimension anywhere in the grid.
  std::size_t max_bond() const {
    std::size_t d = 1;
    for (const auto& t : grid)
      for (const char* lbl : {kUp, kDown, kLft, kRgt})
        d = std::max(d, t.dim(lbl));
    return d;
  }

  void validate() const {
    require(rows >= 1 && cols >= 1 && grid.size() == rows * cols,
            "PEPSState: bad grid");
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) {
        const auto& t = at(r, c);
        require(t.dim(kPhys) == 2, "PEPSState: physical dim must be 2");
        if (r == 0) require(t.dim(kUp) == 1, "PEPSState: top boundary dim");
        if (r == rows - 1)
          require(t.dim(kDown) == 1, "PEPSState: bottom boundary dim");
        if (c == 0) require(t.dim(kLft) == 1, "PEPSState: left boundary dim");
        if (c == cols - 1)
          require(t.dim(kRgt) == 1, "PEPSState: right boundary dim");
        if (r + 1 < rows)
          require(t.dim(kDown) == at(r + 1, c).dim(kUp),
                  "PEPSState: vertical bond mismatch");
        if (c + 1 < cols)
          require(t.dim(kRgt) == at(r, c + 1).dim(kLft),
                  "PEPSState: horizontal bond mismatch");
      }
  }
};

/// Reflection across the main diagonal; rows/cols and (u,d)/(l,r) swap.
inline PEPSState peps_transposed(const PEPSState& psi) {
  PEPSState out;
  out.rows = psi.cols;
  out.cols = psi.rows;
  out.grid.reserve(psi.grid.size());
  for (std::size_t c = 0; c < psi.cols; ++c)
    for (std::size_t r = 0; r < psi.rows; ++r)
      out.grid.push_back(psi.at(r, c).renamed({{std::string(kUp), std::string(kLft)},
                                               {std::string(kLft), std::string(kUp)},
                                               {std::string(kDown), std::string(kRgt)},
                                               {std::string(kRgt), std::string(kDown)}}));
  return out;
}

inline PEPSState apply_single_site(const PEPSState& psi, std::size_t row,
                                   std::size_t col, const Matrix2cd& op) {
  PEPSState out = psi;
  DenseTensor o({"po", kPhys}, {2, 2});
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) o.at({r, c}) = op(r, c);
  out.at(row, col) =
      contract(o, psi.at(row, col), {{kPhys, kPhys}}).renamed("po", kPhys);
  return out;
}

namespace detail {

/// Double-layer tensor sum_p conj(bra) x ket with virtual pairs fused
/// (bra index major). With open_phys the physical legs stay open as
/// ("pb", "pk").
inline DenseTensor double_layer_site(const DenseTensor& bra_site,
                                     const DenseTensor& ket_site,
                                     bool open_phys = false) {
  DenseTensor b = bra_site.conjugated().suffixed("_b");
  DenseTensor k = ket_site.suffixed("_k");
  DenseTensor t = open_phys
                      ? contract(b.renamed("p_b", "pb"),
                                 k.renamed("p_k", "pk"), {})
                      : contract(b, k, {{"p_b", "p_k"}});
  t = t.fused({"u_b", "u_k"}, kUp).fused({"d_b", "d_k"}, kDown);
  t = t.fused({"l_b", "l_k"}, kLft).fused({"r_b", "r_k"}, kRgt);
  return t;
}

/// Boundary MPS chain of trivial tensors (value 1).
inline std::vector<DenseTensor> vacuum_chain(std::size_t n) {
  std::vector<DenseTensor> chain;
  for (std::size_t j = 0; j < n; ++j) {
    DenseTensor t({kLeft, kPhys, kRight}, {1, 1, 1});
    t.at({0, 0, 0}) = 1.0;
    chain.push_back(std::move(t));
  }
  return chain;
}

/// Site-to-site SVD compression of a generic (vl, p, vr) chain.
inline std::vector<DenseTensor> compress_chain(std::vector<DenseTensor> chain,
                                               std::size_t max_rank,
                                               double cutoff = 0.0) {
  const std::size_t n = chain.size();
  if (n <= 1) return chain;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    SvdResult f = svd_split(chain[j], {kLeft, kPhys},
                            chain[j].element_count(), 0.0, "s");
    chain[j] = f.left_isometry.renamed("s", kRight);
    DenseTensor sv = scale_axis(f.right_isometry, "s", f.singular_values);
    chain[j + 1] = contract(sv.renamed("s", "sl"), chain[j + 1],
                            {{kRight, kLeft}})
                       .renamed("sl", kLeft);
  }
  for (std::size_t j = n; j-- > 1;) {
    SvdResult f = svd_split(chain[j], {kLeft}, max_rank, cutoff, "s");
    chain[j] = f.right_isometry.renamed("s", kLeft);
    DenseTensor us = scale_axis(f.left_isometry, "s", f.singular_values);
    chain[j - 1] = contract(chain[j - 1], us.renamed(kLeft, "sl"),
                            {{kRight, "sl"}})
                       .renamed("s", kRight);
  }
  return chain;
}

/// Absorbs one network row into a boundary chain. `from_above` contracts the
/// boundary's dangling legs with the row's up legs (sweeping downward);
/// otherwise with the row's down legs (sweeping upward).
inline std::vector<DenseTensor> absorb_row(
    const std::vector<DenseTensor>& boundary,
    const std::vector<DenseTensor>& row, bool from_above, std::size_t chi) {
  require(boundary.size() == row.size(), "absorb_row: length mismatch");
  std::vector<DenseTensor> out;
  out.reserve(row.size());
  for (std::size_t c = 0; c < row.size(); ++c) {
    const char* in_leg = from_above ? kUp : kDown;
    const char* out_leg = from_above ? kDown : kUp;
    DenseTensor t = contract(boundary[c], row[c], {{kPhys, in_leg}});
    t = t.renamed(out_leg, "pnew");
    t = t.fused({kLeft, kLft}, "nl").fused({kRight, kRgt}, "nr");
    t = t.renamed({{std::string("nl"), std::string(kLeft)},
                   {std::string("pnew"), std::string(kPhys)},
                   {std::string("nr"), std::string(kRight)}});
    out.push_back(t.permuted({kLeft, kPhys, kRight}));
  }
  double norm_sq = 0.0;
  for (const auto& t : out) norm_sq += t.frobenius_norm();
  if (!std::isfinite(norm_sq) || norm_sq == 0.0)
    throw NumericError("absorb_row: zero-norm boundary row");
  return compress_chain(std::move(out), chi);
}

/// Contracts a fully trivial-phys chain to its scalar value.
inline cplx collapse_chain(const std::vector<DenseTensor>& chain) {
  DenseTensor acc = DenseTensor::identity(kLeft, kRight, 1);
  for (const auto& t : chain) {
    require(t.dim(kPhys) == 1, "collapse_chain: open physical leg");
    acc = contract(acc, t.sliced(kPhys, 0), {{kRight, kLeft}});
  }
  return trace_pairs(acc, {{kLeft, kRight}}).value();
}

/// Double-layer rows for <bra|ket>; bra and ket must share the geometry.
inline std::vector<std::vector<DenseTensor>> sandwich_rows(
    const PEPSState& bra, const PEPSState& ket) {
  std::vector<std::vector<DenseTensor>> rows(bra.rows);
  for (std::size_t r = 0; r < bra.rows; ++r)
    for (std::size_t c = 0; c < bra.cols; ++c)
      rows[r].push_back(double_layer_site(bra.at(r, c), ket.at(r, c)));
  return rows;
}

}  // namespace detail

/// <bra|ket> evaluated by boundary-MPS contraction truncated at chi
/// (chi = 0 picks the bond-squared default of the operands).
inline cplx peps_overlap(const PEPSState& bra, const PEPSState& ket,
                         std::size_t chi = 0) {
  require(bra.rows == ket.rows && bra.cols == ket.cols,
          "peps_overlap: geometry mismatch");
  if (chi == 0) chi = bra.max_bond() * ket.max_bond();
  auto rows = detail::sandwich_rows(bra, ket);
  std::vector<DenseTensor> boundary = detail::vacuum_chain(bra.cols);
  for (std::size_t r = 0; r < bra.rows; ++r)
    boundary = detail::absorb_row(boundary, rows[r], true, chi);
  return detail::collapse_chain(boundary);
}

inline double peps_norm_sq(const PEPSState& psi, std::size_t chi = 0) {
  return peps_overlap(psi, psi, chi).real();
}

inline PEPSState normalized(const PEPSState& psi, std::size_t chi = 0) {
  const double n2 = peps_norm_sq(psi, chi);
  if (!(n2 > 0.0)) throw NumericError("normalize: zero-norm PEPS");
  const double per_site =
      std::pow(n2, 1.0 / (2.0 * static_cast<double>(psi.n_sites())));
  PEPSState out = psi;
  for (auto& t : out.grid) t = t.scaled(1.0 / per_site);
  return out;
}

/// Operator fidelity |<a|b>|^2 / (<a|a><b|b>) for two pure PEPS.
inline double peps_fidelity(const PEPSState& a, const PEPSState& b,
                            std::size_t chi = 0) {
  const double na = peps_norm_sq(a, chi);
  const double nb = peps_norm_sq(b, chi);
  if (!(na > 0.0) || !(nb > 0.0))
    throw NumericError("peps_fidelity: zero-norm operand");
  return std::norm(peps_overlap(a, b, chi)) / (na * nb);
}

/// Exact reduced density matrix on a straight 1xL (horizontal) or Lx1
/// (vertical) patch, via boundary-MPS environments.
inline DensityMatrix reduced_density_matrix(const PEPSState& psi,
                                            std::size_t row, std::size_t col,
                                            std::size_t length, bool horizontal,
                                            std::size_t chi = 0) {
  if (!horizontal) {
    DensityMatrix t =
        reduced_density_matrix(peps_transposed(psi), col, row, length, true, chi);
    for (auto& w : t.window) std::swap(w.row, w.col);
    return t;
  }
  require(row < psi.rows && col + length <= psi.cols && length >= 1,
          "reduced_density_matrix: window out of range");
  if (chi == 0) chi = psi.max_bond() * psi.max_bond();

  auto rows = detail::sandwich_rows(psi, psi);
  std::vector<DenseTensor> top = detail::vacuum_chain(psi.cols);
  for (std::size_t r = 0; r < row; ++r)
    top = detail::absorb_row(top, rows[r], true, chi);
  std::vector<DenseTensor> bottom = detail::vacuum_chain(psi.cols);
  for (std::size_t r = psi.rows; r-- > row + 1;)
    bottom = detail::absorb_row(bottom, rows[r], false, chi);

  DenseTensor env({"t", "m", "b"}, {1, 1, 1});
  env.at({0, 0, 0}) = 1.0;
  std::vector<std::string> ket_ps, bra_ps;
  for (std::size_t c = 0; c < psi.cols; ++c) {
    const bool open = c >= col && c < col + length;
    DenseTensor mid =
        open ? detail::double_layer_site(psi.at(row, c), psi.at(row, c), true)
             : rows[row][c];
    if (open) {
      const std::string pb = "pb" + std::to_string(c);
      const std::string pk = "pk" + std::to_string(c);
      mid = mid.renamed({{std::string("pb"), pb}, {std::string("pk"), pk}});
      bra_ps.push_back(pb);
      ket_ps.push_back(pk);
    }
    env = contract(env, top[c], {{"t", kLeft}});
    env = env.renamed({{std::string(kPhys), std::string("pt")},
                       {std::string(kRight), std::string("t2")}});
    env = contract(env, mid, {{"m", kLft}, {"pt", kUp}});
    env = env.renamed({{std::string(kRgt), std::string("m2")},
                       {std::string(kDown), std::string("pd")}});
    env = contract(env, bottom[c], {{"b", kLeft}, {"pd", kPhys}});
    env = env.renamed({{std::string("t2"), std::string("t")},
                       {std::string("m2"), std::string("m")},
                       {std::string(kRight), std::string("b")}});
  }
  env = env.sliced("t", 0).sliced("m", 0).sliced("b", 0);
  env = env.fused(ket_ps, "r").fused(bra_ps, "c");

  DensityMatrix out;
  for (std::size_t s = 0; s < length; ++s)
    out.window.push_back(
        {static_cast<int>(row), static_cast<int>(col + s)});
  out.mat = to_matrix(env, "r", "c");
  return out;
}

/// Exact dense amplitude vector in row-major site order (site (0,0) is the
/// most significant qubit).
inline VectorXcd to_dense(const PEPSState& psi, std::size_t max_sites = 12) {
  require(psi.n_sites() <= max_sites, "to_dense: PEPS too large for dense form");
  std::vector<std::string> dangling(psi.cols);
  for (std::size_t c = 0; c < psi.cols; ++c) dangling[c] = "d" + std::to_string(c);

  DenseTensor acc({"h"}, {1});
  acc.at({0}) = 1.0;
  // seed trivial dangling legs
  for (std::size_t c = 0; c < psi.cols; ++c)
    acc = contract(acc, DenseTensor::identity(dangling[c], "junk_", 1), {})
              .sliced("junk_", 0);
  acc = acc.sliced("h", 0);

  std::vector<std::string> phys_order;
  for (std::size_t r = 0; r < psi.rows; ++r) {
    DenseTensor rowacc = acc;
    for (std::size_t c = 0; c < psi.cols; ++c) {
      DenseTensor site = psi.at(r, c);
      const std::string pl = "p_" + std::to_string(r) + "_" + std::to_string(c);
      site = site.renamed(kPhys, pl);
      phys_order.push_back(pl);
      if (c == 0) {
        rowacc = contract(rowacc, site.sliced(kLft, 0), {{dangling[c], kUp}});
      } else {
        rowacc = contract(rowacc, site, {{dangling[c], kUp}, {"h", kLft}});
      }
      rowacc = rowacc.renamed(kDown, dangling[c]);
      rowacc = (c + 1 == psi.cols) ? rowacc.sliced(kRgt, 0)
                                   : rowacc.renamed(kRgt, "h");
    }
    acc = rowacc;
  }
  for (std::size_t c = 0; c < psi.cols; ++c) acc = acc.sliced(dangling[c], 0);
  acc = acc.fused(phys_order, "p");
  return Eigen::Map<const VectorXcd>(acc.data().data(), acc.dim("p"));
}

/// Tr[rho_window P] for a Pauli word on a straight window.
inline double peps_pauli_expectation(const PEPSState& psi,
                                     const PauliString& word,
                                     std::size_t chi = 0) {
  require(!word.support.empty(), "peps_pauli_expectation: empty support");
  const bool horizontal =
      word.support.size() == 1 || word.support[1].row == word.support[0].row;
  for (std::size_t i = 1; i < word.support.size(); ++i) {
    if (horizontal)
      require(word.support[i].row == word.support[0].row &&
                  word.support[i].col == word.support[0].col + static_cast<int>(i),
              "peps_pauli_expectation: window must be straight and contiguous");
    else
      require(word.support[i].col == word.support[0].col &&
                  word.support[i].row == word.support[0].row + static_cast<int>(i),
              "peps_pauli_expectation: window must be straight and contiguous");
  }
  DensityMatrix rho = reduced_density_matrix(
      psi, static_cast<std::size_t>(word.support[0].row),
      static_cast<std::size_t>(word.support[0].col), word.support.size(),
      horizontal, chi);
  return (rho.mat * pauli_word_matrix(word.ops)).trace().real();
}

}  // namespace tntomo
