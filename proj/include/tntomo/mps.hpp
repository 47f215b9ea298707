#pragma once

#include <cmath>
#include <vector>

#include "tntomo/density_matrix.hpp"
#include "tntomo/dense_tensor.hpp"
#include "tntomo/linalg.hpp"

namespace tntomo {

// Site tensor labels shared by every 1D network in the library.
inline constexpr const char* kLeft = "vl";
inline constexpr const char* kPhys = "p";
inline constexpr const char* kRight = "vr";
inline constexpr const char* kKraus = "k";

/// Matrix product state on an open chain: one (vl, p, vr) tensor per site,
/// physical dimension 2, boundary virtual dimensions 1. Immutable by
/// convention; operations return new states.
struct MPSState {
  std::vector<DenseTensor> sites;

  std::size_t n_sites() const { return sites.size(); }

  void validate() const {
    require(!sites.empty(), "MPSState: empty chain");
    require(sites.front().dim(kLeft) == 1 && sites.back().dim(kRight) == 1,
            "MPSState: boundary virtual dims must be 1");
    for (std::size_t j = 0; j < sites.size(); ++j) {
      require(sites[j].dim(kPhys) == 2, "MPSState: physical dim must be 2");
      if (j + 1 < sites.size())
        require(sites[j].dim(kRight) == sites[j + 1].dim(kLeft),
                "MPSState: bond dimension mismatch between sites");
    }
  }
};

/// Product state |b_0 b_1 ... b_{N-1}> with b in {0, 1}.
inline MPSState product_mps(const std::vector<int>& bits) {
  MPSState psi;
  for (int b : bits) {
    DenseTensor t({kLeft, kPhys, kRight}, {1, 2, 1});
    t.at({0, static_cast<std::size_t>(b), 0}) = 1.0;
    psi.sites.push_back(std::move(t));
  }
  return psi;
}

/// Product state with every site in the same single-qubit state (a0, a1).
inline MPSState uniform_product_mps(std::size_t n, cplx a0, cplx a1) {
  MPSState psi;
  for (std::size_t j = 0; j < n; ++j) {
    DenseTensor t({kLeft, kPhys, kRight}, {1, 2, 1});
    t.at({0, 0, 0}) = a0;
    t.at({0, 1, 0}) = a1;
    psi.sites.push_back(std::move(t));
  }
  return psi;
}

namespace detail {

// One step of the bra/ket transfer sweep. env labels ("b", "k"): bra-side
// and ket-side virtual bonds. bra_site is conjugated here.
inline DenseTensor overlap_step(const DenseTensor& env,
                                const DenseTensor& bra_site,
                                const DenseTensor& ket_site) {
  DenseTensor t = contract(env, bra_site.conjugated(), {{"b", kLeft}});
  t = t.renamed(kRight, "b2");
  t = contract(t, ket_site, {{"k", kLeft}, {kPhys, kPhys}});
  return t.renamed({{std::string("b2"), std::string("b")},
                    {std::string(kRight), std::string("k")}});
}

inline DenseTensor boundary_env() {
  DenseTensor e({"b", "k"}, {1, 1});
  e.at({0, 0}) = 1.0;
  return e;
}

}  // namespace detail

/// <psi|phi> by a left-to-right transfer sweep.
inline cplx inner_product(const MPSState& psi, const MPSState& phi) {
  require(psi.n_sites() == phi.n_sites(), "inner_product: size mismatch");
  DenseTensor env = detail::boundary_env();
  for (std::size_t j = 0; j < psi.n_sites(); ++j)
    env = detail::overlap_step(env, psi.sites[j], phi.sites[j]);
  return trace_pairs(env, {{"b", "k"}}).value();
}

inline double mps_norm(const MPSState& psi) {
  return std::sqrt(std::max(0.0, inner_product(psi, psi).real()));
}

inline MPSState normalized(const MPSState& psi) {
  const double n = mps_norm(psi);
  if (!(n > 0.0)) throw NumericError("normalize: zero-norm state");
  const double per_site = std::pow(n, 1.0 / static_cast<double>(psi.n_sites()));
  MPSState out;
  out.sites.reserve(psi.n_sites());
  for (const auto& t : psi.sites) out.sites.push_back(t.scaled(1.0 / per_site));
  return out;
}

/// Exact dense amplitude vector; site 0 is the most significant qubit.
inline VectorXcd to_dense(const MPSState& psi, std::size_t max_sites = 12) {
  require(psi.n_sites() <= max_sites, "to_dense: chain too long for dense form");
  DenseTensor acc = psi.sites[0].sliced(kLeft, 0).renamed(kPhys, "p0");
  for (std::size_t j = 1; j < psi.n_sites(); ++j) {
    acc = contract(acc, psi.sites[j], {{kRight, kLeft}});
    acc = acc.renamed(kPhys, "p" + std::to_string(j));
  }
  acc = acc.sliced(kRight, 0);
  std::vector<std::string> ps;
  for (std::size_t j = 0; j < psi.n_sites(); ++j)
    ps.push_back("p" + std::to_string(j));
  acc = acc.fused(ps, "p");
  return Eigen::Map<const VectorXcd>(acc.data().data(), acc.dim("p"));
}

/// Left trace environments: env_left[j] covers sites [0, j).
inline std::vector<DenseTensor> left_trace_envs(const MPSState& psi) {
  std::vector<DenseTensor> envs;
  envs.push_back(detail::boundary_env());
  for (std::size_t j = 0; j < psi.n_sites(); ++j)
    envs.push_back(detail::overlap_step(envs.back(), psi.sites[j], psi.sites[j]));
  return envs;
}

/// Right trace environments: env_right[j] covers sites [j, N).
inline std::vector<DenseTensor> right_trace_envs(const MPSState& psi) {
  const std::size_t n = psi.n_sites();
  std::vector<DenseTensor> envs(n + 1, detail::boundary_env());
  for (std::size_t j = n; j-- > 0;) {
    DenseTensor t =
        contract(envs[j + 1], psi.sites[j].conjugated(), {{"b", kRight}});
    t = t.renamed(kLeft, "b2");
    t = contract(t, psi.sites[j], {{"k", kRight}, {kPhys, kPhys}});
    envs[j] = t.renamed({{std::string("b2"), std::string("b")},
                         {std::string(kLeft), std::string("k")}});
  }
  return envs;
}

/// Exact reduced density matrix of the contiguous window
/// [start, start + length). mat[t][o] = <t|rho|o>.
inline DensityMatrix reduced_density_matrix(const MPSState& psi,
                                            std::size_t start,
                                            std::size_t length) {
  require(length >= 1 && start + length <= psi.n_sites(),
          "reduced_density_matrix: window out of range");
  DenseTensor env = detail::boundary_env();
  for (std::size_t j = 0; j < start; ++j)
    env = detail::overlap_step(env, psi.sites[j], psi.sites[j]);

  std::vector<std::string> bra_ps, ket_ps;
  for (std::size_t s = 0; s < length; ++s) {
    const auto& site = psi.sites[start + s];
    const std::string pb = "pb" + std::to_string(s);
    const std::string pk = "pk" + std::to_string(s);
    env = contract(env, site.conjugated().renamed(kPhys, pb), {{"b", kLeft}});
    env = env.renamed(kRight, "b2");
    env = contract(env, site.renamed(kPhys, pk), {{"k", kLeft}});
    env = env.renamed({{std::string("b2"), std::string("b")},
                       {std::string(kRight), std::string("k")}});
    bra_ps.push_back(pb);
    ket_ps.push_back(pk);
  }

  DenseTensor right = detail::boundary_env();
  {
    std::vector<DenseTensor> renvs = right_trace_envs(psi);
    right = renvs[start + length];
  }
  env = contract(env, right, {{"b", "b"}, {"k", "k"}});
  env = env.fused(ket_ps, "r").fused(bra_ps, "c");

  DensityMatrix rho;
  for (std::size_t s = 0; s < length; ++s)
    rho.window.push_back({0, static_cast<int>(start + s)});
  rho.mat = to_matrix(env, "r", "c");
  return rho;
}

/// Single-qubit operator applied to one site (used for basis rotations).
inline MPSState apply_single_site(const MPSState& psi, std::size_t site,
                                  const Matrix2cd& op) {
  MPSState out = psi;
  DenseTensor o({"po", kPhys}, {2, 2});
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) o.at({r, c}) = op(r, c);
  out.sites[site] =
      contract(o, psi.sites[site], {{kPhys, kPhys}}).renamed("po", kPhys);
  return out;
}

/// SVD compression to bond dimension `max_rank`. A full left-orthogonalizing
/// sweep first, then a right-to-left truncation sweep; this is the standard
/// site-to-site canonical-form truncation.
inline MPSState compress_mps(const MPSState& psi, std::size_t max_rank,
                             double cutoff = 0.0) {
  const std::size_t n = psi.n_sites();
  MPSState out = psi;
  // left-orthogonalize without truncation
  for (std::size_t j = 0; j + 1 < n; ++j) {
    SvdResult f = svd_split(out.sites[j], {kLeft, kPhys},
                            out.sites[j].element_count(), 0.0, "s");
    out.sites[j] = f.left_isometry.renamed("s", kRight);
    DenseTensor sv = scale_axis(f.right_isometry, "s", f.singular_values);
    out.sites[j + 1] =
        contract(sv.renamed("s", "sl"), out.sites[j + 1], {{kRight, kLeft}})
            .renamed("sl", kLeft);
  }
  // truncate right-to-left
  for (std::size_t j = n; j-- > 1;) {
    SvdResult f = svd_split(out.sites[j], {kLeft}, max_rank, cutoff, "s");
    out.sites[j] = f.right_isometry.renamed("s", kLeft);
    DenseTensor us = scale_axis(f.left_isometry, "s", f.singular_values);
    out.sites[j - 1] =
        contract(out.sites[j - 1], us.renamed(kLeft, "sl"), {{kRight, "sl"}})
            .renamed("s", kRight);
  }
  return out;
}

/// MPS from a dense amplitude vector by successive SVD splits.
inline MPSState mps_from_dense(const VectorXcd& amplitudes,
                               std::size_t max_rank = 0, double cutoff = 0.0) {
  std::size_t n = 0;
  while ((std::size_t{1} << n) < static_cast<std::size_t>(amplitudes.size())) ++n;
  require((std::size_t{1} << n) == static_cast<std::size_t>(amplitudes.size()),
          "mps_from_dense: length must be a power of two");
  require(n >= 1, "mps_from_dense: need at least one qubit");
  if (max_rank == 0) max_rank = static_cast<std::size_t>(amplitudes.size());

  std::vector<std::string> plabels(n);
  std::vector<std::size_t> pdims(n, 2);
  for (std::size_t j = 0; j < n; ++j) plabels[j] = "p" + std::to_string(j);
  DenseTensor rest({"full"}, {static_cast<std::size_t>(amplitudes.size())});
  for (Eigen::Index i = 0; i < amplitudes.size(); ++i)
    rest.data()[static_cast<std::size_t>(i)] = amplitudes(i);
  rest = rest.split("full", plabels, pdims);
  rest = rest.split(plabels[0], {kLeft, plabels[0]}, {1, 2});

  MPSState psi;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    SvdResult f = svd_split(rest, {kLeft, plabels[j]}, max_rank, cutoff, "s");
    psi.sites.push_back(
        f.left_isometry.renamed({{plabels[j], kPhys}, {std::string("s"), kRight}}));
    rest = scale_axis(f.right_isometry, "s", f.singular_values)
               .renamed("s", kLeft);
  }
  rest = rest.renamed(plabels[n - 1], kPhys);
  rest = rest.split(kPhys, {kPhys, kRight}, {2, 1});
  psi.sites.push_back(rest.permuted({kLeft, kPhys, kRight}));
  psi.validate();
  return psi;
}

}  // namespace tntomo
