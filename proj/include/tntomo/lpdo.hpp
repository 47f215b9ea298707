#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tntomo/density_matrix.hpp"
#include "tntomo/mps.hpp"

namespace tntomo {

/// Locally purified density operator: per site one (vl, p, k, vr) tensor A_j.
/// The represented operator is rho = sum over Kraus configurations of
/// (prod A_j) (prod A_j^*), Hermitian and positive semidefinite by
/// construction.
struct LPDOState {
  std::vector<DenseTensor> sites;

  std::size_t n_sites() const { return sites.size(); }

  std::size_t kraus_dim(std::size_t j) const { return sites[j].dim(kKraus); }

  void validate() const {
    require(!sites.empty(), "LPDOState: empty chain");
    require(sites.front().dim(kLeft) == 1 && sites.back().dim(kRight) == 1,
            "LPDOState: boundary virtual dims must be 1");
    for (std::size_t j = 0; j < sites.size(); ++j) {
      require(sites[j].dim(kPhys) == 2, "LPDOState: physical dim must be 2");
      require(sites[j].dim(kKraus) >= 1, "LPDOState: Kraus dim must be positive");
      if (j + 1 < sites.size())
        require(sites[j].dim(kRight) == sites[j + 1].dim(kLeft),
                "LPDOState: bond dimension mismatch");
    }
  }
};

/// Pure state embedded as an LPDO with Kraus dimension 1 everywhere.
inline LPDOState lpdo_from_mps(const MPSState& psi) {
  LPDOState rho;
  rho.sites.reserve(psi.n_sites());
  for (const auto& t : psi.sites)
    rho.sites.push_back(t.split(kPhys, {kPhys, kKraus}, {2, 1}));
  return rho;
}

/// Inverse of lpdo_from_mps; requires Kraus dimension 1 at every site.
inline MPSState lpdo_to_mps(const LPDOState& rho) {
  MPSState psi;
  psi.sites.reserve(rho.n_sites());
  for (const auto& t : rho.sites) {
    require(t.dim(kKraus) == 1, "lpdo_to_mps: Kraus dimension must be 1");
    psi.sites.push_back(t.sliced(kKraus, 0).permuted({kLeft, kPhys, kRight}));
  }
  return psi;
}

inline bool lpdo_is_pure_form(const LPDOState& rho) {
  for (const auto& t : rho.sites)
    if (t.dim(kKraus) != 1) return false;
  return true;
}

namespace detail {

// Trace transfer step: env labels ("m", "n") for ket / bra layer bonds.
inline DenseTensor lpdo_trace_step(const DenseTensor& env,
                                   const DenseTensor& site) {
  DenseTensor t = contract(env, site, {{"m", kLeft}});
  t = t.renamed(kRight, "m2");
  t = contract(t, site.conjugated(),
               {{"n", kLeft}, {kPhys, kPhys}, {kKraus, kKraus}});
  return t.renamed({{std::string("m2"), std::string("m")},
                    {std::string(kRight), std::string("n")}});
}

inline DenseTensor lpdo_boundary_env() {
  DenseTensor e({"m", "n"}, {1, 1});
  e.at({0, 0}) = 1.0;
  return e;
}

}  // namespace detail

inline double lpdo_trace(const LPDOState& rho) {
  DenseTensor env = detail::lpdo_boundary_env();
  for (const auto& site : rho.sites) env = detail::lpdo_trace_step(env, site);
  return trace_pairs(env, {{"m", "n"}}).value().real();
}

/// Rescales so that trace(rho) = 1, spreading the factor over all sites.
inline LPDOState normalized(const LPDOState& rho) {
  const double tr = lpdo_trace(rho);
  if (!(tr > 0.0)) throw NumericError("normalize: zero-trace LPDO");
  const double per_site =
      std::pow(tr, 1.0 / (2.0 * static_cast<double>(rho.n_sites())));
  LPDOState out;
  out.sites.reserve(rho.n_sites());
  for (const auto& t : rho.sites) out.sites.push_back(t.scaled(1.0 / per_site));
  return out;
}

/// Left trace environments; element j covers sites [0, j).
inline std::vector<DenseTensor> lpdo_left_trace_envs(const LPDOState& rho) {
  std::vector<DenseTensor> envs;
  envs.push_back(detail::lpdo_boundary_env());
  for (const auto& site : rho.sites)
    envs.push_back(detail::lpdo_trace_step(envs.back(), site));
  return envs;
}

/// Right trace environments; element j covers sites [j, N).
inline std::vector<DenseTensor> lpdo_right_trace_envs(const LPDOState& rho) {
  const std::size_t n = rho.n_sites();
  std::vector<DenseTensor> envs(n + 1, detail::lpdo_boundary_env());
  for (std::size_t j = n; j-- > 0;) {
    DenseTensor t = contract(envs[j + 1], rho.sites[j], {{"m", kRight}});
    t = t.renamed(kLeft, "m2");
    t = contract(t, rho.sites[j].conjugated(),
                 {{"n", kRight}, {kPhys, kPhys}, {kKraus, kKraus}});
    envs[j] = t.renamed({{std::string("m2"), std::string("m")},
                         {std::string(kLeft), std::string("n")}});
  }
  return envs;
}

/// Hilbert-Schmidt inner product Tr[rho1 rho2] by a four-layer transfer
/// sweep; cost polynomial in the bond and Kraus dimensions.
inline double hs_inner(const LPDOState& rho1, const LPDOState& rho2) {
  require(rho1.n_sites() == rho2.n_sites(), "hs_inner: size mismatch");
  DenseTensor env({"m", "n", "a", "b"}, {1, 1, 1, 1});
  env.at({0, 0, 0, 0}) = 1.0;
  for (std::size_t j = 0; j < rho1.n_sites(); ++j) {
    const DenseTensor a = rho1.sites[j].renamed(
        {{kLeft, "m"}, {kPhys, "t"}, {kKraus, "k1"}, {kRight, "m2"}});
    const DenseTensor ac = rho1.sites[j].conjugated().renamed(
        {{kLeft, "n"}, {kPhys, "o"}, {kKraus, "k1"}, {kRight, "n2"}});
    const DenseTensor b = rho2.sites[j].renamed(
        {{kLeft, "a"}, {kPhys, "o"}, {kKraus, "k2"}, {kRight, "a2"}});
    const DenseTensor bc = rho2.sites[j].conjugated().renamed(
        {{kLeft, "b"}, {kPhys, "t"}, {kKraus, "k2"}, {kRight, "b2"}});
    env = contract(env, a, {{"m", "m"}});
    env = contract(env, ac, {{"n", "n"}, {"k1", "k1"}});
    env = contract(env, b, {{"a", "a"}, {"o", "o"}});
    env = contract(env, bc, {{"b", "b"}, {"t", "t"}, {"k2", "k2"}});
    env = env.renamed({{"m2", "m"}, {"n2", "n"}, {"a2", "a"}, {"b2", "b"}});
  }
  return env.value().real();
}

inline double purity(const LPDOState& rho) { return hs_inner(rho, rho); }

/// Operator-space fidelity Tr(r1 r2) / sqrt(Tr r1^2 Tr r2^2); coincides with
/// |<psi|phi>|^2 for pure states and is computable at tensor-network cost.
inline double operator_fidelity(const LPDOState& rho1, const LPDOState& rho2) {
  require(rho1.n_sites() == rho2.n_sites(), "operator_fidelity: size mismatch");
  if (lpdo_is_pure_form(rho1) && lpdo_is_pure_form(rho2)) {
    const MPSState p1 = lpdo_to_mps(rho1);
    const MPSState p2 = lpdo_to_mps(rho2);
    const double n1 = inner_product(p1, p1).real();
    const double n2 = inner_product(p2, p2).real();
    if (!(n1 > 0.0) || !(n2 > 0.0))
      throw NumericError("operator_fidelity: zero-purity operand");
    return std::norm(inner_product(p1, p2)) / (n1 * n2);
  }
  const double p1 = purity(rho1);
  const double p2 = purity(rho2);
  if (!(p1 > 0.0) || !(p2 > 0.0))
    throw NumericError("operator_fidelity: zero-purity operand");
  return hs_inner(rho1, rho2) / std::sqrt(p1 * p2);
}

/// Exact dense density matrix. The purification is materialized as a
/// 2^N x (prod d_kappa) matrix M; rho = M M^dag.
inline DensityMatrix to_dense(const LPDOState& rho, std::size_t max_sites = 6) {
  const std::size_t n = rho.n_sites();
  require(n <= max_sites, "to_dense: LPDO too long for dense form");

  DenseTensor acc = rho.sites[0].sliced(kLeft, 0).renamed(
      {{kPhys, "p0"}, {kKraus, "k0"}});
  for (std::size_t j = 1; j < n; ++j) {
    acc = contract(acc, rho.sites[j], {{kRight, kLeft}});
    acc = acc.renamed(
        {{kPhys, "p" + std::to_string(j)}, {kKraus, "k" + std::to_string(j)}});
  }
  acc = acc.sliced(kRight, 0);

  std::vector<std::string> ps, ks;
  for (std::size_t j = 0; j < n; ++j) {
    ps.push_back("p" + std::to_string(j));
    ks.push_back("k" + std::to_string(j));
  }
  acc = acc.fused(ps, "p").fused(ks, "kall");
  const MatrixXcd m = to_matrix(acc, "p", "kall");

  DensityMatrix out;
  for (std::size_t j = 0; j < n; ++j)
    out.window.push_back({0, static_cast<int>(j)});
  out.mat = m * m.adjoint();
  return out;
}

/// Exact reduced density matrix of sites [start, start + length).
inline DensityMatrix reduced_density_matrix(const LPDOState& rho,
                                            std::size_t start,
                                            std::size_t length) {
  require(length >= 1 && start + length <= rho.n_sites(),
          "reduced_density_matrix: window out of range");
  DenseTensor env = detail::lpdo_boundary_env();
  for (std::size_t j = 0; j < start; ++j)
    env = detail::lpdo_trace_step(env, rho.sites[j]);

  std::vector<std::string> ket_ps, bra_ps;
  for (std::size_t s = 0; s < length; ++s) {
    const auto& site = rho.sites[start + s];
    const std::string pk = "pk" + std::to_string(s);
    const std::string pb = "pb" + std::to_string(s);
    env = contract(env, site.renamed(kPhys, pk), {{"m", kLeft}});
    env = env.renamed(kRight, "m2");
    env = contract(env, site.conjugated().renamed(kPhys, pb),
                   {{"n", kLeft}, {kKraus, kKraus}});
    env = env.renamed({{std::string("m2"), std::string("m")},
                       {std::string(kRight), std::string("n")}});
    ket_ps.push_back(pk);
    bra_ps.push_back(pb);
  }

  const std::vector<DenseTensor> renvs = lpdo_right_trace_envs(rho);
  env = contract(env, renvs[start + length], {{"m", "m"}, {"n", "n"}});
  env = env.fused(ket_ps, "r").fused(bra_ps, "c");

  DensityMatrix out;
  for (std::size_t s = 0; s < length; ++s)
    out.window.push_back({0, static_cast<int>(start + s)});
  out.mat = to_matrix(env, "r", "c");
  return out;
}

}  // namespace tntomo
