#pragma once

#include <functional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tntomo/hamiltonian.hpp"
#include "tntomo/mps.hpp"

namespace tntomo {

enum class EigenWhich { Smallest, Largest };

struct SweepOptions {
  std::size_t bond_dim = 16;
  std::size_t max_sweeps = 100;
  double energy_tol = 1e-10;
  std::size_t lanczos_max_iters = 40;
  double lanczos_tol = 1e-12;
};

struct SweepResult {
  MPSState state;
  double eigenvalue = 0.0;
  std::vector<double> sweep_energies;
  bool converged = false;
};

namespace detail {

inline cplx flat_dot(const DenseTensor& a, const DenseTensor& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    s += std::conj(a.data()[i]) * b.data()[i];
  return s;
}

inline void flat_axpy(DenseTensor& y, cplx alpha, const DenseTensor& x) {
  for (std::size_t i = 0; i < y.data().size(); ++i)
    y.data()[i] += alpha * x.data()[i];
}

/// Lanczos iteration with full reorthogonalization for the extreme eigenpair
/// of a Hermitian map. `apply` must preserve label order.
inline std::pair<DenseTensor, double> lanczos_extreme(
    const std::function<DenseTensor(const DenseTensor&)>& apply,
    const DenseTensor& start, EigenWhich which, std::size_t max_iters,
    double tol) {
  const double sign = (which == EigenWhich::Largest) ? -1.0 : 1.0;
  std::vector<DenseTensor> basis;
  std::vector<double> alphas, betas;

  DenseTensor v = start;
  {
    const double n = v.frobenius_norm();
    if (!(n > 0.0)) throw NumericError("lanczos: zero start vector");
    v = v.scaled(1.0 / n);
  }
  basis.push_back(v);

  double prev_ritz = 0.0;
  bool have_prev = false;
  Eigen::VectorXd ritz_vec;

  const std::size_t dim = start.element_count();
  const std::size_t iters = std::min<std::size_t>(max_iters, dim);
  for (std::size_t it = 0; it < iters; ++it) {
    DenseTensor w = apply(basis.back()).scaled(sign);
    const double alpha = flat_dot(basis.back(), w).real();
    alphas.push_back(alpha);
    // explicit two-pass reorthogonalization against the whole basis
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) flat_axpy(w, -flat_dot(q, w), q);

    // Ritz values of the current tridiagonal problem
    const std::size_t k = alphas.size();
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      tri(i, i) = alphas[i];
      if (i + 1 < k) tri(i, i + 1) = tri(i + 1, i) = betas[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const double ritz = es.eigenvalues()(0);
    ritz_vec = es.eigenvectors().col(0);

    const double beta = w.frobenius_norm();
    const bool stagnated = have_prev && std::abs(ritz - prev_ritz) <
                                            tol * std::max(1.0, std::abs(ritz));
    prev_ritz = ritz;
    have_prev = true;
    if (beta < 1e-13 || stagnated || it + 1 == iters || basis.size() >= dim)
      break;
    betas.push_back(beta);
    basis.push_back(w.scaled(1.0 / beta));
  }

  DenseTensor out = basis[0].scaled(ritz_vec(0));
  for (std::size_t i = 1; i < basis.size(); ++i)
    flat_axpy(out, ritz_vec(static_cast<Eigen::Index>(i)), basis[i]);
  const double n = out.frobenius_norm();
  out = out.scaled(1.0 / n);
  return {out, sign * prev_ritz};
}

// Environment steps for <psi| MPO |psi>. Env labels ("b", "w", "k").
inline DenseTensor env_boundary() {
  DenseTensor e({"b", "w", "k"}, {1, 1, 1});
  e.at({0, 0, 0}) = 1.0;
  return e;
}

inline DenseTensor env_step_left(const DenseTensor& env, const DenseTensor& site,
                                 const DenseTensor& w) {
  DenseTensor t = contract(env, site, {{"k", kLeft}});
  t = t.renamed(kRight, "k2");
  t = contract(t, w, {{"w", "ml"}, {kPhys, "pi"}});
  t = contract(t, site.conjugated(), {{"b", kLeft}, {"po", kPhys}});
  return t.renamed({{std::string("k2"), std::string("k")},
                    {std::string("mr"), std::string("w")},
                    {std::string(kRight), std::string("b")}});
}

inline DenseTensor env_step_right(const DenseTensor& env,
                                  const DenseTensor& site,
                                  const DenseTensor& w) {
  DenseTensor t = contract(env, site, {{"k", kRight}});
  t = t.renamed(kLeft, "k2");
  t = contract(t, w, {{"w", "mr"}, {kPhys, "pi"}});
  t = contract(t, site.conjugated(), {{"b", kRight}, {"po", kPhys}});
  return t.renamed({{std::string("k2"), std::string("k")},
                    {std::string("ml"), std::string("w")},
                    {std::string(kLeft), std::string("b")}});
}

/// Effective two-site operator application at one bond.
inline DenseTensor apply_two_site(const DenseTensor& left,
                                  const DenseTensor& right,
                                  const DenseTensor& w1, const DenseTensor& w2,
                                  const DenseTensor& t) {
  DenseTensor x = contract(left, t, {{"k", kLeft}});
  x = contract(x, w1, {{"w", "ml"}, {"p1", "pi"}});
  x = x.renamed("po", "q1");
  x = contract(x, w2, {{"mr", "ml"}, {"p2", "pi"}});
  x = x.renamed("po", "q2");
  x = contract(x, right.renamed("b", "b2"), {{kRight, "k"}, {"mr", "w"}});
  return x.renamed({{std::string("b"), std::string(kLeft)},
                    {std::string("q1"), std::string("p1")},
                    {std::string("q2"), std::string("p2")},
                    {std::string("b2"), std::string(kRight)}})
      .permuted({kLeft, "p1", "p2", kRight});
}

}  // namespace detail

/// Right-canonicalizes an MPS; afterwards the norm sits in site 0.
inline MPSState right_canonicalized(const MPSState& psi) {
  MPSState out = psi;
  for (std::size_t j = out.n_sites(); j-- > 1;) {
    SvdResult f = svd_split(out.sites[j], {kLeft},
                            out.sites[j].element_count(), 0.0, "s");
    out.sites[j] = f.right_isometry.renamed("s", kLeft);
    DenseTensor us = scale_axis(f.left_isometry, "s", f.singular_values);
    out.sites[j - 1] = contract(out.sites[j - 1], us.renamed(kLeft, "sl"),
                                {{kRight, "sl"}})
                           .renamed("s", kRight);
  }
  return out;
}

/// Variational extreme eigenstate of an MPO by two-site sweeping with SVD
/// truncation to opts.bond_dim and Lanczos on each local problem.
inline SweepResult sweep_eigen_mps(const MPO& op, const MPSState& init,
                                   EigenWhich which, const SweepOptions& opts) {
  require(op.n_sites() == init.n_sites(), "sweep_eigen_mps: size mismatch");
  const std::size_t n = init.n_sites();
  require(n >= 2, "sweep_eigen_mps: need at least two sites");

  MPSState psi = right_canonicalized(init);
  {
    const double nrm = psi.sites[0].frobenius_norm();
    if (!(nrm > 0.0)) throw NumericError("sweep_eigen_mps: zero init state");
    psi.sites[0] = psi.sites[0].scaled(1.0 / nrm);
  }

  std::vector<DenseTensor> lenv(n + 1, detail::env_boundary());
  std::vector<DenseTensor> renv(n + 1, detail::env_boundary());
  for (std::size_t j = n; j-- > 2;)
    renv[j] = detail::env_step_right(renv[j + 1], psi.sites[j], op.sites[j]);

  SweepResult result;
  double best = (which == EigenWhich::Smallest)
                    ? std::numeric_limits<double>::infinity()
                    : -std::numeric_limits<double>::infinity();

  auto solve_bond = [&](std::size_t j) {
    DenseTensor t = contract(psi.sites[j].renamed(kPhys, "p1"),
                             psi.sites[j + 1].renamed(kPhys, "p2"),
                             {{kRight, kLeft}})
                        .permuted({kLeft, "p1", "p2", kRight});
    auto apply = [&](const DenseTensor& v) {
      return detail::apply_two_site(lenv[j], renv[j + 2], op.sites[j],
                                    op.sites[j + 1], v);
    };
    auto [vec, value] = detail::lanczos_extreme(
        apply, t, which, opts.lanczos_max_iters, opts.lanczos_tol);
    return std::make_pair(vec, value);
  };

  double last_energy = 0.0;
  for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    for (std::size_t j = 0; j + 1 < n; ++j) {  // left to right
      auto [vec, value] = solve_bond(j);
      last_energy = value;
      SvdResult f = svd_split(vec, {kLeft, "p1"}, opts.bond_dim, 0.0, "s");
      psi.sites[j] = f.left_isometry
                         .renamed({{std::string("p1"), std::string(kPhys)},
                                   {std::string("s"), std::string(kRight)}})
                         .permuted({kLeft, kPhys, kRight});
      DenseTensor sv = scale_axis(f.right_isometry, "s", f.singular_values);
      psi.sites[j + 1] = sv.renamed({{std::string("s"), std::string(kLeft)},
                                     {std::string("p2"), std::string(kPhys)}})
                             .permuted({kLeft, kPhys, kRight});
      lenv[j + 1] = detail::env_step_left(lenv[j], psi.sites[j], op.sites[j]);
    }
    for (std::size_t j = n - 1; j-- > 0;) {  // right to left
      auto [vec, value] = solve_bond(j);
      last_energy = value;
      SvdResult f = svd_split(vec, {kLeft, "p1"}, opts.bond_dim, 0.0, "s");
      psi.sites[j + 1] = f.right_isometry
                             .renamed({{std::string("s"), std::string(kLeft)},
                                       {std::string("p2"), std::string(kPhys)}})
                             .permuted({kLeft, kPhys, kRight});
      DenseTensor us = scale_axis(f.left_isometry, "s", f.singular_values);
      psi.sites[j] = us.renamed({{std::string("p1"), std::string(kPhys)},
                                 {std::string("s"), std::string(kRight)}})
                         .permuted({kLeft, kPhys, kRight});
      renv[j + 1] =
          detail::env_step_right(renv[j + 2], psi.sites[j + 1], op.sites[j + 1]);
    }
    result.sweep_energies.push_back(last_energy);

    const bool improved = (which == EigenWhich::Smallest) ? last_energy < best
                                                          : last_energy > best;
    if (improved) {
      best = last_energy;
      result.state = psi;
      result.eigenvalue = last_energy;
    }
    if (sweep > 0) {
      const double prev =
          result.sweep_energies[result.sweep_energies.size() - 2];
      if (std::abs(prev - last_energy) < opts.energy_tol) {
        result.converged = true;
        break;
      }
    }
  }
  return result;
}

/// Two-site DMRG ground-state search for the named Hamiltonian.
inline SweepResult variational_ground_state(const HamiltonianSpec& h,
                                            std::size_t bond_dim,
                                            SweepOptions opts = {}) {
  h.validate();
  require(bond_dim >= 1, "variational_ground_state: bond_dim must be positive");
  opts.bond_dim = bond_dim;
  MPSState init;
  if (h.model == ModelKind::TransverseIsing) {
    const double s = 1.0 / std::sqrt(2.0);
    init = uniform_product_mps(h.n_sites, s, s);  // paramagnetic product state
  } else {
    std::vector<int> neel(h.n_sites);
    for (std::size_t j = 0; j < h.n_sites; ++j) neel[j] = static_cast<int>(j % 2);
    init = product_mps(neel);
  }
  return sweep_eigen_mps(hamiltonian_mpo(h), init, EigenWhich::Smallest, opts);
}

}  // namespace tntomo
