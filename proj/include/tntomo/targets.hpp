#pragma once

#include <vector>

#include "tntomo/lpdo.hpp"
#include "tntomo/mps.hpp"
#include "tntomo/peps.hpp"

namespace tntomo {

/// GHZ state as a bond-2 MPS: (|b0> + e^{i phase} |b1>)/sqrt(2). The
/// antiferromagnetic variant alternates spins between the branches (an X on
/// every second qubit of the standard GHZ).
inline MPSState ghz_mps(std::size_t n, bool antiferromagnetic,
                        double phase = 0.0) {
  require(n >= 2, "ghz_mps: need at least two sites");
  auto branch_bit = [&](std::size_t site, std::size_t branch) -> std::size_t {
    if (!antiferromagnetic) return branch;
    return branch == 0 ? 1 - site % 2 : site % 2;
  };
  const double amp = 1.0 / std::sqrt(2.0);
  const cplx branch_phase = std::exp(cplx(0.0, phase));

  MPSState psi;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t dl = (j == 0) ? 1 : 2;
    const std::size_t dr = (j == n - 1) ? 1 : 2;
    DenseTensor t({kLeft, kPhys, kRight}, {dl, 2, dr});
    for (std::size_t branch = 0; branch < 2; ++branch) {
      cplx v = 1.0;
      if (j == 0) v *= amp;
      if (j == n - 1 && branch == 1) v *= branch_phase;
      t.at({(j == 0) ? 0 : branch, branch_bit(j, branch),
            (j == n - 1) ? 0 : branch}) += v;
    }
    psi.sites.push_back(std::move(t));
  }
  return psi;
}

/// 2D cluster state as a D=2 PEPS. Each tensor carries a copy delta on its
/// down/right legs and the +-1 edge matrix C[a,b] = (-1)^{ab} on its up/left
/// legs, reproducing the CZ-circuit amplitudes (1/sqrt2)^n prod (-1)^{a a'}.
inline PEPSState cluster_state_peps(std::size_t rows, std::size_t cols) {
  require(rows >= 2 && cols >= 2, "cluster_state_peps: need a 2D grid");
  const double amp = 1.0 / std::sqrt(2.0);
  PEPSState psi;
  psi.rows = rows;
  psi.cols = cols;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t du = (r == 0) ? 1 : 2;
      const std::size_t dd = (r == rows - 1) ? 1 : 2;
      const std::size_t dl = (c == 0) ? 1 : 2;
      const std::size_t dr = (c == cols - 1) ? 1 : 2;
      DenseTensor t({kUp, kDown, kLft, kRgt, kPhys}, {du, dd, dl, dr, 2});
      for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t u = 0; u < du; ++u)
          for (std::size_t d = 0; d < dd; ++d)
            for (std::size_t l = 0; l < dl; ++l)
              for (std::size_t rr = 0; rr < dr; ++rr) {
                double v = amp;
                if (du == 2 && u == 1 && p == 1) v = -v;  // C[u, p]
                if (dl == 2 && l == 1 && p == 1) v = -v;  // C[l, p]
                if (dd == 2 && d != p) v = 0.0;           // delta(d, p)
                if (dr == 2 && rr != p) v = 0.0;          // delta(r, p)
                t.at({u, d, l, rr, p}) = v;
              }
      psi.grid.push_back(std::move(t));
    }
  return psi;
}

/// Random PEPS with i.i.d. standard complex Gaussian entries, normalized by
/// boundary contraction at chi = D0^2.
inline PEPSState random_peps(std::size_t rows, std::size_t cols, std::size_t d0,
                             std::uint64_t seed) {
  require(rows >= 1 && cols >= 1 && d0 >= 1, "random_peps: bad geometry");
  Rng rng(seed);
  PEPSState psi;
  psi.rows = rows;
  psi.cols = cols;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t du = (r == 0) ? 1 : d0;
      const std::size_t dd = (r == rows - 1) ? 1 : d0;
      const std::size_t dl = (c == 0) ? 1 : d0;
      const std::size_t dr = (c == cols - 1) ? 1 : d0;
      psi.grid.push_back(DenseTensor::random_gaussian(
          {kUp, kDown, kLft, kRgt, kPhys}, {du, dd, dl, dr, 2}, rng));
    }
  return normalized(psi, d0 * d0);
}

namespace detail {

/// Per-edge bond dimensions of the sequential isometric construction.
/// Horizontal bonds default to D; vertical bonds default to D except in
/// column 0. A feasibility pass in generation order then shrinks down/right
/// dims wherever the isometry in(d, r) <= out(p, u, l) would fail.
struct IsoDims {
  std::vector<std::size_t> vert;  // bond below (r, c): index r * cols + c, r < rows-1
  std::vector<std::size_t> horiz;  // bond right of (r, c): r * cols + c, c < cols-1
  std::size_t rows = 0, cols = 0;

  std::size_t up(std::size_t r, std::size_t c) const {
    return r == 0 ? 1 : vert[(r - 1) * cols + c];
  }
  std::size_t down(std::size_t r, std::size_t c) const {
    return r + 1 == rows ? 1 : vert[r * cols + c];
  }
  std::size_t left(std::size_t r, std::size_t c) const {
    return c == 0 ? 1 : horiz[r * cols + (c - 1)];
  }
  std::size_t right(std::size_t r, std::size_t c) const {
    return c + 1 == cols ? 1 : horiz[r * cols + c];
  }
};

inline IsoDims isotns_dims(std::size_t rows, std::size_t cols, std::size_t d) {
  IsoDims dims;
  dims.rows = rows;
  dims.cols = cols;
  dims.vert.assign(rows * cols, d);
  dims.horiz.assign(rows * cols, d);
  for (std::size_t r = 0; r + 1 < rows; ++r) dims.vert[r * cols + 0] = 1;
  // generation order: column by column, top to bottom
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) {
      if (r + 1 == rows && c + 1 == cols) continue;  // center site
      const std::size_t out = 2 * dims.up(r, c) * dims.left(r, c);
      if (r + 1 < rows) {
        std::size_t& dn = dims.vert[r * cols + c];
        while (dn > 1 && dn * dims.right(r, c) > out) --dn;
      }
      if (c + 1 < cols) {
        std::size_t& rt = dims.horiz[r * cols + c];
        while (rt > 1 && dims.down(r, c) * rt > out) --rt;
      }
    }
  return dims;
}

}  // namespace detail

/// Random isometric PEPS built column by column from Haar unitaries: every
/// non-center tensor is an isometry from its (down, right) legs into
/// (physical, up, left), and the bottom-right center is a Haar-random unit
/// vector. The state has norm 1 by construction, with no renormalization.
inline PEPSState random_isotns(std::size_t rows, std::size_t cols,
                               std::size_t d, std::uint64_t seed) {
  require(rows >= 2 && cols >= 2 && d >= 1, "random_isotns: bad geometry");
  const detail::IsoDims dims = detail::isotns_dims(rows, cols, d);

  PEPSState psi;
  psi.rows = rows;
  psi.cols = cols;
  psi.grid.resize(rows * cols, DenseTensor());
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t du = dims.up(r, c), dd = dims.down(r, c);
      const std::size_t dl = dims.left(r, c), dr = dims.right(r, c);
      const std::size_t out_dim = 2 * du * dl;
      const std::size_t in_dim = dd * dr;
      require(in_dim <= out_dim, "random_isotns: infeasible isometry shape");
      const DenseTensor u =
          haar_unitary(out_dim, derive_seed(seed, r * cols + c));
      // first in_dim columns of a Haar unitary: isometry (d, r) -> (p, u, l)
      DenseTensor iso({"out", "in"}, {out_dim, in_dim});
      for (std::size_t a = 0; a < out_dim; ++a)
        for (std::size_t b = 0; b < in_dim; ++b)
          iso.at({a, b}) = u.at({a, b});
      DenseTensor t = iso.split("out", {kPhys, kUp, kLft}, {2, du, dl})
                          .split("in", {kDown, kRgt}, {dd, dr});
      psi.at(r, c) = t.permuted({kUp, kDown, kLft, kRgt, kPhys});
    }
  return psi;
}

/// Largest deviation from the construction's per-site isometry (or center
/// normalization) conditions; diagnostic for random_isotns output.
inline double isotns_isometry_defect(const PEPSState& psi) {
  double worst = 0.0;
  for (std::size_t r = 0; r < psi.rows; ++r)
    for (std::size_t c = 0; c < psi.cols; ++c) {
      const DenseTensor& t = psi.at(r, c);
      if (r + 1 == psi.rows && c + 1 == psi.cols) {
        worst = std::max(worst, std::abs(t.frobenius_norm() - 1.0));
        continue;
      }
      DenseTensor gram = contract(
          t.conjugated().renamed({{std::string(kDown), std::string("d2")},
                                  {std::string(kRgt), std::string("r2")}}),
          t, {{kPhys, kPhys}, {kUp, kUp}, {kLft, kLft}});
      DenseTensor id = contract(
          DenseTensor::identity("d2", kDown, t.dim(kDown)),
          DenseTensor::identity("r2", kRgt, t.dim(kRgt)), {});
      worst = std::max(worst, (gram - id).frobenius_norm());
    }
  return worst;
}

/// Additive complex Gaussian noise on every tensor with Frobenius magnitude
/// strength * |T|_F, then renormalization.
inline PEPSState perturb_tensors(const PEPSState& psi, double strength,
                                 std::uint64_t seed) {
  require(strength >= 0.0, "perturb_tensors: negative strength");
  if (strength == 0.0) return psi;
  Rng rng(seed);
  PEPSState out = psi;
  for (auto& t : out.grid) {
    DenseTensor g =
        DenseTensor::random_gaussian(t.labels(), t.shape(), rng);
    const double gn = g.frobenius_norm();
    if (gn == 0.0) continue;
    const double scale = strength * t.frobenius_norm() / gn;
    t = t + g.scaled(scale);
  }
  return normalized(out);
}

/// Random MPS with Gaussian entries at fixed bond dimension, normalized.
inline MPSState random_mps(std::size_t n, std::size_t bond_dim,
                           std::uint64_t seed) {
  require(n >= 1 && bond_dim >= 1, "random_mps: bad geometry");
  Rng rng(seed);
  MPSState psi;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t dl = (j == 0) ? 1 : bond_dim;
    const std::size_t dr = (j == n - 1) ? 1 : bond_dim;
    psi.sites.push_back(
        DenseTensor::random_gaussian({kLeft, kPhys, kRight}, {dl, 2, dr}, rng));
  }
  return normalized(psi);
}

/// Random LPDO with Gaussian entries, unit trace.
inline LPDOState random_lpdo(std::size_t n, std::size_t bond_dim,
                             std::size_t kraus_dim, std::uint64_t seed) {
  require(n >= 1 && bond_dim >= 1 && kraus_dim >= 1, "random_lpdo: bad dims");
  Rng rng(seed);
  LPDOState rho;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t dl = (j == 0) ? 1 : bond_dim;
    const std::size_t dr = (j == n - 1) ? 1 : bond_dim;
    rho.sites.push_back(DenseTensor::random_gaussian(
        {kLeft, kPhys, kKraus, kRight}, {dl, 2, kraus_dim, dr}, rng));
  }
  return normalized(rho);
}

}  // namespace tntomo
