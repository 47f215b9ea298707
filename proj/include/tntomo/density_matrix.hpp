#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tntomo/linalg.hpp"
#include "tntomo/pauli.hpp"

namespace tntomo {

/// Dense reduced density matrix on an ordered window of sites. Basis: the
/// first window site is the most significant qubit.
struct DensityMatrix {
  std::vector<Coord> window;
  MatrixXcd mat;

  std::size_t n_qubits() const { return window.size(); }
};

inline double frobenius_distance(const MatrixXcd& a, const MatrixXcd& b) {
  return (a - b).norm();
}

/// Conventional (Uhlmann) fidelity (Tr sqrt(sqrt(r1) r2 sqrt(r1)))^2 for
/// unit-trace density matrices. Dense-only diagnostic for small systems.
inline double uhlmann_fidelity_dense(const DensityMatrix& rho1,
                                     const DensityMatrix& rho2,
                                     double psd_tol = 1e-8) {
  require(rho1.mat.rows() == rho2.mat.rows(),
          "uhlmann_fidelity_dense: size mismatch");
  const MatrixXcd s1 = sqrt_psd(rho1.mat, psd_tol);
  const MatrixXcd inner = s1 * rho2.mat * s1;
  // inner is Hermitian PSD up to rounding; sum sqrt of its spectrum
  Eigen::VectorXd vals;
  MatrixXcd vecs;
  eigh(0.5 * (inner + inner.adjoint()), vals, vecs);
  double tr = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) < -psd_tol)
      throw NumericError("uhlmann_fidelity_dense: non-PSD intermediate");
    tr += std::sqrt(std::max(vals(i), 0.0));
  }
  return tr * tr;
}

}  // namespace tntomo
