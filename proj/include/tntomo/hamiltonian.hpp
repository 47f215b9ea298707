#pragma once

#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tntomo/mps.hpp"
#include "tntomo/pauli.hpp"

namespace tntomo {

enum class ModelKind { TransverseIsing, Heisenberg };

/// Open-boundary spin-1/2 chain Hamiltonian.
///   TransverseIsing: H = -sum ZZ + g sum X
///   Heisenberg:      H = sum S.S   (S = sigma / 2)
struct HamiltonianSpec {
  ModelKind model = ModelKind::TransverseIsing;
  std::size_t n_sites = 2;
  double g = 1.0;

  void validate() const {
    require(n_sites >= 2, "HamiltonianSpec: need at least two sites");
  }
};

/// Matrix product operator; site labels (ml, po, pi, mr). Acts on a ket by
/// contracting pi with the state's physical leg.
struct MPO {
  std::vector<DenseTensor> sites;
  std::size_t n_sites() const { return sites.size(); }
};

namespace detail {

inline void put_block(DenseTensor& w, std::size_t a, std::size_t b,
                      const Matrix2cd& op) {
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) w.at({a, r, c, b}) = op(r, c);
}

/// Assembles a chain MPO from a bulk transition-matrix pattern of 2x2 blocks.
/// blocks[{a, b}] = operator; first site keeps row `first_row`, last site
/// keeps column `last_col`.
inline MPO mpo_from_blocks(
    std::size_t n, std::size_t bond,
    const std::vector<std::tuple<std::size_t, std::size_t, Matrix2cd>>& blocks,
    std::size_t first_row, std::size_t last_col) {
  MPO mpo;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t rows = (j == 0) ? 1 : bond;
    const std::size_t cols = (j == n - 1) ? 1 : bond;
    DenseTensor w({"ml", "po", "pi", "mr"}, {rows, 2, 2, cols});
    for (const auto& [a, b, op] : blocks) {
      if (j == 0 && a != first_row) continue;
      if (j == n - 1 && b != last_col) continue;
      const std::size_t ia = (j == 0) ? 0 : a;
      const std::size_t ib = (j == n - 1) ? 0 : b;
      put_block(w, ia, ib, op);
    }
    mpo.sites.push_back(std::move(w));
  }
  return mpo;
}

}  // namespace detail

inline MPO hamiltonian_mpo(const HamiltonianSpec& h) {
  h.validate();
  if (h.model == ModelKind::TransverseIsing) {
    const Matrix2cd x = pauli_matrix('X');
    const Matrix2cd z = pauli_matrix('Z');
    const Matrix2cd id = pauli_matrix('I');
    std::vector<std::tuple<std::size_t, std::size_t, Matrix2cd>> blocks = {
        {0, 0, id}, {0, 1, z}, {0, 2, h.g * x}, {1, 2, -z}, {2, 2, id}};
    return detail::mpo_from_blocks(h.n_sites, 3, blocks, 0, 2);
  }
  const Matrix2cd sx = 0.5 * pauli_matrix('X');
  const Matrix2cd sy = 0.5 * pauli_matrix('Y');
  const Matrix2cd sz = 0.5 * pauli_matrix('Z');
  const Matrix2cd id = pauli_matrix('I');
  std::vector<std::tuple<std::size_t, std::size_t, Matrix2cd>> blocks = {
      {0, 0, id},  {0, 1, sx}, {0, 2, sy}, {0, 3, sz},
      {1, 4, sx},  {2, 4, sy}, {3, 4, sz}, {4, 4, id}};
  return detail::mpo_from_blocks(h.n_sites, 5, blocks, 0, 4);
}

/// Dense Hamiltonian matrix; exponential in N, for oracles and small checks.
inline MatrixXcd dense_hamiltonian(const HamiltonianSpec& h,
                                   std::size_t max_sites = 12) {
  h.validate();
  require(h.n_sites <= max_sites, "dense_hamiltonian: chain too long");
  const std::size_t dim = std::size_t{1} << h.n_sites;
  MatrixXcd out = MatrixXcd::Zero(dim, dim);

  auto embed2 = [&](const MatrixXcd& op4, std::size_t site) {
    MatrixXcd m = MatrixXcd::Identity(1, 1);
    std::size_t q = 0;
    while (q < h.n_sites) {
      if (q == site) {
        m = kron(m, op4);
        q += 2;
      } else {
        m = kron(m, MatrixXcd::Identity(2, 2));
        q += 1;
      }
    }
    return m;
  };
  auto embed1 = [&](const Matrix2cd& op, std::size_t site) {
    MatrixXcd m = MatrixXcd::Identity(1, 1);
    for (std::size_t q = 0; q < h.n_sites; ++q)
      m = kron(m, q == site ? MatrixXcd(op) : MatrixXcd(MatrixXcd::Identity(2, 2)));
    return m;
  };

  if (h.model == ModelKind::TransverseIsing) {
    const MatrixXcd zz = kron(pauli_matrix('Z'), pauli_matrix('Z'));
    for (std::size_t j = 0; j + 1 < h.n_sites; ++j) out -= embed2(zz, j);
    for (std::size_t j = 0; j < h.n_sites; ++j)
      out += h.g * embed1(pauli_matrix('X'), j);
  } else {
    MatrixXcd ss = MatrixXcd::Zero(4, 4);
    for (char c : {'X', 'Y', 'Z'})
      ss += 0.25 * kron(pauli_matrix(c), pauli_matrix(c));
    for (std::size_t j = 0; j + 1 < h.n_sites; ++j) out += embed2(ss, j);
  }
  return out;
}

/// Ground state of the dense Hamiltonian (minimal-eigenvalue eigenvector).
inline VectorXcd exact_ground_state(const HamiltonianSpec& h,
                                    double* energy = nullptr,
                                    std::size_t max_sites = 12) {
  const MatrixXcd m = dense_hamiltonian(h, max_sites);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(m);
  require(solver.info() == Eigen::Success, "exact_ground_state: solver failed");
  if (energy) *energy = solver.eigenvalues()(0);
  return solver.eigenvectors().col(0);
}

}  // namespace tntomo
