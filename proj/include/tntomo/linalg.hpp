#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "tntomo/dense_tensor.hpp"

namespace tntomo {

struct SvdResult {
  DenseTensor left_isometry;          // left labels + bond label
  std::vector<double> singular_values;  // descending, >= 0
  DenseTensor right_isometry;         // bond label + right labels
  double truncation_error = 0.0;      // sum of squared discarded values
};

/// Splits `t` across the bipartition (left_labels | rest) by SVD, keeping at
/// most `max_rank` singular values and discarding those below
/// `cutoff * s_max`. At least one singular value is always kept.
inline SvdResult svd_split(const DenseTensor& t,
                           const std::vector<std::string>& left_labels,
                           std::size_t max_rank, double cutoff,
                           const std::string& bond_label = "s") {
  require(!left_labels.empty(), "svd_split: empty left partition");
  require(left_labels.size() < t.rank(), "svd_split: full left partition");
  require(max_rank >= 1, "svd_split: max_rank must be positive");

  std::vector<std::string> right_labels;
  for (const auto& l : t.labels())
    if (std::find(left_labels.begin(), left_labels.end(), l) ==
        left_labels.end())
      right_labels.push_back(l);

  std::vector<std::string> order = left_labels;
  order.insert(order.end(), right_labels.begin(), right_labels.end());
  DenseTensor p = t.permuted(order);

  std::size_t rows = 1, cols = 1;
  std::vector<std::size_t> left_dims, right_dims;
  for (const auto& l : left_labels) {
    left_dims.push_back(p.dim(l));
    rows *= p.dim(l);
  }
  for (const auto& l : right_labels) {
    right_dims.push_back(p.dim(l));
    cols *= p.dim(l);
  }

  Eigen::Map<const RowMajorMatrixXcd> m(p.data().data(), rows, cols);
  Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();

  std::size_t keep = std::min<std::size_t>(max_rank, sv.size());
  const double threshold = cutoff * (sv.size() > 0 ? sv(0) : 0.0);
  while (keep > 1 && sv(keep - 1) < threshold) --keep;

  double err = 0.0;
  for (Eigen::Index i = keep; i < sv.size(); ++i) err += sv(i) * sv(i);

  SvdResult out;
  out.singular_values.assign(sv.data(), sv.data() + keep);
  out.truncation_error = err;

  MatrixXcd u = svd.matrixU().leftCols(keep);
  MatrixXcd v = svd.matrixV().leftCols(keep).adjoint();

  DenseTensor ut({"__rows", bond_label}, {rows, keep});
  Eigen::Map<RowMajorMatrixXcd>(ut.data().data(), rows, keep) = u;
  out.left_isometry = left_labels.size() == 1
                          ? ut.renamed("__rows", left_labels[0])
                          : ut.split("__rows", left_labels, left_dims);

  DenseTensor vt({bond_label, "__cols"}, {keep, cols});
  Eigen::Map<RowMajorMatrixXcd>(vt.data().data(), keep, cols) = v;
  out.right_isometry = right_labels.size() == 1
                           ? vt.renamed("__cols", right_labels[0])
                           : vt.split("__cols", right_labels, right_dims);
  return out;
}

/// Multiplies each slice along `label` by the matching real factor (used to
/// absorb singular values into one SVD factor).
inline DenseTensor scale_axis(const DenseTensor& t, const std::string& label,
                              const std::vector<double>& factors) {
  require(factors.size() == t.dim(label), "scale_axis: factor count mismatch");
  std::vector<std::string> order{label};
  for (const auto& l : t.labels())
    if (l != label) order.push_back(l);
  DenseTensor p = t.permuted(order);
  const std::size_t block = p.element_count() / p.dim(label);
  for (std::size_t r = 0; r < factors.size(); ++r)
    for (std::size_t c = 0; c < block; ++c)
      p.data()[r * block + c] *= factors[r];
  return p;
}

/// Haar-random unitary via QR of a complex Ginibre matrix with the R diagonal
/// phase fixed. Deterministic for a fixed seed. Labels ("row", "col");
/// applied as a matrix it maps col -> row.
inline DenseTensor haar_unitary(std::size_t dim, std::uint64_t seed) {
  require(dim >= 1, "haar_unitary: dim must be positive");
  Rng rng(seed);
  MatrixXcd g(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) g(r, c) = rng.gaussian_cplx();

  Eigen::HouseholderQR<MatrixXcd> qr(g);
  MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(dim, dim);
  MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::size_t i = 0; i < dim; ++i) {
    const cplx d = r(i, i);
    const cplx phase = std::abs(d) > 0.0 ? d / std::abs(d) : cplx(1.0);
    q.col(i) *= phase;
  }
  return from_matrix(q, "row", "col");
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
inline void eigh(const MatrixXcd& m, Eigen::VectorXd& eigenvalues,
                 MatrixXcd& eigenvectors) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(m);
  require(solver.info() == Eigen::Success, "eigh: decomposition failed");
  eigenvalues = solver.eigenvalues();
  eigenvectors = solver.eigenvectors();
}

/// Principal matrix square root of a PSD Hermitian matrix. Eigenvalues more
/// negative than -psd_tol are rejected; small negatives are clamped to zero.
inline MatrixXcd sqrt_psd(const MatrixXcd& m, double psd_tol = 1e-8) {
  Eigen::VectorXd vals;
  MatrixXcd vecs;
  eigh(m, vals, vecs);
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) < -psd_tol)
      throw NumericError("sqrt_psd: matrix is not positive semidefinite");
    vals(i) = std::sqrt(std::max(vals(i), 0.0));
  }
  return vecs * vals.asDiagonal() * vecs.adjoint();
}

}  // namespace tntomo
