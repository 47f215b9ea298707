#pragma once

// Independent reference implementations used only by tests. Everything here
// is deliberately brute force (nested loops, dense matrices, explicit
// formulas) so it shares no code path with the library routines it checks.

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tntomo/dense_tensor.hpp"
#include "tntomo/pauli.hpp"

namespace oracles {

using tntomo::cplx;
using tntomo::DenseTensor;
using tntomo::MatrixXcd;
using tntomo::VectorXcd;

/// Nested-loop tensor contraction: sums the index expression directly.
inline DenseTensor contract_reference(
    const DenseTensor& a, const DenseTensor& b,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::size_t> a_con, b_con;
  for (const auto& [la, lb] : pairs) {
    a_con.push_back(a.axis(la));
    b_con.push_back(b.axis(lb));
  }
  std::vector<std::size_t> a_free, b_free;
  for (std::size_t i = 0; i < a.rank(); ++i)
    if (std::find(a_con.begin(), a_con.end(), i) == a_con.end())
      a_free.push_back(i);
  for (std::size_t i = 0; i < b.rank(); ++i)
    if (std::find(b_con.begin(), b_con.end(), i) == b_con.end())
      b_free.push_back(i);

  std::vector<std::string> out_labels;
  std::vector<std::size_t> out_shape;
  for (auto i : a_free) {
    out_labels.push_back(a.labels()[i]);
    out_shape.push_back(a.shape()[i]);
  }
  for (auto i : b_free) {
    out_labels.push_back(b.labels()[i]);
    out_shape.push_back(b.shape()[i]);
  }
  DenseTensor out(out_labels, out_shape);

  std::size_t csize = 1;
  for (auto i : a_con) csize *= a.shape()[i];

  std::vector<std::size_t> out_idx(out_shape.size(), 0);
  const std::size_t total = out.element_count();
  for (std::size_t flat = 0; flat < total; ++flat) {
    // decode output index
    std::size_t rem = flat;
    for (std::size_t k = out_shape.size(); k-- > 0;) {
      out_idx[k] = rem % out_shape[k];
      rem /= out_shape[k];
    }
    cplx sum = 0.0;
    for (std::size_t c = 0; c < csize; ++c) {
      std::vector<std::size_t> ai(a.rank()), bi(b.rank());
      for (std::size_t k = 0; k < a_free.size(); ++k)
        ai[a_free[k]] = out_idx[k];
      for (std::size_t k = 0; k < b_free.size(); ++k)
        bi[b_free[k]] = out_idx[a_free.size() + k];
      std::size_t crem = c;
      for (std::size_t k = a_con.size(); k-- > 0;) {
        const std::size_t d = a.shape()[a_con[k]];
        ai[a_con[k]] = crem % d;
        bi[b_con[k]] = crem % d;
        crem /= d;
      }
      sum += a.at(ai) * b.at(bi);
    }
    out.data()[flat] = sum;
  }
  return out;
}

/// Dense partial trace keeping the given (sorted) qubit window of an
/// n-qubit density matrix; qubit 0 is the most significant.
inline MatrixXcd partial_trace_keep(const MatrixXcd& rho, std::size_t n,
                                    const std::vector<std::size_t>& keep) {
  const std::size_t kn = keep.size();
  const std::size_t kd = std::size_t{1} << kn;
  std::vector<std::size_t> rest;
  for (std::size_t q = 0; q < n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end())
      rest.push_back(q);
  const std::size_t rd = std::size_t{1} << rest.size();

  auto assemble = [&](std::size_t kbits, std::size_t rbits) {
    std::size_t idx = 0;
    for (std::size_t q = 0; q < n; ++q) {
      std::size_t bit = 0;
      for (std::size_t i = 0; i < kn; ++i)
        if (keep[i] == q) bit = (kbits >> (kn - 1 - i)) & 1u;
      for (std::size_t i = 0; i < rest.size(); ++i)
        if (rest[i] == q) bit = (rbits >> (rest.size() - 1 - i)) & 1u;
      idx = (idx << 1) | bit;
    }
    return idx;
  };

  MatrixXcd out = MatrixXcd::Zero(kd, kd);
  for (std::size_t r = 0; r < kd; ++r)
    for (std::size_t c = 0; c < kd; ++c)
      for (std::size_t e = 0; e < rd; ++e)
        out(r, c) += rho(assemble(r, e), assemble(c, e));
  return out;
}

/// Dense single-qubit operator embedded at `site` of an n-qubit space.
inline MatrixXcd embed_single(const tntomo::Matrix2cd& op, std::size_t site,
                              std::size_t n) {
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (std::size_t q = 0; q < n; ++q)
    out = tntomo::kron(out, q == site ? MatrixXcd(op)
                                      : MatrixXcd(MatrixXcd::Identity(2, 2)));
  return out;
}

/// Dense two-qubit gate on adjacent sites (site, site+1).
inline MatrixXcd embed_pair(const MatrixXcd& op4, std::size_t site,
                            std::size_t n) {
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  std::size_t q = 0;
  while (q < n) {
    if (q == site) {
      out = tntomo::kron(out, op4);
      q += 2;
    } else {
      out = tntomo::kron(out, MatrixXcd::Identity(2, 2));
      q += 1;
    }
  }
  return out;
}

/// Dense application of a single-qubit Kraus channel to every site.
inline MatrixXcd apply_channel_dense(const MatrixXcd& rho,
                                     const std::vector<tntomo::Matrix2cd>& kraus,
                                     std::size_t n) {
  MatrixXcd cur = rho;
  for (std::size_t q = 0; q < n; ++q) {
    MatrixXcd next = MatrixXcd::Zero(cur.rows(), cur.cols());
    for (const auto& e : kraus) {
      const MatrixXcd big = embed_single(e, q, n);
      next += big * cur * big.adjoint();
    }
    cur = next;
  }
  return cur;
}

/// Scalar Adam reference with bias correction (complex first moment, |g|^2
/// second moment).
struct ScalarAdamRef {
  double eta, xi1, xi2, eps;
  cplx m = 0.0;
  double v = 0.0;
  int t = 0;

  cplx step(cplx x, cplx g) {
    ++t;
    m = xi1 * m + (1.0 - xi1) * g;
    v = xi2 * v + (1.0 - xi2) * std::norm(g);
    const cplx mhat = m / (1.0 - std::pow(xi1, t));
    const double vhat = v / (1.0 - std::pow(xi2, t));
    return x - eta * mhat / (std::sqrt(vhat) + eps);
  }
};

}  // namespace oracles
