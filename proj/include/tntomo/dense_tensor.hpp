#pragma once

#include <algorithm>
#include <initializer_list>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tntomo/common.hpp"
#include "tntomo/rng.hpp"

namespace tntomo {

using MatrixXcd = Eigen::MatrixXcd;
using RowMajorMatrixXcd =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense complex tensor with labeled axes and row-major storage. Labels are
/// the contraction currency: every pairing of axes happens by name, never by
/// position, so reorderings cannot silently change meaning.
class DenseTensor {
 public:
  DenseTensor() : data_(1, cplx(0.0, 0.0)) {}  // rank-0 scalar zero

  DenseTensor(std::vector<std::string> labels, std::vector<std::size_t> shape)
      : labels_(std::move(labels)), shape_(std::move(shape)) {
    validate_axes();
    data_.assign(element_count(), cplx(0.0, 0.0));
  }

  DenseTensor(std::vector<std::string> labels, std::vector<std::size_t> shape,
              std::vector<cplx> data)
      : labels_(std::move(labels)), shape_(std::move(shape)), data_(std::move(data)) {
    validate_axes();
    require(data_.size() == element_count(),
            "DenseTensor: data size does not match shape");
  }

  static DenseTensor scalar(cplx v) {
    DenseTensor t;
    t.data_[0] = v;
    return t;
  }

  /// Identity matrix with the given two labels.
  static DenseTensor identity(const std::string& a, const std::string& b,
                              std::size_t dim) {
    DenseTensor t({a, b}, {dim, dim});
    for (std::size_t i = 0; i < dim; ++i) t.data_[i * dim + i] = 1.0;
    return t;
  }

  /// i.i.d. standard complex Gaussian entries.
  static DenseTensor random_gaussian(std::vector<std::string> labels,
                                     std::vector<std::size_t> shape, Rng& rng) {
    DenseTensor t(std::move(labels), std::move(shape));
    for (auto& v : t.data_) v = rng.gaussian_cplx();
    return t;
  }

  std::size_t rank() const { return shape_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::size_t>& shape() const { return shape_; }
  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }

  std::size_t element_count() const {
    return std::accumulate(shape_.begin(), shape_.end(), std::size_t{1},
                           std::multiplies<>());
  }

  bool has_label(const std::string& label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
  }

  std::size_t axis(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    require(it != labels_.end(), "DenseTensor: unknown label '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
  }

  std::size_t dim(const std::string& label) const { return shape_[axis(label)]; }

  cplx value() const {
    require(rank() == 0, "DenseTensor: value() requires a rank-0 tensor");
    return data_[0];
  }

  cplx& at(const std::vector<std::size_t>& idx) { return data_[offset(idx)]; }
  const cplx& at(const std::vector<std::size_t>& idx) const {
    return data_[offset(idx)];
  }

  DenseTensor renamed(const std::string& from, const std::string& to) const {
    DenseTensor t(*this);
    t.labels_[axis(from)] = to;
    t.validate_axes();
    return t;
  }

  DenseTensor renamed(const std::map<std::string, std::string>& mapping) const {
    DenseTensor t(*this);
    for (auto& l : t.labels_) {
      auto it = mapping.find(l);
      if (it != mapping.end()) l = it->second;
    }
    t.validate_axes();
    return t;
  }

  /// Appends `suffix` to every axis label.
  DenseTensor suffixed(const std::string& suffix) const {
    DenseTensor t(*this);
    for (auto& l : t.labels_) l += suffix;
    return t;
  }

  DenseTensor conjugated() const {
    DenseTensor t(*this);
    for (auto& v : t.data_) v = std::conj(v);
    return t;
  }

  DenseTensor scaled(cplx factor) const {
    DenseTensor t(*this);
    for (auto& v : t.data_) v *= factor;
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  /// Axes reordered to `order` (a permutation of the current labels).
  DenseTensor permuted(const std::vector<std::string>& order) const {
    require(order.size() == rank(), "permuted: order must list every axis");
    std::vector<std::size_t> perm(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) perm[i] = axis(order[i]);

    std::vector<std::size_t> new_shape(rank());
    for (std::size_t i = 0; i < rank(); ++i) new_shape[i] = shape_[perm[i]];

    DenseTensor out(std::vector<std::string>(order), std::move(new_shape));
    if (rank() == 0) {
      out.data_ = data_;
      return out;
    }

    // in_strides[k]: stride of original axis k; walk output in row-major order.
    std::vector<std::size_t> in_strides(rank(), 1);
    for (std::size_t k = rank() - 1; k-- > 0;)
      in_strides[k] = in_strides[k + 1] * shape_[k + 1];
    std::vector<std::size_t> step(rank());
    for (std::size_t i = 0; i < rank(); ++i) step[i] = in_strides[perm[i]];

    std::vector<std::size_t> idx(rank(), 0);
    std::size_t src = 0;
    const std::size_t total = element_count();
    for (std::size_t dst = 0; dst < total; ++dst) {
      out.data_[dst] = data_[src];
      for (std::size_t k = rank(); k-- > 0;) {
        idx[k]++;
        src += step[k];
        if (idx[k] < out.shape_[k]) break;
        src -= step[k] * out.shape_[k];
        idx[k] = 0;
      }
    }
    return out;
  }

  /// Merges the (adjacent-after-permute) axes `group` into one axis named
  /// `merged`, placed where the group's first member was. Row-major fuse.
  DenseTensor fused(const std::vector<std::string>& group,
                    const std::string& merged) const {
    require(!group.empty(), "fused: empty group");
    std::vector<std::string> order;
    for (const auto& l : labels_) {
      if (std::find(group.begin(), group.end(), l) != group.end()) continue;
      order.push_back(l);
    }
    const std::size_t insert_at = [&] {
      // keep merged axis at the position of the group's first label
      std::size_t pos = 0;
      for (const auto& l : labels_) {
        if (l == group.front()) break;
        if (std::find(group.begin(), group.end(), l) == group.end()) ++pos;
      }
      return pos;
    }();
    order.insert(order.begin() + insert_at, group.begin(), group.end());
    DenseTensor p = permuted(order);

    std::vector<std::string> new_labels;
    std::vector<std::size_t> new_shape;
    std::size_t fused_dim = 1;
    for (std::size_t i = 0; i < p.rank(); ++i) {
      if (i >= insert_at && i < insert_at + group.size()) {
        fused_dim *= p.shape_[i];
        if (i + 1 == insert_at + group.size()) {
          new_labels.push_back(merged);
          new_shape.push_back(fused_dim);
        }
      } else {
        new_labels.push_back(p.labels_[i]);
        new_shape.push_back(p.shape_[i]);
      }
    }
    return DenseTensor(std::move(new_labels), std::move(new_shape),
                       std::move(p.data_));
  }

  /// Splits axis `label` into several axes with the given names and dims
  /// (row-major, so the first new axis varies slowest).
  DenseTensor split(const std::string& label,
                    const std::vector<std::string>& new_labels,
                    const std::vector<std::size_t>& new_dims) const {
    const std::size_t ax = axis(label);
    const std::size_t prod = std::accumulate(
        new_dims.begin(), new_dims.end(), std::size_t{1}, std::multiplies<>());
    require(prod == shape_[ax], "split: dims do not factor the axis");
    std::vector<std::string> labels = labels_;
    std::vector<std::size_t> shape = shape_;
    labels.erase(labels.begin() + ax);
    shape.erase(shape.begin() + ax);
    labels.insert(labels.begin() + ax, new_labels.begin(), new_labels.end());
    shape.insert(shape.begin() + ax, new_dims.begin(), new_dims.end());
    return DenseTensor(std::move(labels), std::move(shape), data_);
  }

  /// Fixes axis `label` to `index`, dropping that axis.
  DenseTensor sliced(const std::string& label, std::size_t index) const {
    const std::size_t ax = axis(label);
    require(index < shape_[ax], "sliced: index out of range");
    std::vector<std::string> order{label};
    for (const auto& l : labels_)
      if (l != label) order.push_back(l);
    DenseTensor p = permuted(order);
    std::vector<std::string> new_labels(p.labels_.begin() + 1, p.labels_.end());
    std::vector<std::size_t> new_shape(p.shape_.begin() + 1, p.shape_.end());
    const std::size_t block = p.element_count() / p.shape_[0];
    std::vector<cplx> data(p.data_.begin() + index * block,
                           p.data_.begin() + (index + 1) * block);
    return DenseTensor(std::move(new_labels), std::move(new_shape),
                       std::move(data));
  }

  DenseTensor operator+(const DenseTensor& other) const {
    DenseTensor rhs = other.permuted(labels_);
    require(rhs.shape_ == shape_, "operator+: shape mismatch");
    DenseTensor out(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
  }

  DenseTensor operator-(const DenseTensor& other) const {
    return *this + other.scaled(-1.0);
  }

 private:
  void validate_axes() const {
    require(labels_.size() == shape_.size(),
            "DenseTensor: labels and shape differ in length");
    for (std::size_t d : shape_)
      require(d > 0, "DenseTensor: zero-length axis");
    for (std::size_t i = 0; i < labels_.size(); ++i)
      for (std::size_t j = i + 1; j < labels_.size(); ++j)
        require(labels_[i] != labels_[j],
                "DenseTensor: duplicate label '" + labels_[i] + "'");
  }

  std::size_t offset(const std::vector<std::size_t>& idx) const {
    require(idx.size() == rank(), "DenseTensor: index rank mismatch");
    std::size_t off = 0;
    for (std::size_t k = 0; k < rank(); ++k) {
      require(idx[k] < shape_[k], "DenseTensor: index out of range");
      off = off * shape_[k] + idx[k];
    }
    return off;
  }

  std::vector<std::string> labels_;
  std::vector<std::size_t> shape_;
  std::vector<cplx> data_;
};

/// Pairwise tensor contraction over the named axis pairs. The result carries
/// a's unpaired axes (in order) followed by b's.
inline DenseTensor contract(
    const DenseTensor& a, const DenseTensor& b,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::string> a_con, b_con;
  for (const auto& [la, lb] : pairs) {
    require(a.dim(la) == b.dim(lb),
            "contract: dimension mismatch on pair (" + la + ", " + lb + ")");
    a_con.push_back(la);
    b_con.push_back(lb);
  }

  std::vector<std::string> a_free, b_free;
  for (const auto& l : a.labels())
    if (std::find(a_con.begin(), a_con.end(), l) == a_con.end())
      a_free.push_back(l);
  for (const auto& l : b.labels())
    if (std::find(b_con.begin(), b_con.end(), l) == b_con.end())
      b_free.push_back(l);
  for (const auto& l : a_free)
    require(std::find(b_free.begin(), b_free.end(), l) == b_free.end(),
            "contract: output label collision on '" + l + "'");

  std::vector<std::string> a_order = a_free;
  a_order.insert(a_order.end(), a_con.begin(), a_con.end());
  std::vector<std::string> b_order = b_con;
  b_order.insert(b_order.end(), b_free.begin(), b_free.end());

  DenseTensor ap = a.permuted(a_order);
  DenseTensor bp = b.permuted(b_order);

  std::size_t m = 1, k = 1, n = 1;
  std::vector<std::string> out_labels;
  std::vector<std::size_t> out_shape;
  for (const auto& l : a_free) {
    m *= ap.dim(l);
    out_labels.push_back(l);
    out_shape.push_back(ap.dim(l));
  }
  for (const auto& l : a_con) k *= ap.dim(l);
  for (const auto& l : b_free) {
    n *= bp.dim(l);
    out_labels.push_back(l);
    out_shape.push_back(bp.dim(l));
  }

  DenseTensor out(std::move(out_labels), std::move(out_shape));
  Eigen::Map<const RowMajorMatrixXcd> ma(ap.data().data(), m, k);
  Eigen::Map<const RowMajorMatrixXcd> mb(bp.data().data(), k, n);
  Eigen::Map<RowMajorMatrixXcd> mo(out.data().data(), m, n);
  mo.noalias() = ma * mb;
  return out;
}

/// Contracts pairs of axes within one tensor (partial trace over labels).
inline DenseTensor trace_pairs(
    const DenseTensor& t,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::string> traced;
  for (const auto& [la, lb] : pairs) {
    require(t.dim(la) == t.dim(lb),
            "trace_pairs: dimension mismatch on (" + la + ", " + lb + ")");
    traced.push_back(la);
    traced.push_back(lb);
  }
  std::vector<std::string> free;
  for (const auto& l : t.labels())
    if (std::find(traced.begin(), traced.end(), l) == traced.end())
      free.push_back(l);

  std::vector<std::string> order = free;
  for (const auto& [la, lb] : pairs) {
    order.push_back(la);
    order.push_back(lb);
  }
  DenseTensor p = t.permuted(order);

  std::vector<std::size_t> out_shape;
  std::size_t free_count = 1;
  for (const auto& l : free) {
    out_shape.push_back(p.dim(l));
    free_count *= p.dim(l);
  }
  DenseTensor out(std::move(free), std::move(out_shape));

  std::vector<std::size_t> tdims;
  for (const auto& [la, lb] : pairs) tdims.push_back(t.dim(la));
  std::size_t block = 1;  // elements per free index in the permuted layout
  for (std::size_t d : tdims) block *= d * d;

  for (std::size_t f = 0; f < free_count; ++f) {
    cplx sum = 0.0;
    // walk diagonal entries of the traced index pairs
    std::vector<std::size_t> diag(tdims.size(), 0);
    while (true) {
      std::size_t off = 0;
      for (std::size_t q = 0; q < tdims.size(); ++q)
        off = (off * tdims[q] + diag[q]) * tdims[q] + diag[q];
      sum += p.data()[f * block + off];
      std::size_t q = tdims.size();
      while (q-- > 0) {
        if (++diag[q] < tdims[q]) break;
        diag[q] = 0;
        if (q == 0) goto done;
      }
      if (tdims.empty()) break;
    }
  done:
    out.data()[f] = sum;
  }
  return out;
}

/// DenseTensor (rank 2) -> Eigen matrix, rows = first label.
inline MatrixXcd to_matrix(const DenseTensor& t, const std::string& row_label,
                           const std::string& col_label) {
  DenseTensor p = t.permuted({row_label, col_label});
  return Eigen::Map<const RowMajorMatrixXcd>(p.data().data(), p.shape()[0],
                                             p.shape()[1]);
}

inline DenseTensor from_matrix(const MatrixXcd& m, const std::string& row_label,
                               const std::string& col_label) {
  DenseTensor t({row_label, col_label},
                {static_cast<std::size_t>(m.rows()),
                 static_cast<std::size_t>(m.cols())});
  Eigen::Map<RowMajorMatrixXcd>(t.data().data(), m.rows(), m.cols()) = m;
  return t;
}

}  // namespace tntomo
