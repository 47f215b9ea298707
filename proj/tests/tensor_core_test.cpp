#include <gtest/gtest.h>

#include "tntomo/dense_tensor.hpp"
#include "tntomo/linalg.hpp"
#include "tntomo/rng.hpp"

#include "oracles.hpp"

using namespace tntomo;

namespace {

DenseTensor matrix2(const std::string& r, const std::string& c, cplx m00,
                    cplx m01, cplx m10, cplx m11) {
  DenseTensor t({r, c}, {2, 2});
  t.at({0, 0}) = m00;
  t.at({0, 1}) = m01;
  t.at({1, 0}) = m10;
  t.at({1, 1}) = m11;
  return t;
}

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  DenseTensor d = a - b;
  double m = 0.0;
  for (const auto& v : d.data()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST(Contract, IdentityLeavesMatrixUnchanged) {
  DenseTensor m = matrix2("r", "c", 1.0, 2.0, 3.0, 4.0);
  DenseTensor id = DenseTensor::identity("a", "b", 2);
  DenseTensor out = contract(m, id, {{"c", "a"}});
  EXPECT_EQ(out.labels(), (std::vector<std::string>{"r", "b"}));
  EXPECT_LT(max_abs_diff(out.renamed("b", "c"), m), 1e-15);
}

TEST(Contract, HandMatrixProduct) {
  DenseTensor m = matrix2("r", "c", 1.0, 2.0, 3.0, 4.0);
  DenseTensor n = matrix2("a", "b", 0.0, 1.0, 1.0, 0.0);
  DenseTensor out = contract(m, n, {{"c", "a"}});
  EXPECT_NEAR(std::abs(out.at({0, 0}) - cplx(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.at({0, 1}) - cplx(1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.at({1, 0}) - cplx(4.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.at({1, 1}) - cplx(3.0)), 0.0, 1e-15);
}

TEST(Contract, MatchesNestedLoopReference) {
  Rng rng(7);
  DenseTensor a = DenseTensor::random_gaussian({"x", "y", "z"}, {2, 3, 4}, rng);
  DenseTensor b = DenseTensor::random_gaussian({"u", "v"}, {4, 3}, rng);
  DenseTensor fast = contract(a, b, {{"z", "u"}, {"y", "v"}});
  DenseTensor ref = oracles::contract_reference(a, b, {{"z", "u"}, {"y", "v"}});
  EXPECT_LT(max_abs_diff(fast, ref.permuted(fast.labels())), 1e-12);
}

TEST(Contract, ErrorsOnDimensionMismatchAndUnknownLabel) {
  Rng rng(3);
  DenseTensor a = DenseTensor::random_gaussian({"x", "y"}, {2, 3}, rng);
  DenseTensor b = DenseTensor::random_gaussian({"u", "v"}, {4, 3}, rng);
  EXPECT_THROW(contract(a, b, {{"x", "u"}}), InvalidArgument);
  EXPECT_THROW(contract(a, b, {{"q", "u"}}), InvalidArgument);
  // output would carry "x" from both operands
  DenseTensor c = DenseTensor::random_gaussian({"x", "z"}, {5, 3}, rng);
  EXPECT_THROW(contract(a, c, {{"y", "z"}}), InvalidArgument);
}

TEST(Contract, BilinearInScalarFactor) {
  Rng rng(11);
  DenseTensor a = DenseTensor::random_gaussian({"x", "y"}, {3, 4}, rng);
  DenseTensor b = DenseTensor::random_gaussian({"u", "v"}, {4, 2}, rng);
  const cplx alpha(0.7, -1.3);
  DenseTensor lhs = contract(a.scaled(alpha), b, {{"y", "u"}});
  DenseTensor rhs = contract(a, b, {{"y", "u"}}).scaled(alpha);
  EXPECT_LT(max_abs_diff(lhs, rhs), 1e-12);
}

TEST(Contract, AssociationOrderIndependent) {
  Rng rng(13);
  DenseTensor a = DenseTensor::random_gaussian({"i", "j"}, {3, 4}, rng);
  DenseTensor b = DenseTensor::random_gaussian({"j2", "k"}, {4, 5}, rng);
  DenseTensor c = DenseTensor::random_gaussian({"k2", "l"}, {5, 2}, rng);
  DenseTensor ab_c = contract(contract(a, b, {{"j", "j2"}}), c, {{"k", "k2"}});
  DenseTensor a_bc = contract(a, contract(b, c, {{"k", "k2"}}), {{"j", "j2"}});
  EXPECT_LT(max_abs_diff(ab_c, a_bc), 1e-10);
}

TEST(TracePairs, MatchesExplicitTrace) {
  Rng rng(17);
  DenseTensor a = DenseTensor::random_gaussian({"x", "y", "z"}, {3, 2, 3}, rng);
  DenseTensor traced = trace_pairs(a, {{"x", "z"}});
  for (std::size_t y = 0; y < 2; ++y) {
    cplx expect = 0.0;
    for (std::size_t i = 0; i < 3; ++i) expect += a.at({i, y, i});
    EXPECT_LT(std::abs(traced.at({y}) - expect), 1e-14);
  }
}

TEST(Permute, RoundTripAndStrides) {
  Rng rng(19);
  DenseTensor a = DenseTensor::random_gaussian({"x", "y", "z"}, {2, 3, 4}, rng);
  DenseTensor p = a.permuted({"z", "x", "y"});
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 3; ++y)
      for (std::size_t z = 0; z < 4; ++z)
        EXPECT_EQ(p.at({z, x, y}), a.at({x, y, z}));
  EXPECT_LT(max_abs_diff(p.permuted({"x", "y", "z"}), a), 1e-15);
}

TEST(FuseSplit, RoundTrip) {
  Rng rng(23);
  DenseTensor a = DenseTensor::random_gaussian({"x", "y", "z"}, {2, 3, 4}, rng);
  DenseTensor f = a.fused({"y", "z"}, "yz");
  EXPECT_EQ(f.dim("yz"), 12u);
  DenseTensor back = f.split("yz", {"y", "z"}, {3, 4});
  EXPECT_LT(max_abs_diff(back.permuted({"x", "y", "z"}), a), 1e-15);
}

TEST(SvdSplit, DiagonalMatrixFullRank) {
  DenseTensor m = matrix2("r", "c", 3.0, 0.0, 0.0, 1.0);
  SvdResult f = svd_split(m, {"r"}, 2, 0.0);
  ASSERT_EQ(f.singular_values.size(), 2u);
  EXPECT_NEAR(f.singular_values[0], 3.0, 1e-12);
  EXPECT_NEAR(f.singular_values[1], 1.0, 1e-12);
  EXPECT_NEAR(f.truncation_error, 0.0, 1e-12);
}

TEST(SvdSplit, DiagonalMatrixTruncated) {
  DenseTensor m = matrix2("r", "c", 3.0, 0.0, 0.0, 1.0);
  SvdResult f = svd_split(m, {"r"}, 1, 0.0);
  ASSERT_EQ(f.singular_values.size(), 1u);
  EXPECT_NEAR(f.singular_values[0], 3.0, 1e-12);
  EXPECT_NEAR(f.truncation_error, 1.0, 1e-12);
}

TEST(SvdSplit, ReconstructionResidualAndIsometry) {
  Rng rng(29);
  DenseTensor t = DenseTensor::random_gaussian({"r", "c"}, {4, 6}, rng);
  SvdResult f = svd_split(t, {"r"}, 16, 0.0);

  DenseTensor mid = scale_axis(f.right_isometry, "s", f.singular_values);
  DenseTensor rec = contract(f.left_isometry, mid, {{"s", "s"}});
  EXPECT_LT((to_matrix(rec, "r", "c") - to_matrix(t, "r", "c")).norm(), 1e-10);

  // isometry along the contracted axis
  MatrixXcd u = to_matrix(f.left_isometry, "r", "s");
  EXPECT_LT((u.adjoint() * u - MatrixXcd::Identity(u.cols(), u.cols())).norm(),
            1e-10);
  MatrixXcd v = to_matrix(f.right_isometry, "s", "c");
  EXPECT_LT((v * v.adjoint() - MatrixXcd::Identity(v.rows(), v.rows())).norm(),
            1e-10);
}

TEST(SvdSplit, LosslessWhenRankSufficientRankedTensor) {
  Rng rng(31);
  DenseTensor t =
      DenseTensor::random_gaussian({"a", "b", "c", "d"}, {2, 3, 2, 2}, rng);
  SvdResult f = svd_split(t, {"a", "c"}, 64, 0.0);
  DenseTensor mid = scale_axis(f.right_isometry, "s", f.singular_values);
  DenseTensor rec = contract(f.left_isometry, mid, {{"s", "s"}});
  EXPECT_LT(max_abs_diff(rec.permuted(t.labels()), t), 1e-10);
  EXPECT_NEAR(f.truncation_error, 0.0, 1e-12);
}

TEST(SvdSplit, ErrorsOnBadPartition) {
  Rng rng(37);
  DenseTensor t = DenseTensor::random_gaussian({"a", "b"}, {2, 2}, rng);
  EXPECT_THROW(svd_split(t, {}, 2, 0.0), InvalidArgument);
  EXPECT_THROW(svd_split(t, {"a", "b"}, 2, 0.0), InvalidArgument);
}

TEST(HaarUnitary, DimOneIsUnitModulus) {
  DenseTensor u = haar_unitary(1, 42);
  EXPECT_NEAR(std::abs(u.at({0, 0})), 1.0, 1e-12);
}

TEST(HaarUnitary, UnitaryToTolerance) {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    MatrixXcd u = to_matrix(haar_unitary(4, seed), "row", "col");
    EXPECT_LT((u.adjoint() * u - MatrixXcd::Identity(4, 4)).norm(), 1e-10);
  }
}

TEST(HaarUnitary, DeterministicPerSeed) {
  DenseTensor a = haar_unitary(5, 123);
  DenseTensor b = haar_unitary(5, 123);
  ASSERT_EQ(a.data().size(), b.data().size());
  for (std::size_t i = 0; i < a.data().size(); ++i)
    EXPECT_EQ(a.data()[i], b.data()[i]);  // bitwise
}

TEST(HaarUnitary, ColumnNormsAcrossDims) {
  for (std::size_t dim = 1; dim <= 8; ++dim) {
    MatrixXcd u = to_matrix(haar_unitary(dim, 1000 + dim), "row", "col");
    for (std::size_t c = 0; c < dim; ++c)
      EXPECT_NEAR(u.col(c).norm(), 1.0, 1e-10);
  }
}

TEST(DenseTensor, DuplicateLabelsRejected) {
  EXPECT_THROW(DenseTensor({"a", "a"}, {2, 2}), InvalidArgument);
}

TEST(DenseTensor, SliceFixesAxis) {
  Rng rng(41);
  DenseTensor a = DenseTensor::random_gaussian({"x", "y"}, {3, 2}, rng);
  DenseTensor s = a.sliced("x", 2);
  for (std::size_t y = 0; y < 2; ++y) EXPECT_EQ(s.at({y}), a.at({2, y}));
}
