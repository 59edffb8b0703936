#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace dclab;
using dclab::testing::random_matrix;
using dclab::testing::random_unitary;

namespace {

const cplx I1{0.0, 1.0};

ComplexMatrix x3_squared() {
  return ComplexMatrix::from_rows({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
}

}  // namespace

TEST(MatMul, IdentityTimesShift) {
  const auto x = shift(3).matrix();
  EXPECT_EQ(max_abs_diff(mat_mul(ComplexMatrix::identity(3), x), x), 0.0);
}

TEST(MatMul, ShiftSquaredByHand) {
  const auto x = shift(3).matrix();
  EXPECT_EQ(max_abs_diff(mat_mul(x, x), x3_squared()), 0.0);
}

TEST(MatMul, SwapIsInvolution) {
  const auto a = ComplexMatrix::from_rows({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});
  EXPECT_EQ(max_abs_diff(mat_mul(a, a), ComplexMatrix::identity(3)), 0.0);
}

TEST(MatMul, ShapeAndMismatch) {
  std::mt19937_64 rng(3);
  const auto p = mat_mul(random_matrix(2, 3, rng), random_matrix(3, 5, rng));
  EXPECT_EQ(p.rows(), 2u);
  EXPECT_EQ(p.cols(), 5u);
  EXPECT_THROW(mat_mul(random_matrix(2, 3, rng), random_matrix(2, 3, rng)), DimensionError);
}

TEST(ComplexMatrix, RejectsBadShapesAndNonFinite) {
  const std::vector<cplx> five(5);
  EXPECT_THROW(ComplexMatrix(2, 3, five), DimensionError);
  std::vector<cplx> bad(4);
  bad[2] = cplx{std::nan(""), 0.0};
  EXPECT_THROW(ComplexMatrix(2, 2, bad), std::domain_error);
}

TEST(Dagger, Examples) {
  const auto d = ComplexMatrix::from_rows({{2, 0}, {0, -3}});
  EXPECT_EQ(max_abs_diff(dagger(d), d), 0.0);

  const auto zd = dagger(phase(3).matrix());
  for (std::size_t k = 0; k < 3; ++k) {
    const cplx expect = std::exp(-2.0 * std::numbers::pi * I1 * static_cast<double>(k) / 3.0);
    EXPECT_LT(std::abs(zd(k, k) - expect), 1e-15);
  }

  std::mt19937_64 rng(4);
  const auto a = random_matrix(3, 4, rng);
  EXPECT_EQ(max_abs_diff(dagger(dagger(a)), a), 0.0);
  EXPECT_EQ(dagger(a).rows(), 4u);
}

TEST(Trace, Examples) {
  EXPECT_EQ(trace(ComplexMatrix::identity(5)), cplx(5.0));
  EXPECT_EQ(trace(shift(3).matrix()), cplx(0.0));
  std::mt19937_64 rng(5);
  const auto s = dclab::testing::random_state(4, rng);
  const auto lam = lambda_weights(s).matrix();
  EXPECT_NEAR(std::abs(trace(lam) - 1.0), 0.0, 1e-15);
  EXPECT_THROW(trace(random_matrix(2, 3, rng)), DimensionError);
}

TEST(Trace, ConjugateSymmetry) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_matrix(4, 4, rng);
    const auto b = random_matrix(4, 4, rng);
    const cplx ab = trace(mat_mul(dagger(a), b));
    const cplx ba = trace(mat_mul(dagger(b), a));
    EXPECT_LT(std::abs(ab - std::conj(ba)), 1e-12);
  }
}

TEST(UnitaryMatrix, ValidatesResidual) {
  EXPECT_THROW(UnitaryMatrix(ComplexMatrix::from_rows({{1, 0}, {0, 2}})), std::domain_error);
  std::mt19937_64 rng(7);
  EXPECT_THROW(UnitaryMatrix(random_matrix(2, 3, rng)), DimensionError);
}

TEST(UnitaryMatrix, ProductClosure) {
  std::mt19937_64 rng(8);
  for (std::size_t d = 1; d <= 8; ++d) {
    for (int t = 0; t < 10; ++t) {
      const auto uv = random_unitary(d, rng) * random_unitary(d, rng);
      EXPECT_LE(uv.residual(), 1e-10);
    }
  }
}

TEST(Completion, SingleBasisVector) {
  const ComplexVector e0 = ComplexVector::Unit(2, 0);
  const auto u = complete_to_unitary({e0}, 2);
  EXPECT_EQ(max_abs_diff(u.matrix(), ComplexMatrix::identity(2)), 0.0);
}

TEST(Completion, TwoColumnsFiveDim) {
  ComplexVector c0(5), c1(5);
  c0 << -0.4, 0.0, std::sqrt(21.0) / 5.0, 0.0, 0.0;
  c1 << 0.0, 1.0, 0.0, 0.0, 0.0;
  const auto u = complete_to_unitary({c0, c1}, 5);
  EXPECT_LT((u.matrix().column(0) - c0).norm(), 1e-15);
  EXPECT_LT((u.matrix().column(1) - c1).norm(), 1e-15);
  // Residual checked by explicit multiplication, independent of unitarity_residual.
  const auto p = mat_mul(dagger(u.matrix()), u.matrix());
  EXPECT_LE(max_abs_diff(p, ComplexMatrix::identity(5)), 1e-12);
}

TEST(Completion, RandomInputsAndPhaseConvention) {
  std::mt19937_64 rng(9);
  for (std::size_t d = 2; d <= 9; ++d) {
    for (std::size_t given = 0; given <= d; ++given) {
      const auto w = random_unitary(d, rng);
      std::vector<ComplexVector> cols;
      for (std::size_t c = 0; c < given; ++c) cols.push_back(w.matrix().column(c));
      const auto u = complete_to_unitary(cols, d);
      const auto p = mat_mul(dagger(u.matrix()), u.matrix());
      EXPECT_LE(max_abs_diff(p, ComplexMatrix::identity(d)), 1e-12);
      for (std::size_t c = 0; c < given; ++c) EXPECT_LT((u.matrix().column(c) - cols[c]).norm(), 1e-12);
      for (std::size_t c = given; c < d; ++c) {
        const auto col = u.matrix().column(c);
        for (Eigen::Index r = 0; r < col.size(); ++r) {
          if (std::abs(col(r)) > 1e-10) {
            EXPECT_GT(col(r).real(), 0.0);
            EXPECT_LT(std::abs(col(r).imag()), 1e-12);
            break;
          }
        }
      }
    }
  }
}

TEST(Completion, IdempotentOnCompleteInput) {
  std::mt19937_64 rng(10);
  const auto w = random_unitary(4, rng);
  std::vector<ComplexVector> cols;
  for (std::size_t c = 0; c < 4; ++c) cols.push_back(w.matrix().column(c));
  EXPECT_LE(max_abs_diff(complete_to_unitary(cols, 4).matrix(), w.matrix()), 1e-12);
  const auto once = complete_to_unitary({cols[0], cols[1]}, 4);
  std::vector<ComplexVector> again;
  for (std::size_t c = 0; c < 4; ++c) again.push_back(once.matrix().column(c));
  EXPECT_LE(max_abs_diff(complete_to_unitary(again, 4).matrix(), once.matrix()), 1e-12);
}

TEST(Completion, Deterministic) {
  std::mt19937_64 rng(11);
  const auto w = random_unitary(6, rng);
  const ComplexVector c0 = w.matrix().column(0);
  const ComplexVector c1 = w.matrix().column(1);
  EXPECT_EQ(max_abs_diff(complete_to_unitary({c0, c1}, 6).matrix(), complete_to_unitary({c0, c1}, 6).matrix()), 0.0);
}

TEST(Completion, Errors) {
  const ComplexVector e0 = ComplexVector::Unit(2, 0);
  const ComplexVector e1 = ComplexVector::Unit(2, 1);
  EXPECT_THROW(complete_to_unitary({e0, e1, e0}, 2), DimensionError);
  EXPECT_THROW(complete_to_unitary({e0, e0}, 2), std::domain_error);
  const ComplexVector half = 0.5 * e0;
  EXPECT_THROW(complete_to_unitary({half}, 2), std::domain_error);
  EXPECT_THROW(complete_to_unitary({ComplexVector::Unit(3, 0)}, 2), DimensionError);
}

TEST(Kron, Examples) {
  EXPECT_EQ(max_abs_diff(kron_with_identity(UnitaryMatrix::identity(3), 3), ComplexMatrix::identity(9)), 0.0);

  const auto k = kron_with_identity(shift(3), 3);
  ComplexVector ket00 = ComplexVector::Zero(9);
  ket00(0) = 1.0;
  const ComplexVector out = k.eigen() * ket00;
  ComplexVector ket10 = ComplexVector::Zero(9);
  ket10(3) = 1.0;
  EXPECT_EQ((out - ket10).norm(), 0.0);

  std::mt19937_64 rng(12);
  const auto u = random_unitary(4, rng);
  EXPECT_LT(std::abs(trace(kron_with_identity(u, 4)) - 4.0 * trace(u.matrix())), 1e-12);
  EXPECT_LE(unitarity_residual(kron_with_identity(u, 4)), 10.0 * std::max(u.residual(), 1e-16));
}
