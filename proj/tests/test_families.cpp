#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace dclab;

namespace {

const cplx I1{0.0, 1.0};

SchmidtState two_level(std::size_t d, double l0) { return two_level_state(d, l0); }

void expect_near(cplx got, cplx want, double tol = 1e-14) { EXPECT_LT(std::abs(got - want), tol) << got << " vs " << want; }

/// (v0, v2, v3, …, v_{n−1}, v1): the second entry moves to the end.
ComplexVector second_to_last(const ComplexVector& v) {
  ComplexVector out(v.size());
  out(0) = v(0);
  for (Eigen::Index k = 2; k < v.size(); ++k) out(k - 1) = v(k);
  out(v.size() - 1) = v(1);
  return out;
}

}  // namespace

TEST(Shift, Examples) {
  const auto x = shift(3).matrix();
  EXPECT_EQ(max_abs_diff(x, ComplexMatrix::from_rows({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}})), 0.0);
  for (std::size_t d = 2; d <= 7; ++d) {
    EXPECT_EQ(max_abs_diff(matrix_power(shift(d), d).matrix(), ComplexMatrix::identity(d)), 0.0);
  }
  const auto x4 = shift(4).matrix();
  EXPECT_EQ(x4.column(3), ComplexVector(ComplexVector::Unit(4, 0)));
}

TEST(Phase, Examples) {
  const auto z = phase(3);
  expect_near(z(1, 1), std::exp(2.0 * std::numbers::pi * I1 / 3.0));
  expect_near(z(2, 2), std::exp(4.0 * std::numbers::pi * I1 / 3.0));
  for (std::size_t d = 2; d <= 12; ++d) {
    EXPECT_LE(max_abs_diff(matrix_power(phase(d), d).matrix(), ComplexMatrix::identity(d)), 1e-13);
    EXPECT_LT(std::abs(trace(phase(d).matrix())), 1e-13);
  }
}

TEST(RootsOfUnity, NonTrivialRootsSumToZero) {
  for (std::size_t n = 2; n <= 30; ++n) {
    for (std::size_t k = 1; k < n; ++k) {
      cplx sum{};
      for (std::size_t j = 0; j < n; ++j) sum += root_of_unity(n, k * j);
      EXPECT_LE(std::abs(sum), 1e-12) << "n=" << n << " k=" << k;
    }
  }
}

TEST(Weyl, ListingAndOrder) {
  const auto w3 = weyl_family(3);
  ASSERT_EQ(w3.size(), 9u);
  EXPECT_EQ(w3.label(), "weyl");
  const auto x = shift(3);
  const auto z = phase(3);
  std::size_t at = 0;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      const auto expect = matrix_power(z, a) * matrix_power(x, b);
      EXPECT_LE(max_abs_diff(w3[at++].matrix(), expect.matrix()), 1e-15);
    }
  }
  const auto w2 = weyl_family(2);
  EXPECT_EQ(w2.size(), 4u);
  EXPECT_EQ(max_abs_diff(w2[0].matrix(), ComplexMatrix::identity(2)), 0.0);
  EXPECT_EQ(max_abs_diff(w2[1].matrix(), ComplexMatrix::from_rows({{0, 1}, {1, 0}})), 0.0);
  EXPECT_LE(max_abs_diff(w2[2].matrix(), ComplexMatrix::from_rows({{1, 0}, {0, -1}})), 1e-15);
}

TEST(QutritFive, DisplayedEntries) {
  const auto f = qutrit_five_family();
  ASSERT_EQ(f.size(), 5u);
  EXPECT_EQ(f.label(), "F_3/5");
  EXPECT_DOUBLE_EQ(*f.target_lambda0(), 0.6);
  const auto& u = f[4];
  expect_near(u(0, 0), -2.0 / 3.0);
  expect_near(u(0, 2), std::sqrt(5.0) / 3.0);
  expect_near(f[2](1, 0), I1 / std::sqrt(3.0));
  expect_near(f[3](1, 0), -I1 / std::sqrt(3.0));
  for (const auto& m : f) EXPECT_EQ(m(2, 1), cplx(0.0));
}

TEST(F46, DisplayedEntries) {
  const auto f = family_f46();
  ASSERT_EQ(f.size(), 6u);
  const auto& u1 = f[2];
  expect_near(u1(0, 0), -0.5);
  expect_near(u1(0, 2), std::sqrt(3.0) / 2.0);
  expect_near(u1(2, 0), -std::sqrt(3.0) / 2.0);
  expect_near(u1(2, 2), -0.5);
  expect_near(u1(1, 1), 1.0);
  expect_near(u1(3, 3), 1.0);
}

TEST(F47, DisplayedEntries) {
  const auto f = family_f47();
  ASSERT_EQ(f.size(), 7u);
  EXPECT_EQ(f.label(), "F_4/7");
  const auto& u = f[3];
  expect_near(u(0, 0), -0.75);
  expect_near(u(0, 3), std::sqrt(7.0) / 4.0);
  expect_near(u(3, 0), -std::sqrt(7.0) / 4.0);
  expect_near(u(3, 3), -0.75);
  for (std::size_t j = 0; j < 3; ++j) expect_near(f[4 + j](3, 0), std::sqrt(7.0) / 4.0);
}

TEST(TwoDMinusOne, OddEntries) {
  const auto f5 = family_2dm1(5);
  ASSERT_EQ(f5.size(), 9u);
  EXPECT_EQ(f5.label(), "2d-1-odd");
  const auto& u = f5[8];
  const std::vector<double> ucol{-0.8, 0, 0, 0, -0.6};
  for (std::size_t k = 0; k < 5; ++k) expect_near(u(k, 0), ucol[k]);
  for (std::size_t j = 0; j < 4; ++j) {
    expect_near(f5[4 + j](0, 0), -0.2);
    expect_near(f5[4 + j](4, 0), 0.6);
  }
  const auto f7 = family_2dm1(7);
  expect_near(f7[6](1, 0), -I1 / std::sqrt(7.0));
}

TEST(TwoDMinusOne, OddSecondColumnFromDisplay) {
  // Second column of M_j as displayed, entry by entry.
  for (std::size_t d : {5u, 7u, 9u}) {
    const auto f = family_2dm1(d);
    const double dd = static_cast<double>(d);
    const double r = std::sqrt(dd) / (dd - 1.0);
    for (std::size_t j = 0; j + 1 < d; ++j) {
      const auto& m = f[d - 1 + j];
      auto w = [&](std::size_t p) { return root_of_unity(d - 1, p * j); };
      expect_near(m(0, 1), r * I1 * w(d - 2));
      expect_near(m(1, 1), 1.0 / (dd - 1.0));
      for (std::size_t k = 2; k + 1 < d; ++k) {
        const cplx want = r * ((k % 2 == 0) ? I1 * w(k - 1) : cplx(1.0) * w(k - 1));
        expect_near(m(k, 1), want, 1e-13);
      }
      expect_near(m(d - 1, 1), 0.0);
    }
  }
}

TEST(TwoDMinusOne, SecondColumnIsScaledShiftOfFirst) {
  for (std::size_t d = 5; d <= 14; ++d) {
    const auto f = family_2dm1(d);
    const double c = -static_cast<double>(d) / static_cast<double>(d - 1);
    for (std::size_t j = 0; j + 1 < d; ++j) {
      const auto& m = f[d - 1 + j];
      expect_near(m(0, 1), c * m(d - 2, 0), 1e-13);
      for (std::size_t k = 0; k + 2 < d; ++k) expect_near(m(k + 1, 1), c * m(k, 0), 1e-13);
    }
  }
}

TEST(TwoDMinusOne, EvenUsesBothRootsAndDelegatesAtFour) {
  const auto f4 = family_2dm1(4);
  const auto f47 = family_f47();
  ASSERT_EQ(f4.size(), f47.size());
  for (std::size_t i = 0; i < f4.size(); ++i) EXPECT_EQ(max_abs_diff(f4[i].matrix(), f47[i].matrix()), 0.0);

  const auto f6 = family_2dm1(6);
  EXPECT_EQ(f6.label(), "2d-1-even");
  EXPECT_EQ(f6.size(), 11u);
  EXPECT_THROW(family_2dm1(3), std::invalid_argument);
}

TEST(BlockShifts, TopLeftShiftAndCornerOne) {
  const auto f = family_2dm1(6);
  for (std::size_t j = 0; j < 5; ++j) {
    const auto expect = matrix_power(shift(5), j);
    for (std::size_t r = 0; r < 5; ++r) {
      for (std::size_t c = 0; c < 5; ++c) EXPECT_EQ(f[j](r, c), expect(r, c));
      EXPECT_EQ(f[j](r, 5), cplx(0.0));
    }
    EXPECT_EQ(f[j](5, 5), cplx(1.0));
  }
}

TEST(DPlusTwo, DisplayedEntries) {
  const auto f6 = family_dp2(6);
  ASSERT_EQ(f6.size(), 8u);
  EXPECT_EQ(f6.label(), "F_6/8");
  const std::vector<double> u3{-1.0 / 3.0, 0, std::sqrt(8.0) / 3.0, 0, 0, 0};
  for (std::size_t k = 0; k < 6; ++k) expect_near(f6[4](k, 0), u3[k]);

  const auto f5 = family_dp2(5);
  ASSERT_EQ(f5.size(), 7u);
  expect_near(f5[2](0, 1), std::sqrt(3.0) / 2.0 * I1);
  expect_near(f5[2](1, 1), 0.5);

  const auto f8 = family_dp2(8);
  for (std::size_t j = 0; j < 4; ++j) expect_near(f8[2 + j](0, 0), -0.25);

  EXPECT_EQ(family_dp2(2).size(), 4u);
  EXPECT_EQ(family_dp2(3).label(), "F_3/5");
}

TEST(DPlusTwo, MemberCountsAcrossParity) {
  for (std::size_t d = 2; d <= 20; ++d) {
    const auto f = family_dp2(d);
    EXPECT_EQ(f.size(), d + 2) << "d=" << d;
    EXPECT_NEAR(*f.target_lambda0(), static_cast<double>(d) / static_cast<double>(d + 2), 1e-15);
  }
}

TEST(DPlusTwo, EvenRecursionReconstruction) {
  for (std::size_t d = 6; d <= 20; d += 2) {
    const auto cur = family_dp2(d);
    const auto prev = family_dp2(d - 2);
    const std::size_t prev_u = (d - 2) / 2;
    const double a = 2.0 / static_cast<double>(d);
    const double s = std::sqrt(1.0 - a * a);
    for (std::size_t j = 0; j < prev_u; ++j) {
      const ComplexVector lifted = second_to_last(prev[2 + j].matrix().column(0));
      const ComplexVector col = cur[2 + j].matrix().column(0);
      expect_near(col(0), -a);
      expect_near(col(1), 0.0);
      for (Eigen::Index k = 0; k < lifted.size(); ++k) expect_near(col(k + 2), s * lifted(k), 1e-13);
    }
  }
}

TEST(DPlusTwo, MConjugatePair) {
  for (std::size_t d = 5; d <= 19; d += 2) {
    const auto f = family_dp2(d);
    EXPECT_EQ(max_abs_diff(f[3].matrix(), f[2].matrix().conjugate()), 0.0);
  }
}

TEST(ShiftDiag, Examples) {
  const std::vector<ComplexMatrix> ids(3, ComplexMatrix::identity(3));
  const auto f = shift_diag_family(3, ids);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(max_abs_diff(f[2].matrix(), mat_mul(shift(3).matrix(), shift(3).matrix())), 0.0);

  const std::vector<ComplexMatrix> d2{ComplexMatrix::identity(2), phase(2).matrix()};
  const auto g = shift_diag_family(2, d2);
  EXPECT_LE(max_abs_diff(g[1].matrix(), mat_mul(shift(2).matrix(), phase(2).matrix())), 1e-15);

  const std::vector<ComplexMatrix> bad{ComplexMatrix::identity(2), ComplexMatrix::from_rows({{2, 0}, {0, 1}})};
  EXPECT_THROW(shift_diag_family(2, bad), std::domain_error);
  const std::vector<ComplexMatrix> off{ComplexMatrix::identity(2), shift(2).matrix()};
  EXPECT_THROW(shift_diag_family(2, off), std::domain_error);
}

TEST(Completion, TrailingColumnsIrrelevantOnTwoLevelStates) {
  std::mt19937_64 rng(31);
  auto check = [&](const EncodingFamily& f) {
    const std::size_t d = f.dim();
    const auto s = two_level(d, *f.target_lambda0());
    std::vector<UnitaryMatrix> scrambled;
    for (const auto& m : f) {
      Eigen::MatrixXcd block = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      if (d > 2) {
        const auto w = dclab::testing::random_unitary(d - 2, rng);
        block.bottomRightCorner(static_cast<Eigen::Index>(d - 2), static_cast<Eigen::Index>(d - 2)) =
            w.matrix().eigen();
      }
      scrambled.emplace_back(ComplexMatrix::from_eigen(m.matrix().eigen() * block));
    }
    const EncodingFamily g(d, scrambled);
    EXPECT_TRUE(verify_family(g, s).pass) << f.label();
  };
  check(qutrit_five_family());
  check(family_f46());
  check(family_f47());
  for (std::size_t d = 5; d <= 9; ++d) check(family_2dm1(d));
  for (std::size_t d = 5; d <= 10; ++d) check(family_dp2(d));
}
