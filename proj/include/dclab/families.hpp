#pragma once
// Explicit families of encoding unitaries.
//
// Members are ordered as each construction lists them. Where a construction only
// prescribes the first two columns (all weights beyond λ₁ vanish at its target
// state), the remaining columns come from complete_to_unitary.

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "encoding_family.hpp"
#include "linalg.hpp"

namespace dclab {

/// e^{2πi k/n}, evaluated directly from the reduced exponent.
inline cplx root_of_unity(std::size_t n, std::size_t k) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k % n) / static_cast<double>(n);
  return std::polar(1.0, angle);
}

/// X_d|j⟩ = |(j+1) mod d⟩.
inline UnitaryMatrix shift(std::size_t d) {
  if (d < 2) throw std::invalid_argument("shift: d must be at least 2");
  ComplexMatrix m(d, d);
  for (std::size_t j = 0; j < d; ++j) m((j + 1) % d, j) = 1.0;
  return UnitaryMatrix(std::move(m));
}

/// Z_d = diag(ω⁰, ω¹, …, ω^{d−1}) with ω = e^{2πi/d}.
inline UnitaryMatrix phase(std::size_t d) {
  if (d < 2) throw std::invalid_argument("phase: d must be at least 2");
  ComplexMatrix m(d, d);
  for (std::size_t k = 0; k < d; ++k) m(k, k) = root_of_unity(d, k);
  return UnitaryMatrix(std::move(m));
}

inline UnitaryMatrix matrix_power(const UnitaryMatrix& u, std::size_t k) {
  UnitaryMatrix out = UnitaryMatrix::identity(u.dim());
  for (std::size_t i = 0; i < k; ++i) out = out * u;
  return out;
}

/// The d² products ZᵃXᵇ, lexicographic in (a, b).
inline EncodingFamily weyl_family(std::size_t d) {
  const UnitaryMatrix x = shift(d);
  const UnitaryMatrix z = phase(d);
  std::vector<UnitaryMatrix> members;
  members.reserve(d * d);
  for (std::size_t a = 0; a < d; ++a) {
    const UnitaryMatrix za = matrix_power(z, a);
    for (std::size_t b = 0; b < d; ++b) members.push_back(za * matrix_power(x, b));
  }
  return EncodingFamily(d, std::move(members), "weyl", 1.0 / static_cast<double>(d));
}

/// {X_d^k D_k}; the D_k must be diagonal unitaries.
inline EncodingFamily shift_diag_family(std::size_t d, std::span<const ComplexMatrix> diagonals) {
  if (diagonals.size() != d) {
    throw std::invalid_argument("shift_diag_family: need " + std::to_string(d) + " diagonal matrices");
  }
  const UnitaryMatrix x = shift(d);
  std::vector<UnitaryMatrix> members;
  for (std::size_t k = 0; k < d; ++k) {
    const ComplexMatrix& dk = diagonals[k];
    if (dk.rows() != d || dk.cols() != d) throw DimensionError("shift_diag_family: diagonal has wrong shape");
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        if (r != c && std::abs(dk(r, c)) > Tolerances::unitarity) {
          throw std::domain_error("shift_diag_family: matrix is not diagonal");
        }
      }
    }
    if (unitarity_residual(dk) > Tolerances::unitarity) {
      throw std::domain_error("shift_diag_family: diagonal matrix is not unitary");
    }
    members.push_back(matrix_power(x, k) * UnitaryMatrix(dk));
  }
  return EncodingFamily(d, std::move(members), "shift-diag");
}

/// d diagonal unitaries with uniformly random phases; the first is the identity.
template <typename Rng>
std::vector<ComplexMatrix> random_diagonal_unitaries(std::size_t d, Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<ComplexMatrix> out;
  out.push_back(ComplexMatrix::identity(d));
  for (std::size_t k = 1; k < d; ++k) {
    std::vector<cplx> diag(d);
    for (auto& z : diag) z = std::polar(1.0, angle(rng));
    out.push_back(ComplexMatrix::diagonal(diag));
  }
  return out;
}

namespace detail {

constexpr cplx I{0.0, 1.0};

/// Identity with its first two columns interchanged.
inline UnitaryMatrix swap_first_two(std::size_t d) {
  ComplexMatrix m = ComplexMatrix::identity(d);
  m(0, 0) = 0.0;
  m(1, 1) = 0.0;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return UnitaryMatrix(std::move(m));
}

/// block_diag(X_{d−1}^j, [1]).
inline UnitaryMatrix block_shift(std::size_t d, std::size_t j) {
  ComplexMatrix m(d, d);
  for (std::size_t c = 0; c + 1 < d; ++c) m((c + j) % (d - 1), c) = 1.0;
  m(d - 1, d - 1) = 1.0;
  return UnitaryMatrix(std::move(m));
}

inline ComplexVector basis_vector(std::size_t d, std::size_t k) {
  ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(d));
  e(static_cast<Eigen::Index>(k)) = 1.0;
  return e;
}

inline ComplexVector vec(std::initializer_list<cplx> entries) {
  ComplexVector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (cplx z : entries) v(i++) = z;
  return v;
}

inline UnitaryMatrix from_two_columns(const ComplexVector& first, const ComplexVector& second) {
  const auto d = static_cast<std::size_t>(first.size());
  return complete_to_unitary({first, second}, d);
}

/// R: moves entry 1 to the end and shifts the entries below it up by one.
inline ComplexVector move_second_to_last(const ComplexVector& v) {
  const Eigen::Index n = v.size();
  ComplexVector out(n);
  out(0) = v(0);
  for (Eigen::Index k = 2; k < n; ++k) out(k - 1) = v(k);
  out(n - 1) = v(1);
  return out;
}

/// (head..., scale·tail) as one column.
inline ComplexVector stack(std::initializer_list<cplx> head, double scale, const ComplexVector& tail) {
  ComplexVector out(static_cast<Eigen::Index>(head.size()) + tail.size());
  Eigen::Index i = 0;
  for (cplx z : head) out(i++) = z;
  out.tail(tail.size()) = scale * tail;
  return out;
}

inline std::string ratio_label(std::size_t num, std::size_t den) {
  return "F_" + std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace detail

/// Five unitaries orthogonal at Λ = diag(3/5, 2/5, 0): {I, A, M, M*, U}.
inline EncodingFamily qutrit_five_family() {
  using detail::I;
  const double r3 = std::sqrt(3.0);
  const double r5 = std::sqrt(5.0);
  const auto a = detail::swap_first_two(3);
  const UnitaryMatrix u(ComplexMatrix::from_rows({
      {-2.0 / 3.0, 0.0, r5 / 3.0},
      {0.0, 1.0, 0.0},
      {-r5 / 3.0, 0.0, -2.0 / 3.0},
  }));
  const UnitaryMatrix m(ComplexMatrix::from_rows({
      {-1.0 / 3.0, -(r3 / 2.0) * I, r5 / 6.0},
      {(1.0 / r3) * I, 0.5, -(r5 / (2.0 * r3)) * I},
      {r5 / 3.0, 0.0, 2.0 / 3.0},
  }));
  return EncodingFamily(3, {UnitaryMatrix::identity(3), a, m, m.conjugate(), u}, detail::ratio_label(3, 5),
                        3.0 / 5.0);
}

/// Six unitaries orthogonal at Λ = diag(2/3, 1/3, 0, 0): {I, A, U₁, U₂, V₁, V₂}.
inline EncodingFamily family_f46() {
  const double h = std::sqrt(3.0) / 2.0;
  const UnitaryMatrix u1(ComplexMatrix::from_rows({
      {-0.5, 0, h, 0},
      {0, 1, 0, 0},
      {-h, 0, -0.5, 0},
      {0, 0, 0, 1},
  }));
  const UnitaryMatrix u2(ComplexMatrix::from_rows({
      {-0.5, 0, h, 0},
      {0, 1, 0, 0},
      {h, 0, 0.5, 0},
      {0, 0, 0, 1},
  }));
  const UnitaryMatrix v1(ComplexMatrix::from_rows({
      {0, 1, 0, 0},
      {-0.5, 0, h, 0},
      {0, 0, 0, 1},
      {-h, 0, -0.5, 0},
  }));
  const UnitaryMatrix v2(ComplexMatrix::from_rows({
      {0, 1, 0, 0},
      {-0.5, 0, h, 0},
      {0, 0, 0, 1},
      {h, 0, 0.5, 0},
  }));
  return EncodingFamily(4, {UnitaryMatrix::identity(4), detail::swap_first_two(4), u1, u2, v1, v2},
                        detail::ratio_label(4, 6), 2.0 / 3.0);
}

/// Seven unitaries orthogonal at Λ = diag(4/7, 3/7, 0, 0): {I, A₁, A₂, U, M₀, M₁, M₂}.
inline EncodingFamily family_f47() {
  const double r7 = std::sqrt(7.0);
  const UnitaryMatrix u(ComplexMatrix::from_rows({
      {-0.75, 0, 0, r7 / 4.0},
      {0, 1, 0, 0},
      {0, 0, 1, 0},
      {-r7 / 4.0, 0, 0, -0.75},
  }));
  std::vector<UnitaryMatrix> members{UnitaryMatrix::identity(4), detail::block_shift(4, 1), detail::block_shift(4, 2),
                                     u};
  for (std::size_t j = 0; j < 3; ++j) {
    const cplx w1 = root_of_unity(3, j);
    const cplx w2 = root_of_unity(3, 2 * j);
    members.emplace_back(ComplexMatrix::from_rows({
        {-0.25, -2.0 / 3.0 * w2, -2.0 / 3.0 * w1, r7 / 12.0},
        {0.5 * w1, 1.0 / 3.0, -2.0 / 3.0 * w2, -r7 / 6.0 * w1},
        {0.5 * w2, -2.0 / 3.0 * w1, 1.0 / 3.0, -r7 / 6.0 * w2},
        {r7 / 4.0, 0, 0, 0.75},
    }));
  }
  return EncodingFamily(4, std::move(members), detail::ratio_label(4, 7), 4.0 / 7.0);
}

namespace detail {

/// First column of M_j in the 2d−1 construction.
inline ComplexVector two_d_minus_one_m_first(std::size_t d, std::size_t j) {
  static constexpr std::array<cplx, 4> i_pow{cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  ComplexVector c(static_cast<Eigen::Index>(d));
  c(0) = -1.0 / static_cast<double>(d);
  for (std::size_t k = 1; k + 1 < d; ++k) {
    cplx entry;
    if (d % 2 == 1) {
      const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
      entry = -sign * inv_sqrt_d * i_pow[k % 4] * root_of_unity(d - 1, k * j);
    } else {
      const std::size_t extra = k % 2 == 1 ? (k - 1) / 2 : 0;
      entry = -inv_sqrt_d * I * root_of_unity(d - 3, extra) * root_of_unity(d - 1, k * j);
    }
    c(static_cast<Eigen::Index>(k)) = entry;
  }
  c(static_cast<Eigen::Index>(d - 1)) = std::sqrt(2.0 * static_cast<double>(d) - 1.0) / static_cast<double>(d);
  return c;
}

/// Second column of M_j, fixed by the first: a scaled cyclic shift with the last entry zero.
inline ComplexVector two_d_minus_one_m_second(const ComplexVector& first) {
  const Eigen::Index d = first.size();
  const double f = -static_cast<double>(d) / static_cast<double>(d - 1);
  ComplexVector c = ComplexVector::Zero(d);
  c(0) = f * first(d - 2);
  for (Eigen::Index k = 0; k + 3 <= d; ++k) c(k + 1) = f * first(k);
  return c;
}

}  // namespace detail

/// 2d−1 unitaries orthogonal at λ₀ = d/(2d−1), λ₁ = 1 − λ₀.
inline EncodingFamily family_2dm1(std::size_t d) {
  if (d < 4) throw std::invalid_argument("family_2dm1 requires d >= 4");
  if (d == 4) return family_f47();

  const double dd = static_cast<double>(d);
  std::vector<UnitaryMatrix> members;
  members.reserve(2 * d - 1);
  for (std::size_t j = 0; j + 1 < d; ++j) members.push_back(detail::block_shift(d, j));
  for (std::size_t j = 0; j + 1 < d; ++j) {
    const ComplexVector first = detail::two_d_minus_one_m_first(d, j);
    members.push_back(detail::from_two_columns(first, detail::two_d_minus_one_m_second(first)));
  }
  ComplexVector u_first = ComplexVector::Zero(static_cast<Eigen::Index>(d));
  u_first(0) = -(dd - 1.0) / dd;
  u_first(static_cast<Eigen::Index>(d - 1)) = -std::sqrt(2.0 * dd - 1.0) / dd;
  members.push_back(detail::from_two_columns(u_first, detail::basis_vector(d, 1)));

  return EncodingFamily(d, std::move(members), d % 2 == 1 ? "2d-1-odd" : "2d-1-even", dd / (2.0 * dd - 1.0));
}

namespace detail {

/// First columns of the U, V and (odd d) M members of the d+2 family at dimension d.
struct DPlusTwoColumns {
  std::vector<ComplexVector> u;
  std::vector<ComplexVector> v;
  ComplexVector m;
};

inline DPlusTwoColumns d_plus_two_base4() {
  const double h = std::sqrt(3.0) / 2.0;
  return {{vec({-0.5, 0, -h, 0}), vec({-0.5, 0, h, 0})}, {vec({0, -0.5, 0, -h}), vec({0, -0.5, 0, h})}, {}};
}

inline DPlusTwoColumns d_plus_two_base5() {
  const double s = std::sqrt(21.0) / 5.0;
  const double r3 = std::sqrt(3.0);
  const double r5 = std::sqrt(5.0);
  return {
      {vec({-0.4, 0, s * (-2.0 / 3.0), s * (r5 / 3.0), 0}), vec({-0.4, 0, s, 0, 0})},
      {vec({0, -0.4, 0, 0, s})},
      vec({-0.2, -(r3 / 5.0) * I, s * (-1.0 / 3.0), s * (-r5 / 3.0), s * (-(r3 / 3.0) * I)}),
  };
}

/// Lifts the first columns from dimension d−2 to d and appends the new top U and V.
inline DPlusTwoColumns d_plus_two_columns(std::size_t d) {
  if (d == 4) return d_plus_two_base4();
  if (d == 5) return d_plus_two_base5();

  const DPlusTwoColumns prev = d_plus_two_columns(d - 2);
  const double a = 2.0 / static_cast<double>(d);
  const double s = std::sqrt(1.0 - a * a);
  DPlusTwoColumns out;
  for (const auto& c : prev.u) out.u.push_back(stack({-a, 0.0}, s, move_second_to_last(c)));
  ComplexVector top_u = ComplexVector::Zero(static_cast<Eigen::Index>(d));
  top_u(0) = -a;
  top_u(2) = s;
  out.u.push_back(std::move(top_u));

  for (const auto& c : prev.v) out.v.push_back(stack({0.0, -a}, s, move_second_to_last(c)));
  ComplexVector top_v = ComplexVector::Zero(static_cast<Eigen::Index>(d));
  top_v(1) = -a;
  top_v(static_cast<Eigen::Index>(d - 1)) = s;
  out.v.push_back(std::move(top_v));

  if (d % 2 == 1) {
    out.m = stack({-1.0 / static_cast<double>(d), -(std::sqrt(3.0) / static_cast<double>(d)) * I}, s,
                  move_second_to_last(prev.m));
  }
  return out;
}

}  // namespace detail

/// d+2 unitaries orthogonal at λ₀ = d/(d+2), λ₁ = 1 − λ₀.
///
/// Even d: {I, A, U_1 … U_{d/2}, V_1 … V_{d/2}}.
/// Odd d ≥ 5: {I, A, M, M*, U_1 … U_{(d−1)/2}, V_1 … V_{(d−3)/2}}.
inline EncodingFamily family_dp2(std::size_t d) {
  if (d < 2) throw std::invalid_argument("family_dp2 requires d >= 2");
  const std::string label = detail::ratio_label(d, d + 2);
  const double target = static_cast<double>(d) / static_cast<double>(d + 2);
  if (d == 2) {
    const EncodingFamily pauli = weyl_family(2);
    return EncodingFamily(2, pauli.members(), label, target);
  }
  if (d == 3) return qutrit_five_family();
  if (d == 4) return family_f46();

  const auto cols = detail::d_plus_two_columns(d);
  const ComplexVector e0 = detail::basis_vector(d, 0);
  const ComplexVector e1 = detail::basis_vector(d, 1);

  std::vector<UnitaryMatrix> members{UnitaryMatrix::identity(d), detail::swap_first_two(d)};
  if (d % 2 == 1) {
    ComplexVector m_second = ComplexVector::Zero(static_cast<Eigen::Index>(d));
    m_second(0) = (std::sqrt(3.0) / 2.0) * detail::I;
    m_second(1) = 0.5;
    const UnitaryMatrix m = detail::from_two_columns(cols.m, m_second);
    members.push_back(m);
    members.push_back(m.conjugate());
  }
  for (const auto& c : cols.u) members.push_back(detail::from_two_columns(c, e1));
  for (const auto& c : cols.v) members.push_back(detail::from_two_columns(c, e0));
  return EncodingFamily(d, std::move(members), label, target);
}

}  // namespace dclab
