#pragma once
// Small dense complex matrix kernels (d up to a few dozen).

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dclab {

using cplx = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

/// Raised when operand shapes are incompatible.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Default residual tolerances. All residuals are entrywise max-abs norms.
struct Tolerances {
  static constexpr double unitarity = 1e-10;
  static constexpr double orthonormal_input = 1e-10;
  static constexpr double completion_threshold = 1e-6;
};

/// Dense complex matrix stored row-major. Entries are always finite.
class ComplexMatrix {
 public:
  using Storage = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : data_(Storage::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols))) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::span<const cplx> row_major)
      : ComplexMatrix(rows, cols) {
    if (row_major.size() != rows * cols) {
      throw DimensionError("entry count " + std::to_string(row_major.size()) + " does not match " +
                           std::to_string(rows) + "x" + std::to_string(cols));
    }
    std::copy(row_major.begin(), row_major.end(), data_.data());
    check_finite();
  }

  explicit ComplexMatrix(Storage data) : data_(std::move(data)) { check_finite(); }

  template <typename Derived>
  static ComplexMatrix from_eigen(const Eigen::MatrixBase<Derived>& m) {
    return ComplexMatrix(Storage(m));
  }

  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<cplx> flat;
    flat.reserve(r * c);
    for (const auto& row : rows) {
      if (row.size() != c) throw DimensionError("ragged row list");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return ComplexMatrix(r, c, flat);
  }

  static ComplexMatrix identity(std::size_t d) {
    return ComplexMatrix(Storage::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  }

  static ComplexMatrix diagonal(std::span<const cplx> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    m.check_finite();
    return m;
  }

  std::size_t rows() const { return static_cast<std::size_t>(data_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(data_.cols()); }
  bool is_square() const { return rows() == cols(); }

  cplx operator()(std::size_t r, std::size_t c) const {
    return data_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  cplx& operator()(std::size_t r, std::size_t c) {
    return data_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  std::span<const cplx> entries() const {
    return {data_.data(), static_cast<std::size_t>(data_.size())};
  }

  ComplexVector column(std::size_t c) const { return data_.col(static_cast<Eigen::Index>(c)); }

  const Storage& eigen() const { return data_; }

  /// Entrywise complex conjugate.
  ComplexMatrix conjugate() const { return ComplexMatrix(Storage(data_.conjugate())); }

 private:
  void check_finite() const {
    for (Eigen::Index i = 0; i < data_.size(); ++i) {
      const cplx z = data_.data()[i];
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw std::domain_error("matrix entry is not finite");
      }
    }
  }

  Storage data_;
};

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
  if (a.rows() * a.cols() == 0) return 0.0;
  return (a.eigen() - b.eigen()).cwiseAbs().maxCoeff();
}

inline ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  return ComplexMatrix(ComplexMatrix::Storage(a.eigen() * b.eigen()));
}

inline ComplexMatrix dagger(const ComplexMatrix& a) {
  return ComplexMatrix(ComplexMatrix::Storage(a.eigen().adjoint()));
}

inline cplx trace(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("trace of non-square matrix");
  return a.eigen().trace();
}

/// ‖A†A − I‖_max, or infinity for a non-square matrix.
inline double unitarity_residual(const ComplexMatrix& a) {
  if (!a.is_square()) return std::numeric_limits<double>::infinity();
  if (a.rows() == 0) return 0.0;
  const auto gram = (a.eigen().adjoint() * a.eigen()).eval();
  return (gram - ComplexMatrix::Storage::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

/// A square complex matrix whose unitarity residual was checked on construction.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(ComplexMatrix m, double tol = Tolerances::unitarity) : inner_(std::move(m)) {
    if (!inner_.is_square()) throw DimensionError("unitary matrix must be square");
    const double r = unitarity_residual(inner_);
    if (!(r <= tol)) {
      throw std::domain_error("matrix is not unitary: residual " + std::to_string(r));
    }
  }

  static UnitaryMatrix identity(std::size_t d) { return UnitaryMatrix(ComplexMatrix::identity(d)); }

  std::size_t dim() const { return inner_.rows(); }
  const ComplexMatrix& matrix() const { return inner_; }
  cplx operator()(std::size_t r, std::size_t c) const { return inner_(r, c); }
  double residual() const { return unitarity_residual(inner_); }

  UnitaryMatrix conjugate() const { return UnitaryMatrix(inner_.conjugate()); }

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
    return UnitaryMatrix(mat_mul(a.inner_, b.inner_), 10 * Tolerances::unitarity);
  }

 private:
  ComplexMatrix inner_;
};

/// Completes a list of orthonormal columns to a d×d unitary.
///
/// The given columns come first. Canonical basis vectors e_0 … e_{d-1} are then
/// offered in index order, projected against everything accepted so far with two
/// passes of modified Gram–Schmidt, and kept when the projected norm exceeds 1e-6.
/// Each completed column is rotated so its first nonzero entry is real positive.
inline UnitaryMatrix complete_to_unitary(std::span<const ComplexVector> partial_columns, std::size_t d) {
  if (partial_columns.size() > d) {
    throw DimensionError("complete_to_unitary: " + std::to_string(partial_columns.size()) +
                         " columns exceed dimension " + std::to_string(d));
  }
  for (const auto& c : partial_columns) {
    if (static_cast<std::size_t>(c.size()) != d) throw DimensionError("complete_to_unitary: column length != d");
  }
  for (std::size_t i = 0; i < partial_columns.size(); ++i) {
    for (std::size_t j = i; j < partial_columns.size(); ++j) {
      const cplx ip = partial_columns[i].dot(partial_columns[j]);
      const double expect = i == j ? 1.0 : 0.0;
      if (std::abs(ip - expect) > Tolerances::orthonormal_input) {
        throw std::domain_error("complete_to_unitary: input columns are not orthonormal");
      }
    }
  }

  std::vector<ComplexVector> basis;
  basis.reserve(d);
  auto project_out = [&basis](ComplexVector v) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) v -= b * b.dot(v);
    }
    return v;
  };

  // Re-orthonormalize the inputs so the result is unitary to rounding.
  for (const auto& c : partial_columns) {
    ComplexVector v = project_out(c);
    basis.push_back(v / v.norm());
  }

  for (std::size_t k = 0; k < d && basis.size() < d; ++k) {
    ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(d));
    e(static_cast<Eigen::Index>(k)) = 1.0;
    ComplexVector v = project_out(e);
    const double n = v.norm();
    if (n <= Tolerances::completion_threshold) continue;
    v /= n;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) > 1e-10) {
        v *= std::conj(v(i)) / std::abs(v(i));
        break;
      }
    }
    basis.push_back(std::move(v));
  }
  if (basis.size() != d) throw std::logic_error("complete_to_unitary: canonical completion failed");

  ComplexMatrix::Storage m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t c = 0; c < d; ++c) m.col(static_cast<Eigen::Index>(c)) = basis[c];
  return UnitaryMatrix(ComplexMatrix(std::move(m)));
}

inline UnitaryMatrix complete_to_unitary(std::initializer_list<ComplexVector> cols, std::size_t d) {
  return complete_to_unitary(std::span<const ComplexVector>(cols.begin(), cols.size()), d);
}

/// U ⊗ I_d on the joint space, basis index m·d + n.
inline ComplexMatrix kron_with_identity(const UnitaryMatrix& u, std::size_t d) {
  if (u.dim() != d) throw DimensionError("kron_with_identity: dimension mismatch");
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix::Storage out = ComplexMatrix::Storage::Zero(n * n, n * n);
  const auto& a = u.matrix().eigen();
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const cplx z = a(r, c);
      if (z == cplx{}) continue;
      for (Eigen::Index k = 0; k < n; ++k) out(r * n + k, c * n + k) = z;
    }
  }
  return ComplexMatrix(std::move(out));
}

}  // namespace dclab
