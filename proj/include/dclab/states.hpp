#pragma once
// Schmidt states of a two-qudit system, their entropy, and encoded messages.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "encoding_family.hpp"
#include "linalg.hpp"

namespace dclab {

class SchmidtState;
SchmidtState make_state(std::size_t d, std::span<const double> lambdas);

/// Pure state Σ_j √λ_j |jj⟩ with weights stored in nonincreasing order.
class SchmidtState {
 public:
  std::size_t dim() const { return lambdas_.size(); }
  std::span<const double> lambdas() const { return lambdas_; }
  double lambda(std::size_t k) const { return lambdas_.at(k); }
  double lambda0() const { return lambdas_.front(); }

 private:
  explicit SchmidtState(std::vector<double> l) : lambdas_(std::move(l)) {}
  friend SchmidtState make_state(std::size_t d, std::span<const double> lambdas);

  std::vector<double> lambdas_;
};

/// Validates, sorts and (if within 1e-9 of one) renormalizes the weights.
inline SchmidtState make_state(std::size_t d, std::span<const double> lambdas) {
  if (d < 2) throw std::invalid_argument("state dimension must be at least 2");
  if (lambdas.size() != d) {
    throw DimensionError("expected " + std::to_string(d) + " weights, got " + std::to_string(lambdas.size()));
  }
  for (double l : lambdas) {
    if (!std::isfinite(l)) throw std::invalid_argument("weight is not finite");
    if (l < 0.0) throw std::invalid_argument("negative Schmidt weight " + std::to_string(l));
  }
  const double sum = std::accumulate(lambdas.begin(), lambdas.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("weights sum to " + std::to_string(sum) + ", not 1");
  }
  std::vector<double> sorted(lambdas.begin(), lambdas.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  for (double& l : sorted) l /= sum;
  return SchmidtState(std::move(sorted));
}

inline SchmidtState make_state(std::size_t d, std::initializer_list<double> lambdas) {
  return make_state(d, std::span<const double>(lambdas.begin(), lambdas.size()));
}

inline SchmidtState make_state(std::span<const double> lambdas) { return make_state(lambdas.size(), lambdas); }

inline SchmidtState uniform_state(std::size_t d) {
  std::vector<double> l(d, 1.0 / static_cast<double>(d));
  return make_state(d, l);
}

/// (λ₀, 1−λ₀, 0, …, 0): the minimal-entropy state for a given λ₀ ≥ 1/2.
inline SchmidtState two_level_state(std::size_t d, double lambda0) {
  std::vector<double> l(d, 0.0);
  l[0] = lambda0;
  l[1] = 1.0 - lambda0;
  return make_state(d, l);
}

/// Entanglement entropy in bits, with 0·log 0 = 0.
inline double entropy_bits(const SchmidtState& s) {
  double h = 0.0;
  for (double l : s.lambdas()) {
    if (l > 0.0) h -= l * std::log2(l);
  }
  return h;
}

/// Diagonal of the weight matrix Λ.
struct LambdaWeights {
  std::vector<double> diagonal;

  std::size_t dim() const { return diagonal.size(); }

  ComplexMatrix matrix() const {
    std::vector<cplx> d(diagonal.begin(), diagonal.end());
    return ComplexMatrix::diagonal(d);
  }
};

inline LambdaWeights lambda_weights(const SchmidtState& s) {
  return LambdaWeights{std::vector<double>(s.lambdas().begin(), s.lambdas().end())};
}

/// Encoded messages (U_i ⊗ I)|ψ⟩ in the joint space, basis index m·d + n.
struct MessageSet {
  std::vector<ComplexVector> vectors;
};

inline ComplexVector message_vector(const UnitaryMatrix& u, const SchmidtState& s) {
  const std::size_t d = s.dim();
  if (u.dim() != d) throw DimensionError("message_vector: unitary and state dimensions differ");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t j = 0; j < d; ++j) {
    const double amp = std::sqrt(s.lambda(j));
    if (amp == 0.0) continue;
    for (std::size_t m = 0; m < d; ++m) v(static_cast<Eigen::Index>(m * d + j)) = amp * u(m, j);
  }
  return v;
}

inline MessageSet message_vectors(std::span<const UnitaryMatrix> members, const SchmidtState& s) {
  MessageSet out;
  out.vectors.reserve(members.size());
  for (const auto& u : members) out.vectors.push_back(message_vector(u, s));
  return out;
}

inline MessageSet message_vectors(const EncodingFamily& family, const SchmidtState& s) {
  if (family.dim() != s.dim()) throw DimensionError("message_vectors: family and state dimensions differ");
  return message_vectors(std::span<const UnitaryMatrix>(family.members()), s);
}

}  // namespace dclab
