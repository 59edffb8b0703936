#pragma once
// Λ-orthogonality checks, capacity bounds and saturation diagnostics.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "encoding_family.hpp"
#include "linalg.hpp"
#include "states.hpp"

namespace dclab {

/// tr(Λ M†U). Only the columns with nonzero weight contribute.
inline cplx lambda_inner(const LambdaWeights& weights, const UnitaryMatrix& m, const UnitaryMatrix& u) {
  const std::size_t d = weights.dim();
  if (m.dim() != d || u.dim() != d) throw DimensionError("lambda_inner: dimension mismatch");
  const auto& a = m.matrix().eigen();
  const auto& b = u.matrix().eigen();
  cplx acc{};
  for (std::size_t k = 0; k < d; ++k) {
    const double w = weights.diagonal[k];
    if (w == 0.0) continue;
    const auto c = static_cast<Eigen::Index>(k);
    acc += w * a.col(c).dot(b.col(c));
  }
  return acc;
}

struct VerificationReport {
  double max_pairwise_residual = 0.0;   // max |tr(Λ U_i†U_j)|, i ≠ j
  double max_unitarity_residual = 0.0;  // max ‖U†U − I‖_max
  double max_norm_deviation = 0.0;      // max |‖ψ_i‖ − 1|
  std::size_t worst_i = 0;
  std::size_t worst_j = 0;
  double tolerance = 0.0;
  bool pass = false;
};

inline VerificationReport verify_members(std::span<const UnitaryMatrix> members, const SchmidtState& s, double tol) {
  const LambdaWeights w = lambda_weights(s);
  VerificationReport rep;
  rep.tolerance = tol;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].dim() != s.dim()) throw DimensionError("verify_family: family and state dimensions differ");
    rep.max_unitarity_residual = std::max(rep.max_unitarity_residual, members[i].residual());
    const double norm = message_vector(members[i], s).norm();
    rep.max_norm_deviation = std::max(rep.max_norm_deviation, std::abs(norm - 1.0));
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      const double r = std::abs(lambda_inner(w, members[i], members[j]));
      if (r > rep.max_pairwise_residual || (i == 0 && j == 1)) {
        rep.max_pairwise_residual = r;
        rep.worst_i = i;
        rep.worst_j = j;
      }
    }
  }
  rep.pass = rep.max_pairwise_residual <= tol && rep.max_unitarity_residual <= tol && rep.max_norm_deviation <= tol;
  return rep;
}

inline VerificationReport verify_family(const EncodingFamily& f, const SchmidtState& s, double tol = 1e-10) {
  if (f.dim() != s.dim()) throw DimensionError("verify_family: family and state dimensions differ");
  return verify_members(std::span<const UnitaryMatrix>(f.members()), s, tol);
}

/// max |⟨ψ_i|ψ_j⟩ − tr(Λ U_i†U_j)| over all ordered pairs, diagonal included.
inline double gram_equivalence_residual(const EncodingFamily& f, const SchmidtState& s) {
  if (f.dim() != s.dim()) throw DimensionError("gram_equivalence_residual: dimension mismatch");
  const MessageSet msgs = message_vectors(f, s);
  const LambdaWeights w = lambda_weights(s);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < f.size(); ++j) {
      const cplx gram = msgs.vectors[i].dot(msgs.vectors[j]);
      worst = std::max(worst, std::abs(gram - lambda_inner(w, f[i], f[j])));
    }
  }
  return worst;
}

/// Largest K with λ₀ ≤ d/K, capped at d².
inline std::size_t wcsg_bound(const SchmidtState& s) {
  const auto d = static_cast<double>(s.dim());
  const std::size_t cap = s.dim() * s.dim();
  if (s.lambda0() <= 0.0) return cap;
  const double k = std::floor(d / s.lambda0() + 1e-9);
  return std::min(cap, static_cast<std::size_t>(k));
}

/// Whether K messages are ruled out: K > the WCSG bound, or K = d+1 with λ₀ ≥ d/(d+1).
inline bool bns_excluded(const SchmidtState& s, std::size_t k) {
  const std::size_t d = s.dim();
  if (k > wcsg_bound(s)) return true;
  const double strict = static_cast<double>(d) / static_cast<double>(d + 1);
  return k == d + 1 && s.lambda0() >= strict - 1e-12;
}

/// True iff λ₀ equals d/K within 1e-9.
inline bool is_saturated(const SchmidtState& s, std::size_t k) {
  return std::abs(s.lambda0() - static_cast<double>(s.dim()) / static_cast<double>(k)) <= 1e-9;
}

struct KcReport {
  std::vector<double> residuals;  // ‖P_S|m0⟩ − |m0⟩‖ for m = 0 … d−1
  std::size_t span_dimension = 0;
  bool saturated = false;
  bool reorthonormalized = false;
  std::string advisory;

  double max_residual() const {
    return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
  }
};

/// Projects each |m0⟩ onto the span of the encoded messages.
///
/// At λ₀ = d/K every |m0⟩ lies in that span, so all residuals vanish. Off
/// saturation the report is still computed and carries an advisory note.
inline KcReport kc_span_check(const EncodingFamily& f, const SchmidtState& s) {
  if (f.dim() != s.dim()) throw DimensionError("kc_span_check: dimension mismatch");
  const std::size_t d = s.dim();
  const auto n = static_cast<Eigen::Index>(d * d);
  const MessageSet msgs = message_vectors(f, s);

  KcReport rep;
  rep.saturated = is_saturated(s, f.size());
  if (!rep.saturated) {
    rep.advisory = "lambda0 != d/K: the span identity only holds at saturation";
  }

  Eigen::MatrixXcd basis(n, static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = msgs.vectors[i];

  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(basis, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-8) ++rep.span_dimension;
  }

  if (verify_family(f, s).max_pairwise_residual > 1e-8) {
    rep.reorthonormalized = true;
    basis = svd.matrixU().leftCols(static_cast<Eigen::Index>(rep.span_dimension));
  }

  for (std::size_t m = 0; m < d; ++m) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e(static_cast<Eigen::Index>(m * d)) = 1.0;
    const Eigen::VectorXcd projected = basis * (basis.adjoint() * e);
    rep.residuals.push_back((projected - e).norm());
  }
  return rep;
}

/// No shift family {X_d^k D_k} extends to a larger orthogonal family when λ₀ > 1/2.
inline bool shift_family_obstructed(const SchmidtState& s) { return s.lambda0() > 0.5; }

/// No orthogonal family holds both I and a diagonal unitary D ≠ I when λ₀ > 1/2.
inline bool diagonal_identity_obstructed(const SchmidtState& s) { return s.lambda0() > 0.5; }

}  // namespace dclab
