#pragma once
// Numerical search for Λ-orthogonal families and N_max estimation.
//
// The first member is fixed to the identity (any family can be left-multiplied
// by U₀† without changing its inner products). Each free member is U = exp(iH)
// for a Hermitian H given by d² real parameters, and the sum of squared pairwise
// Λ-inner-products is minimized by L-BFGS with an analytic gradient, restarted
// from seeded random points.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "detail/lbfgs.hpp"
#include "detail/parallel.hpp"
#include "encoding_family.hpp"
#include "linalg.hpp"
#include "states.hpp"

namespace dclab {

struct SearchConfig {
  std::size_t max_k = 0;  // 0 means d²
  std::size_t restarts = 50;
  std::size_t max_iters = 2000;
  double accept_tol = 1e-10;
  double init_scale = 1.0;  // std. deviation of the random Hermitian parameters
  std::size_t lbfgs_memory = 12;
  std::uint64_t base_seed = 0;
  std::size_t threads = 0;  // 0 means all hardware threads
  bool pin_fr = false;      // pin entry (0,1) of the first free member when λ₁ = … = λ_{d−1}

  void validate() const {
    if (restarts < 1) throw std::invalid_argument("restarts must be at least 1");
    if (!(accept_tol > 0.0)) throw std::invalid_argument("accept_tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  }
};

/// Σ_{i<j} |tr(Λ U_i†U_j)|².
inline double objective(const LambdaWeights& weights, std::span<const UnitaryMatrix> family) {
  double f = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) f += std::norm(lambda_inner(weights, family[i], family[j]));
  }
  return f;
}

inline double objective(const LambdaWeights& weights, const EncodingFamily& family) {
  return objective(weights, std::span<const UnitaryMatrix>(family.members()));
}

/// max |tr(Λ U_i†U_j)| over pairs.
inline double max_pair_residual(const LambdaWeights& weights, std::span<const UnitaryMatrix> family) {
  double worst = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      worst = std::max(worst, std::abs(lambda_inner(weights, family[i], family[j])));
    }
  }
  return worst;
}

/// Hermitian H from d² reals: d diagonal entries, then (re, im) of each upper
/// off-diagonal entry in row-major order.
inline Eigen::MatrixXcd hermitian_from_params(std::span<const double> p, std::size_t d) {
  if (p.size() != d * d) throw DimensionError("hermitian_from_params: expected d^2 parameters");
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXcd h(n, n);
  std::size_t at = 0;
  for (Eigen::Index k = 0; k < n; ++k) h(k, k) = p[at++];
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = r + 1; c < n; ++c) {
      const cplx z{p[at], p[at + 1]};
      at += 2;
      h(r, c) = z;
      h(c, r) = std::conj(z);
    }
  }
  return h;
}

namespace detail {

/// exp(iH) through the eigendecomposition H = V diag(θ) V†, kept for the chain rule.
struct ExpOfHermitian {
  Eigen::MatrixXcd vecs;
  Eigen::VectorXd theta;
  Eigen::MatrixXcd u;

  explicit ExpOfHermitian(const Eigen::MatrixXcd& h) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    vecs = es.eigenvectors();
    theta = es.eigenvalues();
    Eigen::VectorXcd phases(theta.size());
    for (Eigen::Index k = 0; k < theta.size(); ++k) phases(k) = std::polar(1.0, theta(k));
    u = vecs * phases.asDiagonal() * vecs.adjoint();
  }

  /// Given Γ with df = Re tr(Γ† dU), writes ∂f/∂p for the d² Hermitian parameters.
  void pullback(const Eigen::MatrixXcd& gamma, std::span<double> out) const {
    const Eigen::Index n = theta.size();
    Eigen::MatrixXcd g = vecs.adjoint() * gamma * vecs;
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = 0; b < n; ++b) {
        // Divided difference of e^{ix}: i e^{i(θa+θb)/2} sinc((θa−θb)/2).
        const double half = 0.5 * (theta(a) - theta(b));
        const double sinc = std::abs(half) < 1e-4 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
        const cplx dd = cplx{0.0, 1.0} * std::polar(sinc, 0.5 * (theta(a) + theta(b)));
        g(a, b) *= std::conj(dd);
      }
    }
    g = vecs * g * vecs.adjoint();
    std::size_t at = 0;
    for (Eigen::Index k = 0; k < n; ++k) out[at++] = g(k, k).real();
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = r + 1; c < n; ++c) {
        out[at++] = g(r, c).real() + g(c, r).real();
        out[at++] = g(r, c).imag() - g(c, r).imag();
      }
    }
  }
};

}  // namespace detail

/// exp(iH) for the Hermitian H encoded by `p`.
inline UnitaryMatrix unitary_from_params(std::span<const double> p, std::size_t d) {
  const detail::ExpOfHermitian e(hermitian_from_params(p, d));
  return UnitaryMatrix(ComplexMatrix::from_eigen(e.u));
}

/// Objective over a family whose first members are fixed and whose remaining
/// members are exp(iH_i), as a function of the stacked Hermitian parameters.
class FamilyObjective {
 public:
  FamilyObjective(LambdaWeights weights, std::span<const UnitaryMatrix> fixed, std::size_t free_count,
                  bool pin_first_free = false)
      : weights_(std::move(weights)), d_(weights_.dim()), free_(free_count), pin_(pin_first_free) {
    for (const auto& u : fixed) {
      if (u.dim() != d_) throw DimensionError("FamilyObjective: fixed member dimension mismatch");
      fixed_.push_back(u.matrix().eigen());
    }
    if (pin_ && free_ == 0) throw std::invalid_argument("FamilyObjective: nothing to pin");
    const auto n = static_cast<Eigen::Index>(d_);
    lam_ = Eigen::VectorXd(n);
    for (Eigen::Index k = 0; k < n; ++k) lam_(k) = weights_.diagonal[static_cast<std::size_t>(k)];
  }

  std::size_t dim() const { return d_; }
  std::size_t num_params() const { return free_ * d_ * d_; }
  std::size_t family_size() const { return fixed_.size() + free_; }

  /// Objective value; fills `grad` (size num_params()) when it is non-empty.
  double operator()(std::span<const double> x, std::span<double> grad) const {
    if (x.size() != num_params()) throw DimensionError("FamilyObjective: wrong parameter count");
    const std::size_t nfix = fixed_.size();
    const std::size_t total = nfix + free_;
    const std::size_t per = d_ * d_;

    std::vector<detail::ExpOfHermitian> exps;
    exps.reserve(free_);
    std::vector<Eigen::MatrixXcd> mats;
    mats.reserve(total);
    for (const auto& m : fixed_) mats.push_back(m);
    for (std::size_t i = 0; i < free_; ++i) {
      exps.emplace_back(hermitian_from_params(x.subspan(i * per, per), d_));
      mats.push_back(exps.back().u);
    }

    // Columns scaled by Λ, so tr(Λ U_i†U_j) = Σ conj(U_i) ∘ (U_j Λ).
    std::vector<Eigen::MatrixXcd> scaled;
    scaled.reserve(total);
    for (const auto& m : mats) scaled.push_back(m * lam_.asDiagonal());

    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
    double f = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      for (std::size_t j = i + 1; j < total; ++j) {
        // Pairs among fixed members contribute a constant.
        const cplx tij = mats[i].conjugate().cwiseProduct(scaled[j]).sum();
        t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = tij;
        t(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = std::conj(tij);
        f += std::norm(tij);
      }
    }
    if (pin_) f += std::norm(mats[nfix](0, 1));

    if (!grad.empty()) {
      if (grad.size() != num_params()) throw DimensionError("FamilyObjective: wrong gradient size");
      for (std::size_t i = 0; i < free_; ++i) {
        const std::size_t idx = nfix + i;
        // Γ_i = 2 Σ_{j≠i} t_ji U_j Λ.
        Eigen::MatrixXcd gamma = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d_), static_cast<Eigen::Index>(d_));
        for (std::size_t j = 0; j < total; ++j) {
          if (j == idx) continue;
          gamma += 2.0 * t(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(idx)) * scaled[j];
        }
        if (pin_ && i == 0) gamma(0, 1) += 2.0 * mats[idx](0, 1);
        exps[i].pullback(gamma, grad.subspan(i * per, per));
      }
    }
    return f;
  }

  std::vector<UnitaryMatrix> members(std::span<const double> x) const {
    std::vector<UnitaryMatrix> out;
    for (const auto& m : fixed_) out.emplace_back(ComplexMatrix::from_eigen(m));
    const std::size_t per = d_ * d_;
    for (std::size_t i = 0; i < free_; ++i) out.push_back(unitary_from_params(x.subspan(i * per, per), d_));
    return out;
  }

 private:
  LambdaWeights weights_;
  std::size_t d_;
  std::size_t free_;
  bool pin_;
  std::vector<Eigen::MatrixXcd> fixed_;
  Eigen::VectorXd lam_;
};

/// True when λ₁ = … = λ_{d−1}, the condition under which pinning is valid.
inline bool tail_weights_equal(const SchmidtState& s) {
  for (std::size_t k = 2; k < s.dim(); ++k) {
    if (std::abs(s.lambda(k) - s.lambda(1)) > 1e-12) return false;
  }
  return true;
}

struct FindResult {
  std::size_t k = 0;
  double best_objective = std::numeric_limits<double>::infinity();
  double max_pair_residual = std::numeric_limits<double>::infinity();
  std::optional<EncodingFamily> witness;
  std::size_t restarts_run = 0;
  std::uint64_t seed = 0;

  bool found() const { return witness.has_value(); }
};

namespace detail {

inline std::uint64_t restart_seed(std::uint64_t base, std::size_t k, std::size_t restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(restart)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace detail

/// Searches for k Λ-orthogonal unitaries extending `prefix` (default {I}).
///
/// Restart r starts from a point drawn with a seed derived from (base_seed, k, r).
/// Restarts stop at the first one that reaches accept_tol; the outcome does not
/// depend on the number of threads.
inline FindResult find_family(const SchmidtState& s, std::size_t k, const SearchConfig& cfg,
                              std::span<const UnitaryMatrix> prefix = {}) {
  cfg.validate();
  const std::size_t d = s.dim();
  if (k < d || k > d * d) {
    throw std::out_of_range("find_family: k = " + std::to_string(k) + " outside [" + std::to_string(d) + ", " +
                            std::to_string(d * d) + "]");
  }
  std::vector<UnitaryMatrix> fixed(prefix.begin(), prefix.end());
  if (fixed.empty()) fixed.push_back(UnitaryMatrix::identity(d));
  if (fixed.size() > k) throw std::invalid_argument("find_family: prefix larger than k");

  const std::size_t free_count = k - fixed.size();
  const bool pin = cfg.pin_fr && free_count > 0 && tail_weights_equal(s);
  const FamilyObjective obj(lambda_weights(s), fixed, free_count, pin);
  const LambdaWeights weights = lambda_weights(s);

  FindResult res;
  res.k = k;
  res.seed = cfg.base_seed;

  if (free_count == 0) {
    res.best_objective = objective(weights, fixed);
    res.max_pair_residual = max_pair_residual(weights, fixed);
    res.restarts_run = 1;
    if (res.best_objective <= cfg.accept_tol) res.witness.emplace(d, fixed, "search");
    return res;
  }

  struct Outcome {
    double f = std::numeric_limits<double>::infinity();
    std::vector<double> x;
  };
  std::vector<Outcome> outcomes(cfg.restarts);
  std::atomic<std::size_t> first_accept{cfg.restarts};

  detail::LbfgsOptions opt;
  opt.max_iters = cfg.max_iters;
  opt.memory = cfg.lbfgs_memory;
  opt.f_target = cfg.accept_tol * 1e-14;

  detail::parallel_for(
      cfg.restarts, cfg.threads,
      [&](std::size_t r) {
        std::mt19937_64 rng(detail::restart_seed(cfg.base_seed, k, r));
        std::normal_distribution<double> normal(0.0, cfg.init_scale);
        std::vector<double> x(obj.num_params());
        for (double& v : x) v = normal(rng);
        const auto run = detail::minimize_lbfgs(obj, x, opt);
        outcomes[r] = Outcome{run.f, std::move(x)};
        if (run.f <= cfg.accept_tol) {
          std::size_t cur = first_accept.load();
          while (r < cur && !first_accept.compare_exchange_weak(cur, r)) {
          }
        }
      },
      [&](std::size_t r) { return r <= first_accept.load(); });

  const std::size_t last = std::min(first_accept.load(), cfg.restarts - 1);
  std::size_t best = 0;
  for (std::size_t r = 1; r <= last; ++r) {
    if (outcomes[r].f < outcomes[best].f) best = r;
  }
  res.restarts_run = last + 1;
  res.best_objective = outcomes[best].f;
  const auto members = obj.members(outcomes[best].x);
  res.max_pair_residual = max_pair_residual(weights, members);
  if (res.best_objective <= cfg.accept_tol) res.witness.emplace(d, members, "search");
  return res;
}

enum class KStatus { found, not_found_heuristic, excluded_by_bound };

inline std::string to_string(KStatus s) {
  switch (s) {
    case KStatus::found: return "found";
    case KStatus::not_found_heuristic: return "not found (heuristic)";
    case KStatus::excluded_by_bound: return "excluded (proven bound)";
  }
  return "?";
}

struct KOutcome {
  std::size_t k = 0;
  KStatus status = KStatus::not_found_heuristic;
  double best_objective = std::numeric_limits<double>::quiet_NaN();
  double max_pair_residual = std::numeric_limits<double>::quiet_NaN();
  std::size_t restarts_run = 0;
};

struct SearchResult {
  std::vector<KOutcome> per_k;
  std::size_t n_max_estimate = 0;
  std::map<std::size_t, EncodingFamily> witnesses;
  std::uint64_t seed = 0;

  /// The outcome that ended the scan (first failure or exclusion), if any.
  const KOutcome* refusal() const {
    for (const auto& o : per_k) {
      if (o.status != KStatus::found) return &o;
    }
    return nullptr;
  }
};

/// Scans K = d, d+1, … and returns the last K for which a witness was found.
/// K beyond min(max_k, wcsg_bound) is never searched; K = d+1 is skipped as
/// excluded when λ₀ ≥ d/(d+1).
inline SearchResult estimate_nmax(const SchmidtState& s, const SearchConfig& cfg) {
  cfg.validate();
  const std::size_t d = s.dim();
  const std::size_t cap = cfg.max_k == 0 ? d * d : std::min(cfg.max_k, d * d);
  const std::size_t upper = std::min(cap, wcsg_bound(s));

  SearchResult res;
  res.seed = cfg.base_seed;
  for (std::size_t k = d; k <= upper; ++k) {
    KOutcome o;
    o.k = k;
    if (bns_excluded(s, k)) {
      o.status = KStatus::excluded_by_bound;
      res.per_k.push_back(o);
      break;
    }
    FindResult fr = find_family(s, k, cfg);
    o.best_objective = fr.best_objective;
    o.max_pair_residual = fr.max_pair_residual;
    o.restarts_run = fr.restarts_run;
    o.status = fr.found() ? KStatus::found : KStatus::not_found_heuristic;
    res.per_k.push_back(o);
    if (!fr.found()) break;
    res.n_max_estimate = k;
    res.witnesses.emplace(k, std::move(*fr.witness));
  }
  return res;
}

struct RegionCell {
  std::size_t index = 0;
  std::vector<double> lambdas;
  bool mandatory = false;
  double entropy_bits = 0.0;
  std::size_t wcsg_bound = 0;
  std::size_t n_max_estimate = 0;
  std::optional<double> best_objective_at_refusal;
  std::uint64_t seed = 0;
};

struct RegionMap {
  std::size_t d = 3;
  std::size_t resolution = 0;
  std::vector<RegionCell> cells;
};

/// Sample points over the triangle with corners (1/d,…,1/d), (1/2,1/2,0,…) and
/// (1,0,…): centroids of the upward cells of a resolution² triangular
/// subdivision, followed by the fixed targets (uniform, two-level at d/(d+2),
/// and d/(d+2) with the remainder spread evenly). For d > 3 the weights beyond
/// λ₁ share one value.
inline std::vector<std::pair<std::vector<double>, bool>> sweep_points(std::size_t d, std::size_t resolution) {
  if (d < 3) throw std::invalid_argument("sweep_points: d must be at least 3");
  if (resolution < 4) throw std::invalid_argument("sweep_points: resolution must be at least 4");
  const double dd = static_cast<double>(d);
  const double n = static_cast<double>(resolution);
  std::vector<std::pair<std::vector<double>, bool>> pts;
  for (std::size_t i = 0; i < resolution; ++i) {
    for (std::size_t j = 0; i + j < resolution; ++j) {
      const std::size_t k = resolution - 1 - i - j;
      const double w_uniform = (static_cast<double>(i) + 1.0 / 3.0) / n;
      const double w_half = (static_cast<double>(j) + 1.0 / 3.0) / n;
      const double w_pure = (static_cast<double>(k) + 1.0 / 3.0) / n;
      std::vector<double> l(d, w_uniform / dd);
      l[0] += 0.5 * w_half + w_pure;
      l[1] += 0.5 * w_half;
      pts.emplace_back(std::move(l), false);
    }
  }
  const double target = dd / (dd + 2.0);
  pts.emplace_back(std::vector<double>(d, 1.0 / dd), true);
  std::vector<double> two(d, 0.0);
  two[0] = target;
  two[1] = 1.0 - target;
  pts.emplace_back(std::move(two), true);
  std::vector<double> spread(d, (1.0 - target) / (dd - 1.0));
  spread[0] = target;
  pts.emplace_back(std::move(spread), true);
  return pts;
}

/// Estimates N_max per sample point. Cell i uses seed base_seed ⊕ i; cells run
/// independently and the map is ordered by cell index.
inline RegionMap region_sweep(std::size_t resolution, const SearchConfig& cfg, std::size_t d = 3) {
  cfg.validate();
  const auto pts = sweep_points(d, resolution);
  RegionMap map;
  map.d = d;
  map.resolution = resolution;
  map.cells.resize(pts.size());

  SearchConfig inner = cfg;
  inner.threads = 1;
  detail::parallel_for(pts.size(), cfg.threads, [&](std::size_t i) {
    const SchmidtState s = make_state(d, pts[i].first);
    SearchConfig c = inner;
    c.base_seed = cfg.base_seed ^ static_cast<std::uint64_t>(i);
    const SearchResult r = estimate_nmax(s, c);

    RegionCell cell;
    cell.index = i;
    cell.lambdas.assign(s.lambdas().begin(), s.lambdas().end());
    cell.mandatory = pts[i].second;
    cell.entropy_bits = entropy_bits(s);
    cell.wcsg_bound = wcsg_bound(s);
    cell.n_max_estimate = r.n_max_estimate;
    if (const KOutcome* ref = r.refusal(); ref && ref->status == KStatus::not_found_heuristic) {
      cell.best_objective_at_refusal = ref->best_objective;
    }
    cell.seed = c.base_seed;
    map.cells[i] = std::move(cell);
  });
  return map;
}

}  // namespace dclab
