#pragma once

#include <random>
#include <vector>

#include <dclab/dclab.hpp>

namespace dclab::testing {

inline UnitaryMatrix random_unitary(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 2.0);
  std::vector<double> p(d * d);
  for (double& v : p) v = n(rng);
  return unitary_from_params(p, d);
}

inline ComplexMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) m(i, j) = cplx{n(rng), n(rng)};
  }
  return m;
}

inline SchmidtState random_state(std::size_t d, std::mt19937_64& rng) {
  std::exponential_distribution<double> e;
  std::vector<double> w(d);
  double sum = 0.0;
  for (double& v : w) sum += (v = e(rng));
  for (double& v : w) v /= sum;
  return make_state(d, w);
}

/// Random state with λ₀ > 1/2.
inline SchmidtState random_peaked_state(std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.52, 0.95);
  const double l0 = u(rng);
  std::exponential_distribution<double> e;
  std::vector<double> w(d);
  double rest = 0.0;
  for (std::size_t k = 1; k < d; ++k) rest += (w[k] = e(rng));
  for (std::size_t k = 1; k < d; ++k) w[k] *= (1.0 - l0) / rest;
  w[0] = l0;
  return make_state(d, w);
}

/// Worst per-component relative gap between the analytic gradient at a random
/// point and a fourth-order central difference. Components smaller than 1e-3 of
/// the largest are compared against that floor.
inline double fd_gradient_error(const FamilyObjective& obj, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  std::vector<double> x(obj.num_params()), g(x.size());
  for (double& v : x) v = n(rng);
  obj(x, g);
  double gmax = 0.0;
  for (double v : g) gmax = std::max(gmax, std::abs(v));
  const double h = 1e-4;
  auto at = [&](std::size_t i, double step) {
    auto y = x;
    y[i] += step;
    return obj(y, {});
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fd = (8.0 * (at(i, h) - at(i, -h)) - (at(i, 2 * h) - at(i, -2 * h))) / (12.0 * h);
    worst = std::max(worst, std::abs(fd - g[i]) / std::max(std::abs(g[i]), 1e-3 * gmax));
  }
  return worst;
}

}  // namespace dclab::testing
