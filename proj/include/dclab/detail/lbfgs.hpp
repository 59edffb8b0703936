#pragma once
// Limited-memory BFGS with Armijo backtracking.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <numeric>
#include <span>
#include <vector>

namespace dclab::detail {

struct LbfgsOptions {
  std::size_t max_iters = 2000;
  std::size_t memory = 12;
  double f_target = 0.0;        // stop once f ≤ f_target
  double grad_tol = 1e-14;      // stop once ‖g‖_∞ ≤ grad_tol
  double stall_rel_tol = 1e-13; // stop when f stops decreasing over `stall_window` iterations
  std::size_t stall_window = 60;
};

struct LbfgsResult {
  double f = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

/// Minimizes `fg(x, grad) -> f` in place. `fg` writes the gradient into `grad`.
template <typename FG>
LbfgsResult minimize_lbfgs(FG&& fg, std::vector<double>& x, const LbfgsOptions& opt) {
  const std::size_t n = x.size();
  std::vector<double> g(n), x_new(n), g_new(n), dir(n), alpha_hist;
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;

  LbfgsResult res;
  double f = fg(std::span<const double>(x), std::span<double>(g));
  ++res.evaluations;
  std::vector<double> f_trail{f};

  auto grad_inf = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
  };

  for (; res.iterations < opt.max_iters; ++res.iterations) {
    if (f <= opt.f_target || grad_inf(g) <= opt.grad_tol) break;

    // Two-loop recursion.
    dir = g;
    alpha_hist.assign(s_hist.size(), 0.0);
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha_hist[i] = rho_hist[i] * dot(s_hist[i], dir);
      for (std::size_t k = 0; k < n; ++k) dir[k] -= alpha_hist[i] * y_hist[i][k];
    }
    if (!s_hist.empty()) {
      const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (double& e : dir) e *= gamma;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * dot(y_hist[i], dir);
      for (std::size_t k = 0; k < n; ++k) dir[k] += s_hist[i][k] * (alpha_hist[i] - beta);
    }
    for (double& e : dir) e = -e;

    double slope = dot(g, dir);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t k = 0; k < n; ++k) dir[k] = -g[k];
      slope = -dot(g, g);
    }

    double step = 1.0;
    if (s_hist.empty()) step = std::min(1.0, 1.0 / std::sqrt(dot(g, g)));

    double f_new = f;
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      for (std::size_t k = 0; k < n; ++k) x_new[k] = x[k] + step * dir[k];
      f_new = fg(std::span<const double>(x_new), std::span<double>(g_new));
      ++res.evaluations;
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    std::vector<double> s(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = x_new[k] - x[k];
      y[k] = g_new[k] - g[k];
    }
    const double sy = dot(s, y);
    if (sy > 1e-16 * std::sqrt(dot(s, s) * dot(y, y))) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > opt.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;

    f_trail.push_back(f);
    if (f_trail.size() > opt.stall_window) {
      const double old = f_trail[f_trail.size() - 1 - opt.stall_window];
      if (old - f <= opt.stall_rel_tol * std::max(old, 1e-300)) {
        ++res.iterations;
        break;
      }
    }
  }
  res.f = f;
  return res;
}

}  // namespace dclab::detail
