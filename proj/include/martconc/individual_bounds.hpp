#pragma once

/*
 * High-probability bounds for a single martingale.
 *
 * Three families, each valid simultaneously over the whole time horizon
 * conventions fixed below:
 *
 *   kl drift       P( kl(S_n/n || b) >= ln((n+1)/delta)/n ) <= delta
 *                  for sums S_n of [0,1] variables with conditional mean b;
 *                  inverted numerically into a two-sided interval for b.
 *
 *   Hoeffding-Azuma   P( |M_n| >= sqrt( ln(2/delta)/2 * sum (b_i - a_i)^2 ) )
 *                  <= delta for martingale increments confined to [a_i, b_i].
 *
 *   Bernstein      P( |M_n| >= ln(2/delta)/lam + lam (e-2) V_n ) <= delta
 *                  for any fixed lam in (0, 1/K], |increment| <= K, V_n the
 *                  cumulative conditional variance; plus an adaptive version
 *                  that unions over a geometric lambda grid and pays a
 *                  factor (1+c) over the oracle choice of lambda.
 *
 * All deltas live in (0,1); infinite inputs propagate to infinite radii.
 */

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "core_scalar.hpp"

namespace martconc {

inline constexpr double kEMinusTwo = 0.71828182845904523536;  // e - 2

namespace detail {

inline void require_delta(double delta) {
  require(delta > 0.0 && delta < 1.0,
          "delta must lie in the open interval (0, 1), got " +
              std::to_string(delta));
}

}  // namespace detail

/* Per-round increment ranges [alpha_i, beta_i] with alpha_i <= 0 <= beta_i. */
class RangeSeq {
 public:
  explicit RangeSeq(std::vector<std::pair<double, double>> ranges) {
    detail::require(!ranges.empty(), "range sequence must be nonempty");
    alpha_.reserve(ranges.size());
    beta_.reserve(ranges.size());
    for (const auto& [a, b] : ranges) {
      detail::require(std::isfinite(a) && std::isfinite(b),
                      "range endpoints must be finite");
      detail::require(a <= 0.0 && 0.0 <= b && a < b,
                      "each range must satisfy alpha <= 0 <= beta, alpha < beta");
      alpha_.push_back(a);
      beta_.push_back(b);
    }
  }

  /* n identical symmetric ranges [-h, h]. */
  static RangeSeq symmetric(double half_width, std::size_t n) {
    detail::require(half_width > 0.0 && n >= 1,
                    "symmetric ranges need positive width and n >= 1");
    return RangeSeq(std::vector<std::pair<double, double>>(
        n, {-half_width, half_width}));
  }

  /* One symmetric range per full width w_i (beta - alpha = w_i). */
  static RangeSeq from_widths(const std::vector<double>& widths) {
    std::vector<std::pair<double, double>> r;
    r.reserve(widths.size());
    for (double w : widths) {
      detail::require(w > 0.0 && std::isfinite(w),
                      "range widths must be positive and finite");
      r.push_back({-0.5 * w, 0.5 * w});
    }
    return RangeSeq(std::move(r));
  }

  std::size_t size() const { return alpha_.size(); }
  double alpha(std::size_t i) const { return alpha_[i]; }
  double beta(std::size_t i) const { return beta_[i]; }

  double total_width_sq() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
      const double w = beta_[i] - alpha_[i];
      acc += w * w;
    }
    return acc;
  }

  double max_abs() const {
    double m = 0.0;
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
      m = std::max(m, std::max(-alpha_[i], beta_[i]));
    }
    return m;
  }

 private:
  std::vector<double> alpha_, beta_;
};

/* Two-sided interval for the conditional mean of a [0,1]-valued sum. */
struct DriftBoundResult {
  std::size_t n = 0;
  double delta = 0.0;
  double s_n = 0.0;
  double phat = 0.0;      // S_n / n
  double eps = 0.0;       // ln((n+1)/delta) / n
  double lo = 0.0;        // kl_inv_lower(phat, eps)
  double hi = 1.0;        // kl_inv_upper(phat, eps)
  double pinsker_lo = 0.0;  // clamp(phat - sqrt(eps/2))
  double pinsker_hi = 1.0;  // clamp(phat + sqrt(eps/2))
  double refined_hi = 1.0;  // phat + sqrt(2 phat eps) + 2 eps, NOT clamped
};

/*
 * kl drift bound: with probability >= 1 - delta, every b compatible with the
 * observations satisfies kl(S_n/n || b) < ln((n+1)/delta)/n; the returned
 * interval is that level set. No extra union factor is needed for the two
 * sides: the level set is a single interval.
 */
inline DriftBoundResult kl_drift_bound(double s_n, std::size_t n, double delta,
                                       double tol = 1e-12) {
  detail::require(n >= 1, "n must be at least 1");
  detail::require_delta(delta);
  detail::require(s_n >= 0.0 && s_n <= double(n),
                  "S_n must lie in [0, n] for a [0,1]-valued sum");
  DriftBoundResult r;
  r.n = n;
  r.delta = delta;
  r.s_n = s_n;
  r.phat = s_n / double(n);
  r.eps = std::log((double(n) + 1.0) / delta) / double(n);
  r.lo = kl_inv_lower(r.phat, r.eps, tol);
  r.hi = kl_inv_upper(r.phat, r.eps, tol);
  const double rad = pinsker_radius(r.eps);
  r.pinsker_lo = std::max(0.0, r.phat - rad);
  r.pinsker_hi = std::min(1.0, r.phat + rad);
  r.refined_hi = refined_kl_upper(r.phat, r.eps);
  return r;
}

/* Two-sided Hoeffding-Azuma deviation radius for |M_n|. */
inline double hoeffding_azuma_radius(const RangeSeq& ranges, double delta) {
  detail::require_delta(delta);
  return std::sqrt(0.5 * std::log(2.0 / delta) * ranges.total_width_sq());
}

/*
 * Geometric lambda grid for the adaptive Bernstein bound. Base points
 * lambda_i = c^i (1/K) sqrt(ln(2/delta) / ((e-2) n)) for i = 0..m-1 with
 * m = floor(x) + 1, x = ln(sqrt((e-2) n / ln(2/delta))) / ln(c), then 1/K
 * appended exactly (deduplicated only on exact collision). When
 * (e-2) n <= ln(2/delta) the grid degenerates to the single point {1/K}.
 */
struct LambdaGrid {
  std::vector<double> values;
  std::size_t nu = 0;  // number of grid points = union-bound budget
  double k_bound = 0.0;
  double c = 0.0;
  bool degenerate = false;
};

inline LambdaGrid lambda_grid(double k_bound, std::size_t n, double delta,
                              double c = 1.1) {
  detail::require(k_bound > 0.0 && std::isfinite(k_bound),
                  "K must be positive and finite");
  detail::require(n >= 1, "n must be at least 1");
  detail::require_delta(delta);
  detail::require(c > 1.0 && std::isfinite(c), "grid ratio c must exceed 1");
  LambdaGrid g;
  g.k_bound = k_bound;
  g.c = c;
  const double lg = std::log(2.0 / delta);
  if (kEMinusTwo * double(n) <= lg) {
    g.values = {1.0 / k_bound};
    g.nu = 1;
    g.degenerate = true;
    return g;
  }
  const double lam0 =
      (1.0 / k_bound) * std::sqrt(lg / (kEMinusTwo * double(n)));
  const double x =
      std::log(std::sqrt(kEMinusTwo * double(n) / lg)) / std::log(c);
  const std::size_t m = std::size_t(std::floor(x)) + 1;
  g.values.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    g.values.push_back(lam0 * std::pow(c, double(i)));
  }
  const double cap = 1.0 / k_bound;
  if (g.values.back() != cap) g.values.push_back(cap);
  g.nu = g.values.size();
  return g;
}

/*
 * Fixed-lambda Bernstein radius ln(2/delta)/lam + lam (e-2) V_n (two-sided;
 * pass two_sided = false for a one-sided ln(1/delta) version). The caller
 * owns the constraint lam <= 1/K; only positivity is checkable here.
 */
inline double bernstein_fixed_lambda(double v_n, double lam, double delta,
                                     bool two_sided = true) {
  detail::require(v_n >= 0.0, "cumulative variance must be nonnegative");
  detail::require(lam > 0.0 && std::isfinite(lam), "lambda must be positive");
  detail::require_delta(delta);
  const double lg = std::log((two_sided ? 2.0 : 1.0) / delta);
  return lg / lam + lam * kEMinusTwo * v_n;
}

enum class BernsteinBranch { grid_ok, variance_small };

inline const char* to_string(BernsteinBranch b) {
  return b == BernsteinBranch::grid_ok ? "grid_ok" : "variance_small";
}

struct BernsteinAdaptiveResult {
  double radius = 0.0;
  double lambda = 0.0;        // grid point actually charged
  std::size_t nu = 0;         // union budget
  BernsteinBranch branch = BernsteinBranch::grid_ok;
  double condition_lhs = 0.0;  // sqrt(ln(2 nu/delta) / ((e-2) V))
  double k_bound = 0.0;
  double v_upper = 0.0;
  double delta = 0.0;
  double c = 0.0;
};

namespace detail {

/* Shared core of the individual and weighted-family adaptive Bernstein
 * bounds; kl_term = 0 recovers the individual case. Infinite kl_term gives
 * an infinite radius, never an error. */
inline BernsteinAdaptiveResult bernstein_adaptive_core(
    double kl_term, double v_upper, double k_bound, std::size_t n,
    double delta, double c) {
  require(v_upper >= 0.0, "variance upper bound must be nonnegative");
  const LambdaGrid grid = lambda_grid(k_bound, n, delta, c);
  BernsteinAdaptiveResult r;
  r.nu = grid.nu;
  r.k_bound = k_bound;
  r.v_upper = v_upper;
  r.delta = delta;
  r.c = c;
  const double budget =
      kl_term + std::log(2.0 * double(grid.nu) / delta);  // +inf passes through
  r.condition_lhs =
      v_upper > 0.0 ? std::sqrt(budget / (kEMinusTwo * v_upper)) : kInf;
  if (r.condition_lhs <= 1.0 / k_bound) {
    r.branch = BernsteinBranch::grid_ok;
    r.radius = (1.0 + c) * std::sqrt(kEMinusTwo * v_upper * budget);
    r.lambda = grid.values.front();
    for (double lam : grid.values) {
      if (lam <= r.condition_lhs) r.lambda = lam;
    }
  } else {
    r.branch = BernsteinBranch::variance_small;
    r.radius = 2.0 * k_bound * budget;
    r.lambda = 1.0 / k_bound;
  }
  return r;
}

}  // namespace detail

/*
 * Adaptive two-sided Bernstein bound: pays a union factor nu over the lambda
 * grid and a multiplicative (1+c) over the oracle lambda whenever the
 * variance is large enough for the grid to reach the optimum
 * (sqrt(ln(2 nu/delta)/((e-2) V)) <= 1/K); otherwise charges the variance-
 * small fallback 2K ln(2 nu/delta) at lambda = 1/K. V = 0 falls back.
 */
inline BernsteinAdaptiveResult bernstein_adaptive(double v_upper,
                                                  double k_bound,
                                                  std::size_t n, double delta,
                                                  double c = 1.1) {
  return detail::bernstein_adaptive_core(0.0, v_upper, k_bound, n, delta, c);
}

}  // namespace martconc
