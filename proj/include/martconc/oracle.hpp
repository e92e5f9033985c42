#pragma once

/*
 * Brute-force ground truth used to certify the bound implementations.
 *
 * Everything here checks a MOMENT identity or inequality directly:
 *
 *   exact_mgf_kl     E[e^{n kl(S_n/n || b)}] for S_n ~ Binomial(n, b), summed
 *                    outcome by outcome in log space. The sum is provably
 *                    independent of b and at most n+1; the implementation
 *                    keeps the b-dependent factors explicit (no algebraic
 *                    cancellation) so both facts emerge numerically.
 *   bernoulli_extreme_expectation
 *                    E f(X_1..X_n) for independent Bernoulli(b_i) by full
 *                    2^n enumeration (n <= 20). For convex f this dominates
 *                    E f over every process whose conditional means match
 *                    b_i while staying in [0,1], which is what
 *                    comparison_check verifies by Monte Carlo.
 *   hoeffding_mgf_check / bernstein_mgf_check
 *                    Monte Carlo estimates of the respective supermartingale
 *                    MGFs against their certified ceilings (e^{lam^2 W / 8}
 *                    and 1), with standard errors.
 *   scalar_inequality_checks
 *                    dense-grid verification of e^x <= 1 + x + (e-2) x^2 on
 *                    x <= 1 (tight at x = 1) and 1 + x <= e^x.
 *   markov_check     empirical quantile sanity for Markov's inequality on
 *                    the e^{n kl} statistic with its exactly known mean.
 */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "core_scalar.hpp"
#include "individual_bounds.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "simulation.hpp"

namespace martconc {

inline constexpr std::size_t kExactMgfMaxN = 2000;

namespace detail {

/* lgamma(k + 1) for k = 0..kExactMgfMaxN, built once. */
inline const std::vector<double>& log_factorials() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kExactMgfMaxN + 1);
    for (std::size_t k = 0; k <= kExactMgfMaxN; ++k) {
      t[k] = std::lgamma(double(k) + 1.0);
    }
    return t;
  }();
  return table;
}

}  // namespace detail

/*
 * E[e^{n kl(S_n/n || b)}] summed exactly over the binomial outcomes:
 * term_k = C(n,k) b^k (1-b)^{n-k} e^{n kl(k/n, b)}, accumulated with
 * compensation after a max-shift in log space. Degenerate b returns 1
 * (the statistic is then almost surely 0).
 */
inline double exact_mgf_kl(std::size_t n, double b) {
  detail::require(n >= 1 && n <= kExactMgfMaxN,
                  "exact_mgf_kl supports 1 <= n <= 2000");
  detail::require(detail::is_prob(b), "b must lie in [0, 1]");
  if (b == 0.0 || b == 1.0) return 1.0;
  const auto& lf = detail::log_factorials();
  const double lb = std::log(b);
  const double l1b = std::log1p(-b);
  const double dn = double(n);
  std::vector<double> lt(n + 1);
  double top = -kInf;
  for (std::size_t k = 0; k <= n; ++k) {
    const double l_choose = lf[n] - lf[k] - lf[n - k];
    const double log_weight = l_choose + double(k) * lb + double(n - k) * l1b;
    lt[k] = log_weight + dn * detail::bernoulli_kl_raw(double(k) / dn, b);
    top = std::max(top, lt[k]);
  }
  detail::KahanSum acc;
  for (std::size_t k = 0; k <= n; ++k) acc.add(std::exp(lt[k] - top));
  return std::exp(top) * acc.value();
}

/* A named convex function of a [0,1]^n outcome vector. */
struct ConvexTestFunction {
  std::string name;
  std::function<double(const std::vector<double>&)> f;
};

inline ConvexTestFunction ctf_constant(double c) {
  return {"constant", [c](const std::vector<double>&) { return c; }};
}

inline ConvexTestFunction ctf_linear() {
  return {"linear", [](const std::vector<double>& x) {
            double s = 0.0;
            for (double v : x) s += v;
            return s;
          }};
}

/* x -> e^{n kl(mean(x) || b)}, the drift-bound MGF statistic. */
inline ConvexTestFunction ctf_exp_n_kl(double b) {
  return {"exp_n_kl", [b](const std::vector<double>& x) {
            double s = 0.0;
            for (double v : x) s += v;
            const double n = double(x.size());
            return std::exp(n * detail::bernoulli_kl_raw(s / n, b));
          }};
}

inline ConvexTestFunction ctf_max_coordinate() {
  return {"max_coordinate", [](const std::vector<double>& x) {
            double m = 0.0;
            for (double v : x) m = std::max(m, v);
            return m;
          }};
}

/* x -> (sum x_i - center)^2, centered at the process mean. */
inline ConvexTestFunction ctf_squared_deviation(double center) {
  return {"squared_deviation_of_sum", [center](const std::vector<double>& x) {
            double s = 0.0;
            for (double v : x) s += v;
            const double d = s - center;
            return d * d;
          }};
}

/* x -> x^T (G^T G) x for a seeded n x n matrix G with entries in [-1, 1]. */
inline ConvexTestFunction ctf_psd_quadratic(std::size_t n,
                                            std::uint64_t seed) {
  RandomStream rs(seed, 0);
  auto g = std::make_shared<std::vector<double>>(n * n);
  for (double& v : *g) v = rs.uniform(-1.0, 1.0);
  return {"psd_quadratic", [n, g](const std::vector<double>& x) {
            double q = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
              double row = 0.0;
              for (std::size_t cidx = 0; cidx < n; ++cidx) {
                row += (*g)[r * n + cidx] * x[cidx];
              }
              q += row * row;  // |G x|^2 = x^T G^T G x
            }
            return q;
          }};
}

/*
 * E f(X_1..X_n) for independent X_i ~ Bernoulli(b_i), by exhaustive
 * enumeration of the 2^n outcomes (n <= 20).
 */
inline double bernoulli_extreme_expectation(const ConvexTestFunction& fn,
                                            const std::vector<double>& biases) {
  const std::size_t n = biases.size();
  detail::require(n >= 1 && n <= 20,
                  "extreme expectation enumerates at most 2^20 outcomes");
  for (double b : biases) {
    detail::require(detail::is_prob(b), "biases must lie in [0, 1]");
  }
  std::vector<double> x(n);
  detail::KahanSum acc;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    double w = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool one = (mask >> i) & 1u;
      x[i] = one ? 1.0 : 0.0;
      w *= one ? biases[i] : 1.0 - biases[i];
    }
    if (w > 0.0) acc.add(w * fn.f(x));
  }
  return acc.value();
}

struct ComparisonResult {
  std::string function_name;
  double lhs = 0.0;  // Monte Carlo E f over the dependent process
  double se = 0.0;
  double rhs = 0.0;  // exact E f over independent Bernoulli extremes
  bool pass = false;  // lhs <= rhs + 4 se
};

/*
 * Monte Carlo check that the Bernoulli extremes dominate a dependent
 * [0,1]-valued process with the same conditional means: estimates
 * E f(X_1..X_n) over mc_samples paths of the scenario and compares with the
 * enumerated rhs at biases (b, ..., b). Scenario must be iid_bernoulli or
 * dependent_bounded with n <= 20.
 */
inline ComparisonResult comparison_check(const ConvexTestFunction& fn,
                                         const ScenarioSpec& spec,
                                         std::size_t mc_samples,
                                         std::uint64_t master_seed) {
  spec.validate();
  detail::require(spec.kind == ScenarioKind::iid_bernoulli ||
                      spec.kind == ScenarioKind::dependent_bounded,
                  "comparison_check needs a [0,1]-valued scalar scenario");
  detail::require(spec.n <= 20, "comparison_check enumerates 2^n outcomes");
  detail::require(mc_samples >= 2, "comparison_check needs samples");
  const std::size_t chunk = 8192;
  const std::size_t num_chunks = (mc_samples + chunk - 1) / chunk;
  struct Partial {
    detail::KahanSum sum, sumsq;
  };
  const double a_max = std::min(spec.b, 1.0 - spec.b);
  auto partials = detail::run_chunks<Partial>(num_chunks, [&](std::size_t ci) {
    Partial p;
    RandomStream rs(master_seed, ci);
    std::vector<double> x(spec.n);
    const std::size_t lo = ci * chunk;
    const std::size_t hi = std::min(lo + chunk, mc_samples);
    for (std::size_t s = lo; s < hi; ++s) {
      if (spec.kind == ScenarioKind::iid_bernoulli) {
        for (std::size_t i = 0; i < spec.n; ++i) {
          x[i] = rs.bernoulli(spec.b) ? 1.0 : 0.0;
        }
      } else {
        bool prev_above = false;
        for (std::size_t i = 0; i < spec.n; ++i) {
          const double a = detail::dependent_amplitude(a_max, spec.dependence,
                                                       prev_above, i);
          x[i] = spec.b + (rs.bernoulli(0.5) ? a : -a);
          prev_above = x[i] > spec.b;
        }
      }
      const double v = fn.f(x);
      p.sum.add(v);
      p.sumsq.add(v * v);
    }
    return p;
  });
  detail::KahanSum sum, sumsq;
  for (const auto& p : partials) {
    sum.add(p.sum.value());
    sumsq.add(p.sumsq.value());
  }
  const double m = double(mc_samples);
  ComparisonResult r;
  r.function_name = fn.name;
  r.lhs = sum.value() / m;
  const double var = std::max(0.0, sumsq.value() / m - r.lhs * r.lhs);
  r.se = std::sqrt(var / m);
  r.rhs = bernoulli_extreme_expectation(
      fn, std::vector<double>(spec.n, spec.b));
  r.pass = r.lhs <= r.rhs + 4.0 * r.se;
  return r;
}

struct MgfCheckResult {
  double log_estimate = 0.0;
  double log_bound = 0.0;
  double rel_se = 0.0;
  bool pass = false;
};

/*
 * Hoeffding-Azuma supermartingale check: for mean-zero two-point increments
 * pinned at the range endpoints (the worst case), estimates
 * E e^{lam M_n} and requires it below e^{lam^2 sum w_i^2 / 8} within four
 * relative standard errors. All accumulation happens in log space.
 */
inline MgfCheckResult hoeffding_mgf_check(const RangeSeq& ranges, double lam,
                                          std::size_t mc_samples,
                                          std::uint64_t master_seed) {
  detail::require(lam >= 0.0 && std::isfinite(lam),
                  "lambda must be finite and nonnegative");
  detail::require(mc_samples >= 2, "mgf check needs samples");
  const std::size_t n = ranges.size();
  const std::size_t chunk = 8192;
  const std::size_t num_chunks = (mc_samples + chunk - 1) / chunk;
  struct Partial {
    double l1 = -kInf;  // ln sum e^{s_j}
    double l2 = -kInf;  // ln sum e^{2 s_j}
  };
  auto lse_pair = [](double a, double b) {
    if (std::isinf(a) && a < 0.0) return b;
    if (std::isinf(b) && b < 0.0) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
  };
  auto partials = detail::run_chunks<Partial>(num_chunks, [&](std::size_t ci) {
    Partial p;
    RandomStream rs(master_seed, ci);
    const std::size_t lo = ci * chunk;
    const std::size_t hi = std::min(lo + chunk, mc_samples);
    for (std::size_t s = lo; s < hi; ++s) {
      double mart = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double a = ranges.alpha(i), b = ranges.beta(i);
        const double p_hi = -a / (b - a);
        mart += rs.bernoulli(p_hi) ? b : a;
      }
      const double sj = lam * mart;
      p.l1 = lse_pair(p.l1, sj);
      p.l2 = lse_pair(p.l2, 2.0 * sj);
    }
    return p;
  });
  double l1 = -kInf, l2 = -kInf;
  for (const auto& p : partials) {
    l1 = lse_pair(l1, p.l1);
    l2 = lse_pair(l2, p.l2);
  }
  const double ls = std::log(double(mc_samples));
  MgfCheckResult r;
  r.log_estimate = l1 - ls;
  r.log_bound = lam * lam * ranges.total_width_sq() / 8.0;
  r.rel_se = std::sqrt(std::max(0.0, std::expm1(l2 - 2.0 * l1 + ls)) /
                       double(mc_samples));
  r.pass = r.log_estimate <= r.log_bound + std::log1p(4.0 * r.rel_se);
  return r;
}

/*
 * Bernstein supermartingale check: estimates
 * E e^{lam M_n(h) - (e-2) lam^2 V_n(h)} per hypothesis over the given
 * scenario (mds_bounded or iw_sampling) and requires the worst hypothesis
 * below 1 within four standard errors. Needs lam <= 1/K.
 */
inline MgfCheckResult bernstein_mgf_check(const ScenarioSpec& spec, double lam,
                                          std::size_t mc_samples,
                                          std::uint64_t master_seed) {
  spec.validate();
  detail::require(spec.kind == ScenarioKind::mds_bounded ||
                      spec.kind == ScenarioKind::iw_sampling,
                  "bernstein_mgf_check runs on centered scenarios");
  detail::require(mc_samples >= 2, "mgf check needs samples");
  const std::size_t H =
      spec.kind == ScenarioKind::iw_sampling ? spec.num_arms : 1;
  {
    MartingaleTrace probe = simulate_trial(spec, master_seed, 0);
    detail::require(lam > 0.0 && lam <= 1.0 / probe.k_bound,
                    "lambda must lie in (0, 1/K]");
  }
  const std::size_t chunk = 4096;
  const std::size_t num_chunks = (mc_samples + chunk - 1) / chunk;
  struct Partial {
    std::vector<detail::KahanSum> sum, sumsq;
  };
  auto partials = detail::run_chunks<Partial>(num_chunks, [&](std::size_t ci) {
    Partial p;
    p.sum.resize(H);
    p.sumsq.resize(H);
    const std::size_t lo = ci * chunk;
    const std::size_t hi = std::min(lo + chunk, mc_samples);
    for (std::size_t s = lo; s < hi; ++s) {
      const MartingaleTrace t = simulate_trial(spec, master_seed, s);
      for (std::size_t h = 0; h < H; ++h) {
        const double u = std::exp(lam * t.final_mart(h) -
                                  kEMinusTwo * lam * lam * t.final_var(h));
        p.sum[h].add(u);
        p.sumsq[h].add(u * u);
      }
    }
    return p;
  });
  MgfCheckResult r;
  r.log_bound = 0.0;
  double worst_margin = -kInf;
  const double m = double(mc_samples);
  for (std::size_t h = 0; h < H; ++h) {
    detail::KahanSum sum, sumsq;
    for (const auto& p : partials) {
      sum.add(p.sum[h].value());
      sumsq.add(p.sumsq[h].value());
    }
    const double est = sum.value() / m;
    const double var = std::max(0.0, sumsq.value() / m - est * est);
    const double se = std::sqrt(var / m);
    const double margin = est - 1.0 - 4.0 * se;
    if (margin > worst_margin) {
      worst_margin = margin;
      r.log_estimate = std::log(est);
      r.rel_se = est > 0.0 ? se / est : 0.0;
      r.pass = est <= 1.0 + 4.0 * se;
    }
  }
  return r;
}

struct ScalarChecksResult {
  double max_violation_quad = 0.0;  // max of e^x - (1 + x + (e-2) x^2), x <= 1
  double max_violation_lin = 0.0;   // max of (1 + x) - e^x
  double quad_slack_at_one = 0.0;   // tightness witness at x = 1
  std::size_t violations = 0;       // grid points beyond 1e-12
  bool pass = false;
};

/* Dense-grid verification of the two scalar facts behind the Bernstein
 * family: e^x <= 1 + x + (e-2) x^2 for x <= 1 and 1 + x <= e^x. */
inline ScalarChecksResult scalar_inequality_checks(double step = 1e-4) {
  detail::require(step > 0.0, "grid step must be positive");
  ScalarChecksResult r;
  r.max_violation_quad = -kInf;
  r.max_violation_lin = -kInf;
  const long long quad_steps = (long long)std::llround((1.0 + 50.0) / step);
  for (long long k = 0; k <= quad_steps; ++k) {
    const double x = -50.0 + double(k) * step;
    const double viol = std::exp(x) - (1.0 + x + kEMinusTwo * x * x);
    r.max_violation_quad = std::max(r.max_violation_quad, viol);
    if (viol > 1e-12) ++r.violations;
  }
  const long long lin_steps = (long long)std::llround(100.0 / step);
  for (long long k = 0; k <= lin_steps; ++k) {
    const double x = -50.0 + double(k) * step;
    const double viol = (1.0 + x) - std::exp(x);
    r.max_violation_lin = std::max(r.max_violation_lin, viol);
    if (viol > 1e-12) ++r.violations;
  }
  r.quad_slack_at_one = (1.0 + 1.0 + kEMinusTwo) - std::exp(1.0);
  r.pass = r.violations == 0;
  return r;
}

struct MarkovCheckResult {
  double threshold = 0.0;  // E[X] / delta with the exactly known mean
  double rate = 0.0;
  double band = 0.0;
  bool pass = false;
};

/* P(X > E[X]/delta) <= delta for X = e^{n kl(S_n/n || b)}, with E[X] taken
 * from exact_mgf_kl and the rate measured over iid trials. */
inline MarkovCheckResult markov_check(std::size_t n, double b, double delta,
                                      std::size_t trials,
                                      std::uint64_t master_seed) {
  detail::require_delta(delta);
  detail::require(trials >= 1, "markov check needs trials");
  const double mean = exact_mgf_kl(n, b);
  MarkovCheckResult r;
  r.threshold = mean / delta;
  std::size_t count = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    RandomStream rs(master_seed, t);
    std::size_t s = 0;
    for (std::size_t i = 0; i < n; ++i) s += rs.bernoulli(b) ? 1 : 0;
    const double x =
        std::exp(double(n) * detail::bernoulli_kl_raw(double(s) / double(n), b));
    if (x > r.threshold) ++count;
  }
  r.rate = double(count) / double(trials);
  r.band = delta + 3.0 * std::sqrt(delta * (1.0 - delta) / double(trials));
  r.pass = r.rate <= r.band;
  return r;
}

}  // namespace martconc
