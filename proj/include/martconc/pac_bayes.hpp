#pragma once

/*
 * Weighted-family bounds: control a posterior-weighted average of many
 * martingales simultaneously for every posterior rho at once.
 *
 * Everything rests on the change-of-measure inequality
 *
 *     <phi, rho>  <=  KL(rho || pi) + ln <e^phi, pi>,
 *
 * with equality at phi = ln(rho/pi). Combining it with the per-hypothesis
 * moment bounds of individual_bounds.hpp gives, uniformly over rho:
 *
 *   pb_kl          kl(<Sbar_n/n, rho> || <b, rho>)
 *                      <= (KL(rho||pi) + ln((n+1)/delta)) / n
 *   pb_ha          <Mbar_n, rho> <= (KL + ln(2/delta))/lam + lam/8 sum w_i^2
 *   pb_bernstein   <Mbar_n, rho> <= (KL + ln(2/delta))/lam + lam (e-2) <V, rho>
 *
 * plus adaptive versions that tune lam per rho from a fixed grid, paying a
 * union budget chosen in advance. KL(rho || pi) = +inf propagates to an
 * infinite radius, never an error.
 */

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "core_scalar.hpp"
#include "individual_bounds.hpp"

namespace martconc {

/*
 * Final-time statistics of a family of martingales driven by one shared
 * filtration: per-hypothesis sums sbar of a [0,1]-valued field (for pb_kl),
 * martingale values mbar, cumulative conditional variances vbar, plus the
 * shared per-round ranges needed by the Hoeffding-Azuma forms. Vectors a
 * given operation does not need may be left empty.
 */
class HypothesisSummary {
 public:
  HypothesisSummary(std::size_t n, double k_bound, std::vector<double> sbar,
                    std::vector<double> mbar, std::vector<double> vbar,
                    std::optional<RangeSeq> ranges = std::nullopt)
      : n_(n),
        k_bound_(k_bound),
        sbar_(std::move(sbar)),
        mbar_(std::move(mbar)),
        vbar_(std::move(vbar)),
        ranges_(std::move(ranges)) {
    detail::require(n_ >= 1, "summary needs n >= 1");
    detail::require(k_bound_ > 0.0 && std::isfinite(k_bound_),
                    "summary needs a positive finite increment bound K");
    std::size_t m = 0;
    for (const auto* v : {&sbar_, &mbar_, &vbar_}) {
      if (!v->empty()) {
        detail::require(m == 0 || v->size() == m,
                        "per-hypothesis vectors must share one length");
        m = v->size();
      }
    }
    detail::require(m >= 1, "summary needs at least one hypothesis");
    m_ = m;
    for (double s : sbar_) {
      detail::require(s >= 0.0 && s <= double(n_),
                      "sums of a [0,1] field must lie in [0, n]");
    }
    const double vcap = k_bound_ * k_bound_ * double(n_) * (1.0 + 1e-12);
    for (double v : vbar_) {
      detail::require(v >= 0.0 && v <= vcap,
                      "cumulative variances must lie in [0, K^2 n]");
    }
    if (ranges_) {
      detail::require(ranges_->size() == n_,
                      "range sequence must have one range per round");
    }
  }

  std::size_t n() const { return n_; }
  double k_bound() const { return k_bound_; }
  std::size_t num_hypotheses() const { return m_; }
  const std::vector<double>& sbar() const { return sbar_; }
  const std::vector<double>& mbar() const { return mbar_; }
  const std::vector<double>& vbar() const { return vbar_; }
  const std::optional<RangeSeq>& ranges() const { return ranges_; }

 private:
  std::size_t n_;
  double k_bound_;
  std::vector<double> sbar_, mbar_, vbar_;
  std::optional<RangeSeq> ranges_;
  std::size_t m_ = 0;
};

struct ChangeOfMeasureResult {
  double lhs = 0.0;      // <phi, rho>
  double kl_term = 0.0;  // KL(rho || pi)
  double log_mgf = 0.0;  // ln <e^phi, pi>
  double rhs = 0.0;      // kl_term + log_mgf
};

/*
 * Evaluates both sides of the change-of-measure inequality for an arbitrary
 * per-hypothesis function phi. Atoms where rho (resp. pi) is zero contribute
 * nothing to the lhs (resp. mgf), so phi = ln(rho/pi) with zero atoms is
 * legal; the mgf is computed by log-sum-exp and never overflows.
 */
inline ChangeOfMeasureResult change_of_measure_gap(
    const std::vector<double>& phi, const DiscreteDistribution& rho,
    const DiscreteDistribution& pi) {
  detail::require(rho.size() == pi.size() && phi.size() == rho.size(),
                  "phi, rho, pi must share one length");
  ChangeOfMeasureResult r;
  r.kl_term = discrete_kl(rho, pi);
  for (std::size_t h = 0; h < phi.size(); ++h) {
    if (rho[h] > 0.0) r.lhs += rho[h] * phi[h];
  }
  double top = -kInf;
  for (std::size_t h = 0; h < phi.size(); ++h) {
    if (pi[h] > 0.0) top = std::max(top, std::log(pi[h]) + phi[h]);
  }
  if (std::isinf(top) && top > 0.0) {
    r.log_mgf = kInf;
  } else {
    double acc = 0.0;
    for (std::size_t h = 0; h < phi.size(); ++h) {
      if (pi[h] > 0.0) acc += std::exp(std::log(pi[h]) + phi[h] - top);
    }
    r.log_mgf = top + std::log(acc);
  }
  r.rhs = r.kl_term + r.log_mgf;
  return r;
}

/* One result shape for every weighted-family bound; fields a given bound
 * does not produce stay disengaged. */
struct PacBayesResult {
  double radius = 0.0;
  double kl_term = 0.0;
  double delta = 0.0;
  std::optional<double> mhat;            // <sbar/n, rho> (pb_kl)
  std::optional<double> lo, hi;          // inverted interval (pb_kl)
  std::optional<double> pinsker;         // sqrt(radius/2) (pb_kl)
  std::optional<double> lambda;          // lambda actually charged
  std::optional<std::size_t> nu;         // union budget (bernstein adaptive)
  std::optional<BernsteinBranch> branch;  // bernstein adaptive
  std::optional<double> condition_lhs;   // bernstein adaptive
  std::optional<std::size_t> index;      // grid index (ha adaptive)
  std::optional<double> delta_used;      // delta_i charged (ha adaptive)
  std::optional<double> epsilon_rho;     // ha adaptive diagnostic, KL > 0 only
  std::optional<double> closed_form;     // ha adaptive diagnostic, KL > 0 only
  std::optional<double> v_used;          // weighted variance charged
};

/*
 * kl-form bound: with probability >= 1 - delta, simultaneously for all rho,
 * kl(<Sbar_n/n, rho> || <b, rho>) <= (KL(rho||pi) + ln((n+1)/delta)) / n.
 * The returned interval is the level set around mhat; its Pinsker relaxation
 * has radius sqrt(radius/2). The level set is one interval, so no extra
 * union factor is paid for two-sidedness.
 */
inline PacBayesResult pb_kl_bound(const HypothesisSummary& s,
                                  const DiscreteDistribution& rho,
                                  const DiscreteDistribution& pi, double delta,
                                  double tol = 1e-12) {
  detail::require_delta(delta);
  detail::require(!s.sbar().empty(), "pb_kl_bound needs per-hypothesis sums");
  detail::require(rho.size() == s.num_hypotheses() && pi.size() == rho.size(),
                  "rho and pi must weight every hypothesis");
  PacBayesResult r;
  r.delta = delta;
  r.kl_term = discrete_kl(rho, pi);
  const double n = double(s.n());
  r.radius = (r.kl_term + std::log((n + 1.0) / delta)) / n;
  r.mhat = rho.expect(s.sbar()) / n;
  r.lo = kl_inv_lower(*r.mhat, r.radius, tol);
  r.hi = kl_inv_upper(*r.mhat, r.radius, tol);
  r.pinsker = std::sqrt(0.5 * r.radius);
  return r;
}

/* Fixed-lambda Hoeffding-Azuma form over the family. */
inline PacBayesResult pb_ha_fixed_lambda(const HypothesisSummary& s,
                                         const DiscreteDistribution& rho,
                                         const DiscreteDistribution& pi,
                                         double lam, double delta) {
  detail::require_delta(delta);
  detail::require(s.ranges().has_value(),
                  "Hoeffding-Azuma forms need the per-round ranges");
  detail::require(lam > 0.0 && std::isfinite(lam), "lambda must be positive");
  detail::require(rho.size() == s.num_hypotheses() && pi.size() == rho.size(),
                  "rho and pi must weight every hypothesis");
  PacBayesResult r;
  r.delta = delta;
  r.kl_term = discrete_kl(rho, pi);
  r.lambda = lam;
  const double w = s.ranges()->total_width_sq();
  r.radius = (r.kl_term + std::log(2.0 / delta)) / lam + lam * w / 8.0;
  return r;
}

/*
 * Adaptive Hoeffding-Azuma form: a geometric grid lambda_i = c^i lambda_0
 * with lambda_0 = sqrt(8 ln(2/delta) / W) and per-index budget
 * delta_i = delta 2^-(i+1); the index charged for a posterior is
 * i = floor( ln(KL/ln(2/delta) + 1) / (2 ln c) ), which tracks the oracle
 * lambda within a factor c. The operational radius is exactly the fixed-
 * lambda form at (lambda_i, delta_i). For KL > 0 two diagnostics are filled:
 * epsilon_rho = (ln 2 / (2 ln c)) (1 + ln(KL/ln(2/delta))) and the closed
 * form (1+c) sqrt((KL + ln(2/delta) + epsilon_rho) W / 8).
 */
inline PacBayesResult pb_ha_adaptive(const HypothesisSummary& s,
                                     const DiscreteDistribution& rho,
                                     const DiscreteDistribution& pi,
                                     double delta, double c = 1.1) {
  detail::require_delta(delta);
  detail::require(s.ranges().has_value(),
                  "Hoeffding-Azuma forms need the per-round ranges");
  detail::require(c > 1.0 && std::isfinite(c), "grid ratio c must exceed 1");
  detail::require(rho.size() == s.num_hypotheses() && pi.size() == rho.size(),
                  "rho and pi must weight every hypothesis");
  PacBayesResult r;
  r.delta = delta;
  r.kl_term = discrete_kl(rho, pi);
  if (std::isinf(r.kl_term)) {
    r.radius = kInf;
    return r;
  }
  const double w = s.ranges()->total_width_sq();
  const double lg = std::log(2.0 / delta);
  const double lam0 = std::sqrt(8.0 * lg / w);
  const std::size_t i =
      std::size_t(std::floor(std::log(r.kl_term / lg + 1.0) /
                             (2.0 * std::log(c))));
  const double lam_i = lam0 * std::pow(c, double(i));
  const double delta_i = delta * std::pow(2.0, -double(i) - 1.0);
  r.index = i;
  r.lambda = lam_i;
  r.delta_used = delta_i;
  r.radius = (r.kl_term + std::log(2.0 / delta_i)) / lam_i + lam_i * w / 8.0;
  if (r.kl_term > 0.0) {
    const double eps_rho = (std::log(2.0) / (2.0 * std::log(c))) *
                           (1.0 + std::log(r.kl_term / lg));
    r.epsilon_rho = eps_rho;
    r.closed_form =
        (1.0 + c) * std::sqrt((r.kl_term + lg + eps_rho) * w / 8.0);
  }
  return r;
}

/* Fixed-lambda Bernstein form over the family; lam must lie in (0, 1/K]. */
inline PacBayesResult pb_bernstein_fixed_lambda(const HypothesisSummary& s,
                                                const DiscreteDistribution& rho,
                                                const DiscreteDistribution& pi,
                                                double lam, double delta) {
  detail::require_delta(delta);
  detail::require(!s.vbar().empty(),
                  "Bernstein forms need per-hypothesis variances");
  detail::require(lam > 0.0 && lam <= 1.0 / s.k_bound(),
                  "lambda must lie in (0, 1/K]");
  detail::require(rho.size() == s.num_hypotheses() && pi.size() == rho.size(),
                  "rho and pi must weight every hypothesis");
  PacBayesResult r;
  r.delta = delta;
  r.kl_term = discrete_kl(rho, pi);
  r.lambda = lam;
  r.v_used = rho.expect(s.vbar());
  r.radius =
      (r.kl_term + std::log(2.0 / delta)) / lam + lam * kEMinusTwo * *r.v_used;
  return r;
}

/*
 * Adaptive Bernstein form over the family: same grid, budget and branching
 * as the individual bernstein_adaptive with the KL term added. v_upper, when
 * given, replaces the exact weighted variance <vbar, rho> (it must dominate
 * it for the guarantee to hold; that is the caller's obligation).
 */
inline PacBayesResult pb_bernstein_adaptive(
    const HypothesisSummary& s, const DiscreteDistribution& rho,
    const DiscreteDistribution& pi, double delta, double c = 1.1,
    std::optional<double> v_upper = std::nullopt) {
  detail::require_delta(delta);
  detail::require(v_upper.has_value() || !s.vbar().empty(),
                  "Bernstein forms need a variance (vbar or v_upper)");
  detail::require(rho.size() == s.num_hypotheses() && pi.size() == rho.size(),
                  "rho and pi must weight every hypothesis");
  const double kl_term = discrete_kl(rho, pi);
  const double v = v_upper ? *v_upper : rho.expect(s.vbar());
  const BernsteinAdaptiveResult core = detail::bernstein_adaptive_core(
      kl_term, v, s.k_bound(), s.n(), delta, c);
  PacBayesResult r;
  r.delta = delta;
  r.kl_term = kl_term;
  r.radius = core.radius;
  r.lambda = core.lambda;
  r.nu = core.nu;
  r.branch = core.branch;
  r.condition_lhs = core.condition_lhs;
  r.v_used = v;
  return r;
}

/*
 * Gibbs posterior rho(h) proportional to pi(h) e^{-gamma score(h)}, computed
 * by log-sum-exp so arbitrarily large gamma collapses smoothly onto the
 * minimizing atoms (split by prior weight). gamma = 0 returns the prior.
 */
inline DiscreteDistribution gibbs_posterior(const std::vector<double>& scores,
                                            const DiscreteDistribution& pi,
                                            double gamma) {
  detail::require(scores.size() == pi.size(),
                  "gibbs_posterior needs one score per atom");
  detail::require(gamma >= 0.0 && std::isfinite(gamma),
                  "gamma must be finite and nonnegative");
  for (double v : scores) {
    detail::require(std::isfinite(v), "scores must be finite");
  }
  double top = -kInf;
  for (std::size_t h = 0; h < scores.size(); ++h) {
    if (pi[h] > 0.0) {
      top = std::max(top, std::log(pi[h]) - gamma * scores[h]);
    }
  }
  std::vector<double> w(scores.size(), 0.0);
  double total = 0.0;
  for (std::size_t h = 0; h < scores.size(); ++h) {
    if (pi[h] > 0.0) {
      w[h] = std::exp(std::log(pi[h]) - gamma * scores[h] - top);
      total += w[h];
    }
  }
  for (double& v : w) v /= total;
  return DiscreteDistribution(std::move(w));
}

}  // namespace martconc
