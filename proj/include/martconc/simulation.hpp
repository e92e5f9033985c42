#pragma once

/*
 * Scenario generators with exactly known conditional laws, plus Monte Carlo
 * coverage experiments and a deterministic tightness table.
 *
 * Four scenario kinds:
 *
 *   iid_bernoulli      X_i ~ Bernoulli(b), the [0,1] field for drift bounds.
 *   dependent_bounded  X_i = b +- a_i with equal odds, a_i a function of the
 *                      previous step, so the conditional mean is exactly b
 *                      and the conditional variance exactly a_i^2.
 *   mds_bounded        mean-zero two-point increments on {alpha, beta}
 *                      (optionally widened/narrowed by the previous sign).
 *   iw_sampling        importance-weighted reward estimation over H arms:
 *                      each round draws an action from the current sampling
 *                      distribution, then a Bernoulli reward per arm;
 *                      Z_i(h) = R_i 1[A_i = h]/p_i(h) - r(h) is a martingale
 *                      difference with conditional variance r(h)/p_i(h) -
 *                      r(h)^2, and the reward field Y_i(h) doubles as the
 *                      [0,1] field with mean r(h).
 *
 * Every generator draws exclusively from a RandomStream in a pinned order,
 * so traces are reproducible byte for byte across platforms.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core_scalar.hpp"
#include "individual_bounds.hpp"
#include "pac_bayes.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace martconc {

enum class ScenarioKind { iid_bernoulli, dependent_bounded, mds_bounded,
                          iw_sampling };
enum class MdsShape { two_point, past_modulated };

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::iid_bernoulli: return "iid_bernoulli";
    case ScenarioKind::dependent_bounded: return "dependent_bounded";
    case ScenarioKind::mds_bounded: return "mds_bounded";
    case ScenarioKind::iw_sampling: return "iw_sampling";
  }
  return "?";
}

inline const char* to_string(MdsShape s) {
  return s == MdsShape::two_point ? "two_point" : "past_modulated";
}

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::iid_bernoulli;
  std::size_t n = 100;

  // iid_bernoulli / dependent_bounded
  double b = 0.5;
  double dependence = 0.5;  // coupling strength s in [0, 1]

  // mds_bounded
  double alpha = -1.0;
  double beta = 1.0;
  MdsShape shape = MdsShape::two_point;

  // iw_sampling
  std::size_t num_arms = 5;
  double p_min = 0.1;
  bool adaptive = false;
  std::vector<double> rewards;  // empty -> r(h) = (h+1)/(H+1)

  void validate() const {
    detail::require(n >= 1, "scenario needs n >= 1");
    switch (kind) {
      case ScenarioKind::iid_bernoulli:
        detail::require(detail::is_prob(b), "b must lie in [0, 1]");
        break;
      case ScenarioKind::dependent_bounded:
        detail::require(b > 0.0 && b < 1.0,
                        "dependent_bounded needs b strictly inside (0, 1)");
        detail::require(dependence >= 0.0 && dependence <= 1.0,
                        "dependence strength must lie in [0, 1]");
        break;
      case ScenarioKind::mds_bounded:
        detail::require(alpha < 0.0 && beta > 0.0 && std::isfinite(alpha) &&
                            std::isfinite(beta),
                        "mds_bounded needs alpha < 0 < beta");
        break;
      case ScenarioKind::iw_sampling:
        detail::require(num_arms >= 1, "iw_sampling needs at least one arm");
        detail::require(p_min > 0.0 && p_min * double(num_arms) <= 1.0,
                        "p_min must lie in (0, 1/H]");
        detail::require(rewards.empty() || rewards.size() == num_arms,
                        "rewards must list one value per arm");
        for (double r : rewards) {
          detail::require(detail::is_prob(r), "rewards must lie in [0, 1]");
        }
        break;
    }
  }

  std::vector<double> arm_rewards() const {
    if (!rewards.empty()) return rewards;
    std::vector<double> r(num_arms);
    for (std::size_t h = 0; h < num_arms; ++h) {
      r[h] = double(h + 1) / double(num_arms + 1);
    }
    return r;
  }
};

namespace detail {

/* Coupling amplitude of the dependent_bounded chain at round i (0-based):
 * a_0 = a_max/2; afterwards a_i = a_max((1-s)/2 + s(1/4 + u/2)) where u
 * flags whether the previous value sat above b. */
inline double dependent_amplitude(double a_max, double s, bool prev_above,
                                  std::size_t i) {
  if (i == 0) return 0.5 * a_max;
  const double u = prev_above ? 1.0 : 0.0;
  return a_max * ((1.0 - s) * 0.5 + s * (0.25 + 0.5 * u));
}

/* Mean-zero two-point law on {lo, hi}: P(hi) = -lo/(hi - lo). */
struct TwoPointLaw {
  double lo, hi, p_hi;
};

inline TwoPointLaw mds_law(const ScenarioSpec& spec, bool prev_negative,
                           std::size_t i) {
  double lo = spec.alpha, hi = spec.beta;
  if (spec.shape == MdsShape::past_modulated && i > 0 && prev_negative) {
    lo *= 0.5;
    hi *= 0.5;
  }
  return {lo, hi, -lo / (hi - lo)};
}

}  // namespace detail

/*
 * One realized path of a family of martingales (H = 1 for the scalar
 * scenarios). Per-round storage is row-major: index i * H + h.
 * `values` holds the raw field (X_i, Z_i or the centered IW estimates),
 * `running_sum` its partial sums, `running_var` the accumulated exact
 * conditional variances. All per-round increment ranges are constant in i,
 * kept as the single pair [range_lo, range_hi].
 */
struct MartingaleTrace {
  ScenarioSpec spec;
  std::size_t n = 0;
  std::size_t num_h = 1;
  double k_bound = 1.0;
  double range_lo = -1.0, range_hi = 1.0;
  std::vector<double> means;  // per-h mean of the [0,1] field (empty for mds)
  std::vector<double> values, running_sum, running_var;
  std::vector<double> reward_field;   // iw only: Y_i(h) in {0, 1}
  std::vector<std::size_t> actions;   // iw only
  std::vector<double> sampling_probs;  // iw only, row-major
  std::vector<double> iw_estimates;   // iw only: final running reward estimates

  double value(std::size_t i, std::size_t h = 0) const {
    return values[i * num_h + h];
  }
  double final_sum(std::size_t h = 0) const {
    return running_sum[(n - 1) * num_h + h];
  }
  double final_var(std::size_t h = 0) const {
    return running_var[(n - 1) * num_h + h];
  }

  /* Final martingale value: the centered sum. */
  double final_mart(std::size_t h = 0) const {
    if (spec.kind == ScenarioKind::iid_bernoulli ||
        spec.kind == ScenarioKind::dependent_bounded) {
      return final_sum(h) - double(n) * means[h];
    }
    return final_sum(h);  // mds and iw values are centered already
  }

  /* Per-hypothesis sums of the [0,1] field (reward field for iw). */
  std::vector<double> sbar() const {
    std::vector<double> out(num_h, 0.0);
    if (spec.kind == ScenarioKind::iw_sampling) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t h = 0; h < num_h; ++h) {
          out[h] += reward_field[i * num_h + h];
        }
      }
    } else {
      for (std::size_t h = 0; h < num_h; ++h) out[h] = final_sum(h);
    }
    return out;
  }

  std::vector<double> mbar() const {
    std::vector<double> out(num_h);
    for (std::size_t h = 0; h < num_h; ++h) out[h] = final_mart(h);
    return out;
  }

  std::vector<double> vbar() const {
    std::vector<double> out(num_h);
    for (std::size_t h = 0; h < num_h; ++h) out[h] = final_var(h);
    return out;
  }

  RangeSeq ranges() const {
    return RangeSeq(std::vector<std::pair<double, double>>(
        n, {range_lo, range_hi}));
  }

  HypothesisSummary summary() const {
    const bool has_field = spec.kind != ScenarioKind::mds_bounded;
    return HypothesisSummary(n, k_bound,
                             has_field ? sbar() : std::vector<double>{},
                             mbar(), vbar(), ranges());
  }
};

/* One path of a scalar scenario (iid, dependent or mds). */
inline MartingaleTrace simulate_sequence(const ScenarioSpec& spec,
                                         RandomStream& rs) {
  spec.validate();
  detail::require(spec.kind != ScenarioKind::iw_sampling,
                  "simulate_sequence handles the scalar scenarios only");
  MartingaleTrace t;
  t.spec = spec;
  t.n = spec.n;
  t.num_h = 1;
  t.values.resize(spec.n);
  t.running_sum.resize(spec.n);
  t.running_var.resize(spec.n);
  double sum = 0.0, var = 0.0;
  switch (spec.kind) {
    case ScenarioKind::iid_bernoulli: {
      t.means = {spec.b};
      t.range_lo = -spec.b;
      t.range_hi = 1.0 - spec.b;
      t.k_bound = std::max(spec.b, 1.0 - spec.b);
      for (std::size_t i = 0; i < spec.n; ++i) {
        const double x = rs.bernoulli(spec.b) ? 1.0 : 0.0;
        sum += x;
        var += spec.b * (1.0 - spec.b);
        t.values[i] = x;
        t.running_sum[i] = sum;
        t.running_var[i] = var;
      }
      if (t.range_lo == 0.0) t.range_lo = -1.0;  // keep alpha < 0 <= beta
      if (t.range_hi == 0.0) t.range_hi = 1.0;
      break;
    }
    case ScenarioKind::dependent_bounded: {
      const double a_max = std::min(spec.b, 1.0 - spec.b);
      t.means = {spec.b};
      t.range_lo = -a_max;
      t.range_hi = a_max;
      t.k_bound = a_max;
      bool prev_above = false;
      for (std::size_t i = 0; i < spec.n; ++i) {
        const double a =
            detail::dependent_amplitude(a_max, spec.dependence, prev_above, i);
        const bool up = rs.bernoulli(0.5);
        const double x = spec.b + (up ? a : -a);
        prev_above = x > spec.b;
        sum += x;
        var += a * a;
        t.values[i] = x;
        t.running_sum[i] = sum;
        t.running_var[i] = var;
      }
      break;
    }
    case ScenarioKind::mds_bounded: {
      t.range_lo = spec.alpha;
      t.range_hi = spec.beta;
      t.k_bound = std::max(-spec.alpha, spec.beta);
      bool prev_negative = false;
      for (std::size_t i = 0; i < spec.n; ++i) {
        const auto law = detail::mds_law(spec, prev_negative, i);
        const double z = rs.bernoulli(law.p_hi) ? law.hi : law.lo;
        prev_negative = z < 0.0;
        sum += z;
        var += -law.lo * law.hi;  // E[Z^2] of a mean-zero two-point law
        t.values[i] = z;
        t.running_sum[i] = sum;
        t.running_var[i] = var;
      }
      break;
    }
    default:
      break;
  }
  return t;
}

/*
 * One path of the importance-weighted scenario. Per round, in pinned draw
 * order: the action from the current sampling distribution first, then one
 * Bernoulli reward per arm in ascending arm order. The sampling distribution
 * is uniform when non-adaptive; otherwise greedy-with-floor,
 * p_i(h) = p_min + (1 - H p_min) rhat(h)/sum(rhat), uniform while the
 * running estimates are all zero.
 */
inline MartingaleTrace simulate_field(const ScenarioSpec& spec,
                                      RandomStream& rs) {
  spec.validate();
  detail::require(spec.kind == ScenarioKind::iw_sampling,
                  "simulate_field handles the iw_sampling scenario");
  const std::size_t H = spec.num_arms;
  const std::vector<double> r = spec.arm_rewards();
  MartingaleTrace t;
  t.spec = spec;
  t.n = spec.n;
  t.num_h = H;
  t.means = r;
  t.range_lo = -1.0;
  t.range_hi = 1.0 / spec.p_min;
  t.k_bound = 1.0 / spec.p_min + 1.0;
  t.values.resize(spec.n * H);
  t.running_sum.resize(spec.n * H);
  t.running_var.resize(spec.n * H);
  t.reward_field.resize(spec.n * H);
  t.actions.resize(spec.n);
  t.sampling_probs.resize(spec.n * H);
  std::vector<double> sum(H, 0.0), var(H, 0.0), iw_total(H, 0.0), p(H);
  for (std::size_t i = 0; i < spec.n; ++i) {
    double est_total = 0.0;
    for (double e : iw_total) est_total += e;
    if (!spec.adaptive || est_total <= 0.0) {
      std::fill(p.begin(), p.end(), 1.0 / double(H));
    } else {
      for (std::size_t h = 0; h < H; ++h) {
        p[h] = spec.p_min +
               (1.0 - double(H) * spec.p_min) * iw_total[h] / est_total;
      }
    }
    const std::size_t a = rs.categorical(p);
    t.actions[i] = a;
    double reward = 0.0;
    for (std::size_t h = 0; h < H; ++h) {
      const double y = rs.bernoulli(r[h]) ? 1.0 : 0.0;
      t.reward_field[i * H + h] = y;
      if (h == a) reward = y;
    }
    for (std::size_t h = 0; h < H; ++h) {
      const double w = (h == a ? reward / p[h] : 0.0);
      const double z = w - r[h];
      sum[h] += z;
      var[h] += r[h] / p[h] - r[h] * r[h];
      iw_total[h] += w;
      t.values[i * H + h] = z;
      t.running_sum[i * H + h] = sum[h];
      t.running_var[i * H + h] = var[h];
      t.sampling_probs[i * H + h] = p[h];
    }
  }
  t.iw_estimates.resize(H);
  for (std::size_t h = 0; h < H; ++h) {
    t.iw_estimates[h] = iw_total[h] / double(spec.n);
  }
  return t;
}

/* Trial t of an experiment: substream t of the master seed. */
inline MartingaleTrace simulate_trial(const ScenarioSpec& spec,
                                      std::uint64_t master_seed,
                                      std::uint64_t trial) {
  RandomStream rs(master_seed, trial);
  return spec.kind == ScenarioKind::iw_sampling ? simulate_field(spec, rs)
                                                : simulate_sequence(spec, rs);
}

enum class BoundId { kl_drift, hoeffding_azuma, bernstein_adaptive, pb_kl,
                     pb_ha_adaptive, pb_bernstein_adaptive };

inline const char* to_string(BoundId id) {
  switch (id) {
    case BoundId::kl_drift: return "kl_drift";
    case BoundId::hoeffding_azuma: return "hoeffding_azuma";
    case BoundId::bernstein_adaptive: return "bernstein_adaptive";
    case BoundId::pb_kl: return "pb_kl";
    case BoundId::pb_ha_adaptive: return "pb_ha_adaptive";
    case BoundId::pb_bernstein_adaptive: return "pb_bernstein_adaptive";
  }
  return "?";
}

inline std::optional<BoundId> bound_id_from_string(const std::string& s) {
  for (BoundId id : {BoundId::kl_drift, BoundId::hoeffding_azuma,
                     BoundId::bernstein_adaptive, BoundId::pb_kl,
                     BoundId::pb_ha_adaptive, BoundId::pb_bernstein_adaptive}) {
    if (s == to_string(id)) return id;
  }
  return std::nullopt;
}

inline bool bound_is_weighted(BoundId id) {
  return id == BoundId::pb_kl || id == BoundId::pb_ha_adaptive ||
         id == BoundId::pb_bernstein_adaptive;
}

struct CoverageParams {
  double delta = 0.05;
  double c = 1.1;
  double gibbs_gamma = 5.0;
  std::size_t trials = 1000;
  std::uint64_t master_seed = 7;
};

struct BoundOutcome {
  BoundId id = BoundId::kl_drift;
  std::size_t violations = 0;
  double rate = 0.0;
  double band = 0.0;  // delta + 3 sqrt(delta(1-delta)/T)
  bool within_band = true;
  double mean_radius = 0.0;
  double mean_width = 0.0;
  std::size_t grid_ok_count = 0;   // adaptive Bernstein branch tallies
  std::size_t fallback_count = 0;
  double mean_nu = 0.0;
  double mean_lambda = 0.0;
  double crossover_fraction = 0.0;  // kl_drift: refined beats Hoeffding-Azuma
};

struct ExperimentReport {
  ScenarioSpec scenario;
  CoverageParams params;
  std::string generator = kGeneratorId;
  std::vector<BoundOutcome> outcomes;
};

/* Posteriors checked simultaneously in the weighted-family experiments:
 * the uniform prior, every point mass, and a Gibbs posterior fitted to the
 * realized importance-weighted estimates. */
inline std::vector<DiscreteDistribution> posterior_family(
    const MartingaleTrace& trace, double gamma) {
  std::vector<DiscreteDistribution> fam;
  const std::size_t H = trace.num_h;
  fam.push_back(DiscreteDistribution::uniform(H));
  for (std::size_t h = 0; h < H; ++h) {
    fam.push_back(DiscreteDistribution::point_mass(H, h));
  }
  if (!trace.iw_estimates.empty()) {
    std::vector<double> scores(H);
    for (std::size_t h = 0; h < H; ++h) scores[h] = -trace.iw_estimates[h];
    fam.push_back(
        gibbs_posterior(scores, DiscreteDistribution::uniform(H), gamma));
  }
  return fam;
}

namespace detail {

struct BoundAccum {
  std::size_t violations = 0;
  KahanSum radius, width, nu, lambda;
  std::size_t grid_ok = 0, fallback = 0, crossover = 0;
};

/* Evaluate one bound on one realized trace; returns violation flag and
 * accumulates the per-trial diagnostics. Violations compare against the
 * exactly known scenario means, never against estimates. */
inline void eval_bound_on_trace(BoundId id, const MartingaleTrace& trace,
                                const CoverageParams& p, BoundAccum& acc) {
  const std::size_t n = trace.n;
  switch (id) {
    case BoundId::kl_drift: {
      require(trace.spec.kind == ScenarioKind::iid_bernoulli ||
                  trace.spec.kind == ScenarioKind::dependent_bounded,
              "kl_drift needs a [0,1]-valued scalar scenario");
      const auto r = kl_drift_bound(trace.final_sum(), n, p.delta);
      if (double(bernoulli_kl(r.phat, trace.means[0])) > r.eps) {
        ++acc.violations;
      }
      acc.radius.add(r.eps);
      acc.width.add(r.hi - r.lo);
      const double ha_mean_radius =
          hoeffding_azuma_radius(trace.ranges(), p.delta) / double(n);
      if (r.refined_hi < r.phat + ha_mean_radius) ++acc.crossover;
      break;
    }
    case BoundId::hoeffding_azuma: {
      const double rad = hoeffding_azuma_radius(trace.ranges(), p.delta);
      if (std::fabs(trace.final_mart()) > rad) ++acc.violations;
      acc.radius.add(rad);
      acc.width.add(2.0 * rad);
      break;
    }
    case BoundId::bernstein_adaptive: {
      const auto r = bernstein_adaptive(trace.final_var(), trace.k_bound, n,
                                        p.delta, p.c);
      if (std::fabs(trace.final_mart()) > r.radius) ++acc.violations;
      acc.radius.add(r.radius);
      acc.width.add(2.0 * r.radius);
      acc.nu.add(double(r.nu));
      acc.lambda.add(r.lambda);
      if (r.branch == BernsteinBranch::grid_ok) {
        ++acc.grid_ok;
      } else {
        ++acc.fallback;
      }
      break;
    }
    case BoundId::pb_kl:
    case BoundId::pb_ha_adaptive:
    case BoundId::pb_bernstein_adaptive: {
      require(trace.spec.kind == ScenarioKind::iw_sampling,
              "weighted-family coverage runs on the iw_sampling scenario");
      const HypothesisSummary s = trace.summary();
      const DiscreteDistribution pi =
          DiscreteDistribution::uniform(trace.num_h);
      const auto family = posterior_family(trace, p.gibbs_gamma);
      const std::vector<double> mbar = trace.mbar();
      bool violated = false;
      bool first = true;
      for (const auto& rho : family) {
        if (id == BoundId::pb_kl) {
          const auto r = pb_kl_bound(s, rho, pi, p.delta);
          const double mean_true = rho.expect(trace.means);
          if (double(bernoulli_kl(*r.mhat, mean_true)) > r.radius) {
            violated = true;
          }
          if (first) {
            acc.radius.add(r.radius);
            acc.width.add(*r.hi - *r.lo);
          }
        } else if (id == BoundId::pb_ha_adaptive) {
          const auto r = pb_ha_adaptive(s, rho, pi, p.delta, p.c);
          if (std::fabs(rho.expect(mbar)) > r.radius) violated = true;
          if (first) {
            acc.radius.add(r.radius);
            acc.width.add(2.0 * r.radius);
            acc.lambda.add(*r.lambda);
          }
        } else {
          const auto r = pb_bernstein_adaptive(s, rho, pi, p.delta, p.c);
          if (std::fabs(rho.expect(mbar)) > r.radius) violated = true;
          if (first) {
            acc.radius.add(r.radius);
            acc.width.add(2.0 * r.radius);
            acc.nu.add(double(*r.nu));
            acc.lambda.add(*r.lambda);
            if (*r.branch == BernsteinBranch::grid_ok) {
              ++acc.grid_ok;
            } else {
              ++acc.fallback;
            }
          }
        }
        first = false;
      }
      if (violated) ++acc.violations;
      break;
    }
  }
}

}  // namespace detail

/*
 * Monte Carlo coverage: simulate `trials` independent paths (substream =
 * trial index) and count, per bound, the trials on which the realized
 * deviation exceeds the bound's radius; weighted-family bounds count a trial
 * as violated when ANY posterior in the checked family exceeds its radius.
 * The 3-sigma binomial band delta + 3 sqrt(delta(1-delta)/T) is attached to
 * each outcome. Chunked threads with a fixed in-order reduction keep the
 * report byte-identical for any thread count.
 */
inline ExperimentReport coverage_experiment(const ScenarioSpec& spec,
                                            const std::vector<BoundId>& bounds,
                                            const CoverageParams& params) {
  spec.validate();
  detail::require(params.trials >= 1, "coverage needs at least one trial");
  detail::require_delta(params.delta);
  for (BoundId id : bounds) {
    detail::require(bound_is_weighted(id) ==
                        (spec.kind == ScenarioKind::iw_sampling),
                    std::string("bound ") + to_string(id) +
                        " does not apply to scenario " + to_string(spec.kind));
  }
  const std::size_t chunk_size = 64;
  const std::size_t num_chunks = (params.trials + chunk_size - 1) / chunk_size;
  using Partials = std::vector<detail::BoundAccum>;
  auto chunks = detail::run_chunks<Partials>(num_chunks, [&](std::size_t ci) {
    Partials acc(bounds.size());
    const std::size_t lo = ci * chunk_size;
    const std::size_t hi = std::min(lo + chunk_size, params.trials);
    for (std::size_t t = lo; t < hi; ++t) {
      const MartingaleTrace trace =
          simulate_trial(spec, params.master_seed, t);
      for (std::size_t bi = 0; bi < bounds.size(); ++bi) {
        detail::eval_bound_on_trace(bounds[bi], trace, params, acc[bi]);
      }
    }
    return acc;
  });
  ExperimentReport rep;
  rep.scenario = spec;
  rep.params = params;
  const double T = double(params.trials);
  for (std::size_t bi = 0; bi < bounds.size(); ++bi) {
    detail::BoundAccum total;
    for (const auto& part : chunks) {
      total.violations += part[bi].violations;
      total.radius.add(part[bi].radius.value());
      total.width.add(part[bi].width.value());
      total.nu.add(part[bi].nu.value());
      total.lambda.add(part[bi].lambda.value());
      total.grid_ok += part[bi].grid_ok;
      total.fallback += part[bi].fallback;
      total.crossover += part[bi].crossover;
    }
    BoundOutcome out;
    out.id = bounds[bi];
    out.violations = total.violations;
    out.rate = double(total.violations) / T;
    out.band = params.delta +
               3.0 * std::sqrt(params.delta * (1.0 - params.delta) / T);
    out.within_band = out.rate <= out.band;
    out.mean_radius = total.radius.value() / T;
    out.mean_width = total.width.value() / T;
    out.grid_ok_count = total.grid_ok;
    out.fallback_count = total.fallback;
    out.mean_nu = total.nu.value() / T;
    out.mean_lambda = total.lambda.value() / T;
    out.crossover_fraction = double(total.crossover) / T;
    rep.outcomes.push_back(out);
  }
  return rep;
}

/* Upper/lower confidence endpoints for the mean of a [0,1] sequence under
 * each bound family at the same sample size, on the mean scale. */
struct TightnessRow {
  double phat = 0.0;
  double eps = 0.0;
  double kl_lo = 0.0, kl_hi = 1.0;
  double pinsker_lo = 0.0, pinsker_hi = 1.0;
  double refined_hi = 1.0;
  double ha_lo = 0.0, ha_hi = 1.0;
  double bern_lo = 0.0, bern_hi = 1.0;
  std::string winner;  // bound with the smallest upper endpoint
  bool refined_below_ha = false;
};

/*
 * Deterministic side-by-side endpoint table at sample size n: the kl drift
 * interval with its Pinsker and refined relaxations, the Hoeffding-Azuma
 * interval for unit-width rounds, and the adaptive Bernstein interval at
 * cumulative variance n * vn_over_n (default: the Bernoulli variance
 * phat(1-phat)), increment bound k_bound.
 */
inline std::vector<TightnessRow> tightness_table(
    std::size_t n, double delta, const std::vector<double>& phats,
    std::optional<double> vn_over_n = std::nullopt, double k_bound = 1.0,
    double c = 1.1) {
  detail::require_delta(delta);
  detail::require(n >= 1, "tightness table needs n >= 1");
  std::vector<TightnessRow> rows;
  rows.reserve(phats.size());
  for (double phat : phats) {
    TightnessRow row;
    row.phat = phat;
    const auto drift = kl_drift_bound(phat * double(n), n, delta);
    row.eps = drift.eps;
    row.kl_lo = drift.lo;
    row.kl_hi = drift.hi;
    row.pinsker_lo = drift.pinsker_lo;
    row.pinsker_hi = drift.pinsker_hi;
    row.refined_hi = drift.refined_hi;
    const double ha_mean =
        hoeffding_azuma_radius(RangeSeq::symmetric(0.5, n), delta) / double(n);
    row.ha_lo = std::max(0.0, phat - ha_mean);
    row.ha_hi = std::min(1.0, phat + ha_mean);
    const double v = double(n) * (vn_over_n ? *vn_over_n
                                            : phat * (1.0 - phat));
    const double bern_mean =
        bernstein_adaptive(v, k_bound, n, delta, c).radius / double(n);
    row.bern_lo = std::max(0.0, phat - bern_mean);
    row.bern_hi = std::min(1.0, phat + bern_mean);
    row.refined_below_ha = row.refined_hi < phat + ha_mean;
    row.winner = "kl";
    double best = row.kl_hi;
    if (row.ha_hi < best) { best = row.ha_hi; row.winner = "hoeffding_azuma"; }
    if (row.bern_hi < best) { best = row.bern_hi; row.winner = "bernstein"; }
    if (std::min(1.0, row.refined_hi) < best) {
      best = std::min(1.0, row.refined_hi);
      row.winner = "refined_kl";
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace martconc
