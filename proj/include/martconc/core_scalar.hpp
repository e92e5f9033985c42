#pragma once

/*
 * Scalar kl toolkit.
 *
 * Binary relative entropy between Bernoulli means,
 *
 *     kl(p || q) = p ln(p/q) + (1-p) ln((1-p)/(1-q)),
 *
 * with the usual conventions 0 ln 0 = 0, kl(p || 0) = +inf for p > 0 and
 * kl(p || 1) = +inf for p < 1. Numeric inversion of q -> kl(p || q) on each
 * monotone branch gives confidence endpoints; two closed-form relaxations
 * (Pinsker radius and the sqrt(2 q eps) + 2 eps upper form) are provided for
 * comparison. Infinities propagate through every routine; only malformed
 * arguments (NaN, out-of-range probabilities, mismatched lengths) throw.
 */

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace martconc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

inline bool is_prob(double p) { return p >= 0.0 && p <= 1.0; }  // NaN fails

}  // namespace detail

/* A probability validated at construction; converts back to double freely. */
class Prob {
 public:
  Prob(double v) : v_(v) {  // NOLINT: implicit by design
    if (!detail::is_prob(v)) {  // message built only on failure (hot path)
      throw std::invalid_argument("probability must lie in [0, 1], got " +
                                  std::to_string(v));
    }
  }
  operator double() const { return v_; }
  double value() const { return v_; }

 private:
  double v_;
};

/* A nonnegative, possibly infinite divergence value. */
class KlValue {
 public:
  KlValue(double v) : v_(v) {  // NOLINT: implicit by design
    if (!(v >= 0.0)) {
      throw std::invalid_argument("divergence must be nonnegative, got " +
                                  std::to_string(v));
    }
  }
  operator double() const { return v_; }
  double value() const { return v_; }
  bool is_infinite() const { return std::isinf(v_); }

 private:
  double v_;
};

namespace detail {

/* Validation-free kl kernel for inner loops; arguments must already be
 * probabilities. Same definition and term order as bernoulli_kl. */
inline double bernoulli_kl_raw(double pp, double qq) {
  if (pp == qq) return 0.0;
  if (pp > 0.0 && qq == 0.0) return kInf;
  if (pp < 1.0 && qq == 1.0) return kInf;
  double acc = 0.0;
  if (pp > 0.0) acc += pp * std::log(pp / qq);
  if (pp < 1.0) acc += (1.0 - pp) * std::log((1.0 - pp) / (1.0 - qq));
  return acc > 0.0 ? acc : 0.0;
}

}  // namespace detail

/*
 * kl(p || q). Total on [0,1]^2: endpoint q with mass elsewhere gives +inf,
 * never an error. The two terms are accumulated in a fixed order (p-term
 * first) so that kl(p, q) == kl(1-p, 1-q) bit-exactly whenever 1-p and 1-q
 * are exact, e.g. on dyadic grids.
 */
inline KlValue bernoulli_kl(Prob p, Prob q) {
  return detail::bernoulli_kl_raw(p, q);
}

/*
 * Largest q in [p, 1] with kl(p || q) <= eps, found by bisection on the
 * increasing branch. Returns 1 when kl(p || q) < eps for every q < 1.
 * The bracket is shrunk to adjacent doubles (at most max_iter halvings),
 * which keeps |kl(p || result) - eps| near the floating-point floor even
 * where the derivative (q - p)/(q(1-q)) blows up; tol only caps the work.
 * The high end of the final bracket is returned, erring outward.
 */
inline double kl_inv_upper(Prob p, KlValue eps, double tol = 1e-12,
                           int max_iter = 200) {
  detail::require(tol > 0.0, "tolerance must be positive");
  const double pp = p, e = eps;
  if (e == 0.0) return pp;
  if (std::isinf(e)) return 1.0;
  if (pp == 1.0) return 1.0;
  if (detail::bernoulli_kl_raw(pp, std::nextafter(1.0, 0.0)) < e) return 1.0;
  double lo = pp, hi = 1.0;
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket is a single ulp
    if (detail::bernoulli_kl_raw(pp, mid) >= e) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 0.0) break;
  }
  return hi;
}

/* Mirror image of kl_inv_upper on [0, p]: smallest reachable q, 0 when
 * kl(p || q) < eps for every q > 0. Returns the low end of the bracket. */
inline double kl_inv_lower(Prob p, KlValue eps, double tol = 1e-12,
                           int max_iter = 200) {
  detail::require(tol > 0.0, "tolerance must be positive");
  const double pp = p, e = eps;
  if (e == 0.0) return pp;
  if (std::isinf(e)) return 0.0;
  if (pp == 0.0) return 0.0;
  if (detail::bernoulli_kl_raw(pp, std::nextafter(0.0, 1.0)) < e) return 0.0;
  double lo = 0.0, hi = pp;
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (detail::bernoulli_kl_raw(pp, mid) >= e) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

/* Pinsker relaxation: |q - p| <= sqrt(eps / 2) whenever kl(p || q) <= eps. */
inline double pinsker_radius(KlValue eps) { return std::sqrt(0.5 * eps); }

/*
 * Closed-form upper endpoint q <= qhat + sqrt(2 qhat eps) + 2 eps implied by
 * kl(qhat || q) <= eps. May exceed 1; the caller clamps if a probability is
 * needed. Tighter than Pinsker when qhat and eps are both small.
 */
inline double refined_kl_upper(Prob qhat, KlValue eps) {
  const double q = qhat, e = eps;
  if (std::isinf(e)) return kInf;
  return q + std::sqrt(2.0 * q * e) + 2.0 * e;
}

/*
 * A finite probability vector validated at construction: entries nonnegative,
 * total within 1e-12 of one (then renormalized exactly), at least one entry.
 */
class DiscreteDistribution {
 public:
  explicit DiscreteDistribution(std::vector<double> w) : w_(std::move(w)) {
    detail::require(!w_.empty(), "distribution needs at least one atom");
    double total = 0.0;
    for (double v : w_) {
      detail::require(v >= 0.0 && std::isfinite(v),
                      "distribution weights must be finite and nonnegative");
      total += v;
    }
    detail::require(std::fabs(total - 1.0) <= 1e-12,
                    "distribution weights must sum to 1 (got " +
                        std::to_string(total) + ")");
    for (double& v : w_) v /= total;
  }

  static DiscreteDistribution uniform(std::size_t m) {
    detail::require(m >= 1, "distribution needs at least one atom");
    return DiscreteDistribution(std::vector<double>(m, 1.0 / double(m)));
  }

  static DiscreteDistribution point_mass(std::size_t m, std::size_t at) {
    detail::require(at < m, "point mass index out of range");
    std::vector<double> w(m, 0.0);
    w[at] = 1.0;
    return DiscreteDistribution(std::move(w));
  }

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& weights() const { return w_; }

  /* <f, rho> for a vector of per-atom values. */
  double expect(const std::vector<double>& f) const {
    detail::require(f.size() == w_.size(),
                    "expectation needs one value per atom");
    double acc = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) acc += w_[i] * f[i];
    return acc;
  }

 private:
  std::vector<double> w_;
};

/*
 * KL(rho || pi) = sum_i rho_i ln(rho_i / pi_i), with 0 ln(0/x) = 0 and
 * +inf as soon as rho puts mass where pi has none. Nonnegative by Jensen,
 * zero iff rho == pi; tiny negative rounding is clamped to zero.
 */
inline KlValue discrete_kl(const DiscreteDistribution& rho,
                           const DiscreteDistribution& pi) {
  detail::require(rho.size() == pi.size(),
                  "discrete_kl needs equal-length distributions");
  double acc = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] == 0.0) continue;
    if (pi[i] == 0.0) return kInf;
    acc += rho[i] * std::log(rho[i] / pi[i]);
  }
  return acc > 0.0 ? acc : 0.0;
}

}  // namespace martconc
