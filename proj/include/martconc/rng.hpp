#pragma once

/*
 * Deterministic randomness with a pinned cross-platform contract.
 *
 * Every consumer draws from a RandomStream(master_seed, stream_index).
 * The substream seed is the splitmix64 finalizer applied to
 * master ^ ((index + 1) * 0x9E3779B97F4A7C15); the engine is std::mt19937_64,
 * whose output sequence the C++ standard pins exactly; uniforms take the top
 * 53 bits, u = (x >> 11) * 2^-53 in [0, 1). None of std::*_distribution is
 * used anywhere (their mappings are implementation-defined), so identical
 * seeds give byte-identical results on any conforming toolchain. The id
 * string below is echoed into every machine-readable report.
 */

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace martconc {

inline constexpr const char* kGeneratorId = "splitmix64-mt19937_64-u53-v1";

namespace detail {

inline std::uint64_t splitmix64_finalize(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return detail::splitmix64_finalize(master ^
                                     ((index + 1) * 0x9E3779B97F4A7C15ULL));
}

class RandomStream {
 public:
  RandomStream(std::uint64_t master, std::uint64_t index)
      : eng_(stream_seed(master, index)) {}

  /* Uniform in [0, 1), 53 random bits. */
  double uniform() {
    return double(eng_() >> 11) * 0x1.0p-53;
  }

  /* Uniform in (lo, hi) scaled from uniform(). */
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /* Index draw by CDF inversion over explicit weights (assumed to sum to 1;
   * the final atom absorbs any rounding slack). */
  std::size_t categorical(const std::vector<double>& probs) {
    if (probs.empty()) throw std::invalid_argument("categorical needs atoms");
    const double u = uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum) return i;
    }
    return probs.size() - 1;
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace martconc
