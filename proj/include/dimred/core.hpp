#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dimred {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Error taxonomy, mirrored by the CLI exit codes:
//   invalid_spec -> 1 (bad configuration / usage)
//   data_error   -> 2 (unusable input data)
//   numeric_error-> 3 (numerical failure during a fit)
struct invalid_spec : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A column was found to have zero scale (or is otherwise degenerate).
struct degenerate_column_error : data_error {
  degenerate_column_error(const std::string& msg, Index col)
      : data_error(msg), column(col) {}
  Index column;
};

// An iterative optimizer ran out of iterations; the best iterate seen is
// attached so callers can still inspect it.
struct convergence_error : numeric_error {
  convergence_error(const std::string& msg, Vector best)
      : numeric_error(msg), best_iterate(std::move(best)) {}
  Vector best_iterate;
};

inline void check_finite(const Eigen::Ref<const Matrix>& x, const char* what) {
  if (!x.allFinite()) throw data_error(std::string(what) + ": non-finite entry in input");
}

// MAD consistency factor for the normal distribution.
inline constexpr double kMadScale = 1.4826;

inline double median_of(std::vector<double> v) {
  if (v.empty()) throw data_error("median: empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return (n % 2 != 0) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double median_of(const Eigen::Ref<const Vector>& x) {
  return median_of(std::vector<double>(x.data(), x.data() + x.size()));
}

// Linearly interpolated empirical quantile of a sample, q in [0, 1].
inline double quantile_of(std::vector<double> v, double q) {
  if (v.empty()) throw data_error("quantile: empty sample");
  q = std::clamp(q, 0.0, 1.0);
  std::sort(v.begin(), v.end());
  const double idx = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(idx));
  const auto hi = static_cast<std::size_t>(std::ceil(idx));
  const double t = idx - static_cast<double>(lo);
  return v[lo] + (v[hi] - v[lo]) * t;
}

// median(|x - median(x)|) * scale; raw MAD for scale = 1.
inline double mad_of(const Eigen::Ref<const Vector>& x, double scale = kMadScale) {
  const double med = median_of(x);
  std::vector<double> dev(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) dev[static_cast<std::size_t>(i)] = std::abs(x[i] - med);
  return scale * median_of(std::move(dev));
}

// Small deterministic RNG (splitmix64). Used wherever reproducibility across
// standard libraries matters (fold shuffling, synthetic fixtures).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound), bound >= 1, via rejection sampling.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r = next();
    while (r >= limit) r = next();
    return r % bound;
  }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

template <class T>
inline void deterministic_shuffle(std::vector<T>& v, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.below(i)]);
  }
}

}  // namespace dimred
