#pragma once

// Shared value types: points, quadrature estimates, counter-based RNG,
// deterministic parallel loops.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

namespace harmcantor {

template <int D>
using Point = std::array<double, D>;

template <int D>
double dot(const Point<D>& a, const Point<D>& b) {
  double s = 0.0;
  for (int i = 0; i < D; ++i) s += a[i] * b[i];
  return s;
}
template <int D>
double norm(const Point<D>& a) {
  return std::sqrt(dot<D>(a, a));
}
template <int D>
double distance(const Point<D>& a, const Point<D>& b) {
  double s = 0.0;
  for (int i = 0; i < D; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}
// Size-deduced so that Point<D> arguments bind without explicit D.
template <std::size_t N>
std::array<double, N> operator+(std::array<double, N> a, const std::array<double, N>& b) {
  for (std::size_t i = 0; i < N; ++i) a[i] += b[i];
  return a;
}
template <std::size_t N>
std::array<double, N> operator-(std::array<double, N> a, const std::array<double, N>& b) {
  for (std::size_t i = 0; i < N; ++i) a[i] -= b[i];
  return a;
}
template <std::size_t N>
std::array<double, N> operator*(double s, std::array<double, N> a) {
  for (auto& v : a) v *= s;
  return a;
}

/// Value of a numerical integral with a self-consistency error estimate.
struct QuadratureEstimate {
  double value = 0.0;
  double error = 0.0;  ///< >= 0
  std::uint64_t effort = 1;  ///< nodes or samples used, >= 1
  std::string method;

  QuadratureEstimate& operator+=(const QuadratureEstimate& o) {
    value += o.value;
    error += o.error;
    effort += o.effort;
    return *this;
  }
};

inline nlohmann::json to_json(const QuadratureEstimate& q) {
  return {{"value", q.value}, {"error", q.error}, {"effort", q.effort}, {"method", q.method}};
}

/// Counter-based generator: the i-th draw of stream s under seed k is a pure
/// function of (k, s, i), so parallel schedules cannot change results.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n; }
  double normal() {
    // Box-Muller, one value per call.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925 * u2);
  }
  template <int D>
  Point<D> direction() {
    Point<D> p;
    double n2 = 0.0;
    do {
      for (auto& v : p) v = normal();
      n2 = dot<D>(p, p);
    } while (n2 == 0.0);
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& v : p) v *= inv;
    return p;
  }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline unsigned default_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

/// Runs body(i) for i in [0, n) on `threads` workers with a static block
/// split. Results must be written to per-index slots.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace harmcantor
