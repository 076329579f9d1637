#pragma once

#include <cstddef>
#include <functional>
#include <future>
#include <span>
#include <thread>
#include <vector>

namespace pcfpair::numerics {

/// Root of f on [lo, hi] (f(lo), f(hi) of opposite sign), located to |hi - lo| <= tolerance.
/// Backed by Boost.Math TOMS 748. Throws NoRootError when the ends share a sign.
double bracketed_root(const std::function<double(double)>& f, double lo, double hi, double tolerance,
                      int max_iterations = 200);

/// Ordinary least-squares slope of y against x. Zero when x has no spread.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

struct HalfMaximumWidth {
  double left = 0.0;   // interpolated abscissa of the left half-max crossing
  double right = 0.0;  // interpolated abscissa of the right half-max crossing
  std::size_t peak_index = 0;
  double width() const { return right - left; }
};

/// Full width at half maximum of sampled data by linear interpolation of the
/// first crossings on either side of the global maximum. x must be strictly
/// monotone. Throws NumericError when a crossing falls outside the samples.
HalfMaximumWidth full_width_half_maximum(std::span<const double> x, std::span<const double> y);

/// Evenly spaced samples including both end points; n >= 2 (n == 1 yields {lo}).
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Indices i (0 < i < n-1) where y[i] is strictly below both neighbours.
std::vector<std::size_t> local_minima(std::span<const double> y);

/// Order-preserving parallel map over [0, n). Results land at their index,
/// so the output is independent of scheduling.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn, unsigned max_workers = 0) {
  std::vector<T> out(n);
  unsigned workers = max_workers != 0 ? max_workers : std::thread::hardware_concurrency();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::future<void>> jobs;
  jobs.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
    }));
  }
  for (auto& job : jobs) job.get();
  return out;
}

}  // namespace pcfpair::numerics
