#include "pcfpair/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "pcfpair/errors.hpp"

namespace pcfpair::numerics {

double bracketed_root(const std::function<double(double)>& f, double lo, double hi, double tolerance,
                      int max_iterations) {
  if (!(lo < hi)) throw ArgumentError("bracketed_root: empty bracket");
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    std::ostringstream msg;
    msg << "no sign change on [" << lo << ", " << hi << "]";
    throw NoRootError(msg.str());
  }
  std::uintmax_t iterations = static_cast<std::uintmax_t>(max_iterations);
  auto done = [tolerance](double a, double b) { return std::abs(b - a) <= tolerance; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, done, iterations);
  if (!done(a, b)) throw NumericError("bracketed_root: iteration cap reached before tolerance");
  return 0.5 * (a + b);
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw ArgumentError("least_squares_slope: size mismatch or empty input");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

HalfMaximumWidth full_width_half_maximum(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) throw ArgumentError("full_width_half_maximum: need >= 3 samples");
  const auto peak = static_cast<std::size_t>(std::distance(y.begin(), std::max_element(y.begin(), y.end())));
  const double half = 0.5 * y[peak];
  if (!(half > 0.0)) throw NumericError("full_width_half_maximum: non-positive peak");

  auto cross = [&](std::size_t inside, std::size_t outside) {
    const double t = (y[inside] - half) / (y[inside] - y[outside]);
    return x[inside] + t * (x[outside] - x[inside]);
  };

  HalfMaximumWidth out;
  out.peak_index = peak;
  std::size_t i = peak;
  while (i > 0 && y[i - 1] > half) --i;
  if (i == 0) throw NumericError("full_width_half_maximum: left half-max crossing outside the sampled range");
  double a = cross(i, i - 1);
  std::size_t j = peak;
  while (j + 1 < y.size() && y[j + 1] > half) ++j;
  if (j + 1 == y.size()) throw NumericError("full_width_half_maximum: right half-max crossing outside the sampled range");
  double b = cross(j, j + 1);
  out.left = std::min(a, b);
  out.right = std::max(a, b);
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

std::vector<std::size_t> local_minima(std::span<const double> y) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] < y[i - 1] && y[i] < y[i + 1]) out.push_back(i);
  return out;
}

}  // namespace pcfpair::numerics
