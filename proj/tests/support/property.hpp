#pragma once

// Minimal property-based testing: draw inputs from a seeded generator, run the
// check, and report the first failing case with its index so it can be replayed.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>

namespace pcfpair::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

template <typename Gen, typename Check>
void for_all(int cases, std::uint64_t seed, Gen&& gen, Check&& check) {
  Rng rng(seed);
  for (int k = 0; k < cases; ++k) {
    auto input = gen(rng);
    std::ostringstream trace;
    trace << "property case " << k << " of " << cases << " (seed " << seed << ")";
    SCOPED_TRACE(trace.str());
    check(input);
    if (::testing::Test::HasFailure()) return;
  }
}

}  // namespace pcfpair::testing
