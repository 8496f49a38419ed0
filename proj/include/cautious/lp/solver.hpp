#pragma once

#include "cautious/lp/problem.hpp"
#include "cautious/lp/simplex.hpp"

namespace cautious::lp {

// Floating is the default; ExactRational solves the same problem over
// arbitrary-precision rationals and is meant for small regression instances.
enum class Backend { Floating, ExactRational };

inline Outcome solve(const Problem& problem, Backend backend = Backend::Floating) {
  if (backend == Backend::ExactRational) return BoundedSimplex<Rational>(problem).solve();
  return BoundedSimplex<double>(problem).solve();
}

}  // namespace cautious::lp
