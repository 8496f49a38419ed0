#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "cautious/lp/problem.hpp"
#include "cautious/lp/solver.hpp"

namespace cautious::lp {
namespace {

constexpr double kTol = 1e-7;

TEST(Simplex, TextbookMaximum) {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
  Problem p;
  const auto x = p.add_variable("x");
  const auto y = p.add_variable("y");
  p.add_constraint("c1", {{x, 1}}, Relation::LessEqual, 4);
  p.add_constraint("c2", {{y, 2}}, Relation::LessEqual, 12);
  p.add_constraint("c3", {{x, 3}, {y, 2}}, Relation::LessEqual, 18);
  p.set_objective(Sense::Maximize, {{x, 3}, {y, 5}});
  for (auto backend : {Backend::Floating, Backend::ExactRational}) {
    const auto out = solve(p, backend);
    ASSERT_EQ(out.status, Status::Optimal);
    EXPECT_NEAR(*out.objective, 36.0, kTol);
    EXPECT_NEAR(out.values[x], 2.0, kTol);
    EXPECT_NEAR(out.values[y], 6.0, kTol);
  }
}

TEST(Simplex, GreaterEqualRowsNeedPhaseOne) {
  // min x + y, x + 2y >= 4, 3x + y >= 6 -> (1.6, 1.2), 2.8
  Problem p;
  const auto x = p.add_variable("x");
  const auto y = p.add_variable("y");
  p.add_constraint("a", {{x, 1}, {y, 2}}, Relation::GreaterEqual, 4);
  p.add_constraint("b", {{x, 3}, {y, 1}}, Relation::GreaterEqual, 6);
  p.set_objective(Sense::Minimize, {{x, 1}, {y, 1}});
  const auto out = solve(p);
  ASSERT_EQ(out.status, Status::Optimal);
  EXPECT_NEAR(*out.objective, 2.8, kTol);
}

TEST(Simplex, DetectsInfeasibility) {
  Problem p;
  const auto x = p.add_free_variable("x");
  p.add_constraint("lo", {{x, 1}}, Relation::GreaterEqual, 1);
  p.add_constraint("hi", {{x, -1}}, Relation::GreaterEqual, 1);
  for (auto backend : {Backend::Floating, Backend::ExactRational}) {
    const auto out = solve(p, backend);
    EXPECT_EQ(out.status, Status::Infeasible);
    EXPECT_FALSE(out.objective.has_value());
  }
}

TEST(Simplex, DetectsUnboundedness) {
  Problem p;
  const auto x = p.add_free_variable("x");
  const auto y = p.add_free_variable("y");
  p.add_constraint("c", {{x, 1}, {y, -1}}, Relation::GreaterEqual, 1);
  p.set_objective(Sense::Maximize, {{x, 1}});
  const auto out = solve(p);
  EXPECT_EQ(out.status, Status::Unbounded);
  EXPECT_FALSE(out.objective.has_value());
}

TEST(Simplex, EqualityRowsAndBoxBounds) {
  // max a + b + c, a - b = 0, b - c = 0, 0 <= each <= 1 -> 3
  Problem p;
  const auto a = p.add_variable("a", 0, 1);
  const auto b = p.add_variable("b", 0, 1);
  const auto c = p.add_variable("c", 0, 1);
  p.add_constraint("e1", {{a, 1}, {b, -1}}, Relation::Equal, 0);
  p.add_constraint("e2", {{b, 1}, {c, -1}}, Relation::Equal, 0);
  p.set_objective(Sense::Maximize, {{a, 1}, {b, 1}, {c, 1}});
  const auto out = solve(p);
  ASSERT_EQ(out.status, Status::Optimal);
  EXPECT_NEAR(*out.objective, 3.0, kTol);
}

TEST(Simplex, FeasibilityOnlyProblem) {
  Problem p;
  const auto x = p.add_free_variable("x");
  p.add_constraint("c", {{x, 2}}, Relation::GreaterEqual, 1);
  const auto out = solve(p);
  ASSERT_EQ(out.status, Status::Optimal);
  EXPECT_GE(2 * out.values[x], 1 - kTol);
}

TEST(Simplex, BealeCyclingInstanceTerminates) {
  // Classic degenerate instance on which textbook Dantzig pricing cycles.
  Problem p;
  std::vector<std::size_t> x;
  for (int i = 0; i < 4; ++i) x.push_back(p.add_variable("x" + std::to_string(i)));
  p.add_constraint("r1", {{x[0], 0.25}, {x[1], -8}, {x[2], -1}, {x[3], 9}}, Relation::LessEqual, 0);
  p.add_constraint("r2", {{x[0], 0.5}, {x[1], -12}, {x[2], -0.5}, {x[3], 3}}, Relation::LessEqual, 0);
  p.add_constraint("r3", {{x[2], 1}}, Relation::LessEqual, 1);
  p.set_objective(Sense::Maximize, {{x[0], 0.75}, {x[1], -20}, {x[2], 0.5}, {x[3], -6}});
  for (auto backend : {Backend::Floating, Backend::ExactRational}) {
    const auto out = solve(p, backend);
    ASSERT_EQ(out.status, Status::Optimal);
    EXPECT_NEAR(*out.objective, 1.25, kTol);
  }
}

TEST(Problem, RejectsUnknownVariables) {
  Problem p;
  p.add_variable("x");
  EXPECT_THROW(p.add_constraint("bad", {{3, 1.0}}, Relation::LessEqual, 0), PreconditionError);
  EXPECT_THROW(p.set_objective(Sense::Minimize, {{1, 1.0}}), PreconditionError);
  EXPECT_THROW(p.add_variable("y", 2, 1), PreconditionError);
}

TEST(Problem, WritesCplexLpFormat) {
  Problem p;
  const auto x = p.add_free_variable("u_1");
  const auto y = p.add_variable("e0", 0, kInfinity);
  p.add_constraint("pref0", {{x, 1}, {y, 1}}, Relation::GreaterEqual, 1);
  p.set_objective(Sense::Minimize, {{y, 1}});
  std::ostringstream out;
  write_cplex_lp(out, p);
  const std::string text = out.str();
  EXPECT_NE(text.find("Minimize"), std::string::npos);
  EXPECT_NE(text.find("Subject To"), std::string::npos);
  EXPECT_NE(text.find("pref0: + 1 u_1 + 1 e0 >= 1"), std::string::npos);
  EXPECT_NE(text.find("u_1 free"), std::string::npos);
  EXPECT_NE(text.find("End"), std::string::npos);
}

// Optimum of max c.x over a bounded 2-D region by enumerating every vertex.
double vertex_oracle(const std::vector<std::array<double, 3>>& rows, double cx, double cy, bool& feasible) {
  // rows: a x + b y <= r
  double best = -INFINITY;
  feasible = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const auto& p = rows[i];
      const auto& q = rows[j];
      const double det = p[0] * q[1] - p[1] * q[0];
      if (std::fabs(det) < 1e-12) continue;
      const double x = (p[2] * q[1] - p[1] * q[2]) / det;
      const double y = (p[0] * q[2] - p[2] * q[0]) / det;
      bool ok = true;
      for (const auto& r : rows) ok = ok && r[0] * x + r[1] * y <= r[2] + 1e-9;
      if (ok) {
        feasible = true;
        best = std::max(best, cx * x + cy * y);
      }
    }
  }
  return best;
}

TEST(Simplex, MatchesVertexEnumerationOnRandomPlanarPrograms) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coef(-5, 5);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::array<double, 3>> rows = {{1, 0, 10}, {-1, 0, 10}, {0, 1, 10}, {0, -1, 10}};
    Problem p;
    const auto x = p.add_variable("x", -10, 10);
    const auto y = p.add_variable("y", -10, 10);
    const int m = 1 + trial % 5;
    for (int k = 0; k < m; ++k) {
      const double a = coef(rng), b = coef(rng), r = coef(rng);
      rows.push_back({a, b, r});
      p.add_constraint("r" + std::to_string(k), {{x, a}, {y, b}}, Relation::LessEqual, r);
    }
    const double cx = coef(rng), cy = coef(rng);
    p.set_objective(Sense::Maximize, {{x, cx}, {y, cy}});
    bool feasible = false;
    const double expected = vertex_oracle(rows, cx, cy, feasible);
    const auto got = solve(p);
    const auto exact = solve(p, Backend::ExactRational);
    if (!feasible) {
      EXPECT_EQ(got.status, Status::Infeasible) << "trial " << trial;
      EXPECT_EQ(exact.status, Status::Infeasible) << "trial " << trial;
      ++infeasible;
      continue;
    }
    ASSERT_EQ(got.status, Status::Optimal) << "trial " << trial;
    ASSERT_EQ(exact.status, Status::Optimal) << "trial " << trial;
    EXPECT_NEAR(*got.objective, expected, 1e-6) << "trial " << trial;
    EXPECT_NEAR(*exact.objective, expected, 1e-6) << "trial " << trial;
    ++optimal;
  }
  EXPECT_GT(optimal, 100);
  EXPECT_GT(infeasible, 5);
}

}  // namespace
}  // namespace cautious::lp
