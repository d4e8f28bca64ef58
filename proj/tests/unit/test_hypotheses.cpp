#include <gtest/gtest.h>

#include <cmath>

#include "trisol/constants.hpp"
#include "trisol/errors.hpp"
#include "trisol/hypotheses.hpp"
#include "trisol/problems.hpp"

using namespace trisol;

namespace {

const Domain unit_interval = Domain::box({0.0}, {1.0});
const Domain example_ball = Domain::ball({0.0, 0.0, 0.0}, 0.1);

ProblemSpec poly(std::vector<double> coefficients, double mu = 1.0) {
  ProblemSpec spec;
  spec.nonlinearity = problems::polynomial(std::move(coefficients));
  spec.mu = mu;
  return spec;
}

HypothesisSampling interval_sampling(double s_min, double s_max, int s_count) {
  return HypothesisSampling::make(unit_interval, 9, 1.0, 2.0, 2, s_min, s_max, s_count);
}

ConstantsReport example_constants() { return compute_constants(3, ball_volume(3, 0.1), 0.1, 3.0); }

AssumptionReport fake_report4(double lhs, double rhs) {
  AssumptionReport r;
  r.id = 4;
  r.lhs = lhs;
  r.rhs = rhs;
  r.worst_margin = lhs - rhs;
  r.pass = lhs > rhs;
  return r;
}

}  // namespace

TEST(Sampling, Spacing) {
  const auto lin = linspace(-2.0, 2.0, 5);
  EXPECT_EQ(lin, (std::vector<double>{-2.0, -1.0, 0.0, 1.0, 2.0}));
  const auto lg = logspace(1e-2, 1e2, 5);
  EXPECT_EQ(lg.front(), 1e-2);
  EXPECT_EQ(lg.back(), 1e2);
  EXPECT_NEAR(lg[2], 1.0, 1e-14);
}

TEST(Assumption1, ZeroNonlinearityFailsForNegativeS) {
  const auto r = check_assumption_1(poly({0.0}), interval_sampling(-2.0, 2.0, 41));
  EXPECT_FALSE(r.pass);
  EXPECT_LT(r.witness.s, 0.0);
  EXPECT_DOUBLE_EQ(r.worst_margin, -2.0);
}

TEST(Assumption1, SquareAgainstHandInequality) {
  auto spec = poly({0.0, 0.0, 1.0});
  spec.m1 = 0.0;
  spec.m2 = 1.0;
  spec.q = 3.0;
  const auto r = check_assumption_1(spec, interval_sampling(-1.0, 1.0, 21));
  EXPECT_FALSE(r.pass);
  EXPECT_DOUBLE_EQ(r.worst_margin, -1.0);
  EXPECT_EQ(r.witness.s, -1.0);
  const auto positive = check_assumption_1(spec, interval_sampling(0.0, 1.0, 21));
  EXPECT_TRUE(positive.pass);
  EXPECT_TRUE(positive.boundary_pass);
}

TEST(Assumption2, BoundaryPassAtZero) {
  // F = s + s^3: F~ - eta^2/2 = eta^4/4 >= 0 with equality at 0
  const auto r = check_assumption_2(poly({0.0, 1.0, 0.0, 1.0}), interval_sampling(-3.0, 3.0, 61));
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.boundary_pass);
  EXPECT_EQ(r.worst_margin, 0.0);
  EXPECT_EQ(r.witness.s, 0.0);
}

TEST(Assumption3, QuarticGrowthFailsAtRangeEdge) {
  auto spec = poly({0.0, 0.0, 0.0, 4.0});  // F~ = eta^4
  spec.a = 1.0;
  spec.b = 1.0;
  const auto r = check_assumption_3(spec, interval_sampling(-10.0, 10.0, 201));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(std::abs(r.witness.s), 10.0);
}

TEST(Assumption3, RejectsBAtLeastTwo) {
  auto spec = poly({0.0, 1.0});
  spec.a = 10.0;
  spec.b = 10.0;
  EXPECT_THROW(check_assumption_3(spec, interval_sampling(-1.0, 1.0, 3)), PreconditionError);
  spec.b = 2.0;
  EXPECT_THROW(check_assumption_3(spec, interval_sampling(-1.0, 1.0, 3)), PreconditionError);
}

TEST(BallExample, AssumptionsOneAndTwoOnNonNegativeS) {
  const auto spec = problems::ball_example(3);
  const auto s = HypothesisSampling::make(example_ball, 17, 1e-2, 1e2, 9, 0.0, 1000.0, 101);
  EXPECT_TRUE(check_assumption_1(spec, s).pass);
  EXPECT_TRUE(check_assumption_2(spec, s).pass);
}

TEST(BallExample, AssumptionsOneAndTwoFailForNegativeS) {
  const auto spec = problems::ball_example(3);
  const auto s = HypothesisSampling::make(example_ball, 17, 1e-2, 1e2, 17, -1000.0, 1000.0, 201);
  const auto r1 = check_assumption_1(spec, s);
  const auto r2 = check_assumption_2(spec, s);
  EXPECT_FALSE(r1.pass);
  EXPECT_LT(r1.witness.s, 0.0);
  EXPECT_FALSE(r2.pass);
  EXPECT_LT(r2.witness.s, 0.0);
  // (1) margin at s = -50, large t: (1-c)(s^2+100s) + 8.4 - 8c - 100 g with c -> 0.99
  const double c = 0.99 + 0.01 * std::exp(-r1.witness.t);
  double g = 0.01;
  for (double xk : r1.witness.x) g -= xk * xk;
  g *= 0.001;
  const double s1 = r1.witness.s;
  EXPECT_NEAR(r1.worst_margin, (1 - c) * (s1 * s1 + 100 * s1) + 8.4 - 8 * c - 100 * g, 1e-9);
}

TEST(BallExample, AssumptionFour) {
  const auto spec = problems::ball_example(3);
  const auto s = HypothesisSampling::make(example_ball, 33, 1e-2, 1e2, 17, -1000.0, 1000.0, 3);
  const auto r = check_assumption_4(spec, example_constants(), s);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(*r.rhs, 86.0932, 1e-3);
  EXPECT_LT(std::abs(*r.lhs - 162.872) / 162.872, 0.02);
  EXPECT_GT(*r.lhs, *r.rhs);
}

TEST(BallExample, RhsFromPublishedK) {
  EXPECT_NEAR(9 * 8.82557 + 6.66307, 86.0932, 1e-4);
  auto spec = problems::ball_example(3);
  ConstantsReport c = example_constants();
  EXPECT_NEAR(assumption4_rhs(spec, c), 86.0932, 1e-3);
}

TEST(Assumption4, HugeGrowthConstantsFail) {
  auto spec = problems::ball_example(3);
  spec.m1 = 1e6;
  const auto s = HypothesisSampling::make(example_ball, 9, 1e-2, 1e2, 5, -1.0, 1.0, 3);
  const auto r = check_assumption_4(spec, example_constants(), s);
  EXPECT_FALSE(r.pass);
  EXPECT_THROW(admissible_interval(spec, example_constants(), r), EmptyIntervalError);
}

TEST(Assumption4, BetaBelowAlphaKappa) {
  auto spec = problems::ball_example(3);
  spec.beta = 1.0;
  const auto s = HypothesisSampling::make(example_ball, 9, 1e-2, 1e2, 5, -1.0, 1.0, 3);
  EXPECT_THROW(check_assumption_4(spec, example_constants(), s), PreconditionError);
}

TEST(Interval, TheoremConventionArithmetic) {
  auto spec = problems::ball_example(3);
  spec.mu = 10.0;
  const auto iv = admissible_interval(spec, example_constants(), fake_report4(200.0, 100.0));
  EXPECT_NEAR(iv.theorem_scale, 1400.0, 1e-9);
  EXPECT_NEAR(iv.theorem_convention.first, 7.0, 1e-12);
  EXPECT_NEAR(iv.theorem_convention.second, 14.0, 1e-12);
  EXPECT_TRUE(iv.mu_in_theorem);
  EXPECT_FALSE(iv.mu_in_example);
  EXPECT_LT(iv.example_convention.first, iv.example_convention.second);
}

TEST(Interval, EqualSidesAreEmpty) {
  EXPECT_THROW(admissible_interval(problems::ball_example(3), example_constants(), fake_report4(100.0, 100.0)),
               EmptyIntervalError);
}

TEST(Interval, PublishedMembership) {
  auto spec = problems::ball_example(3);
  const auto iv = admissible_interval(spec, example_constants(), fake_report4(162.872, 86.0932));
  EXPECT_TRUE(iv.mu_in_example);
  EXPECT_FALSE(iv.mu_in_theorem);
}

TEST(Interval, MembershipComputedTwoWaysAgrees) {
  auto spec = problems::ball_example(3);
  for (double mu : {0.001, 0.006, 0.00614, 0.0062, 0.01, 0.0116, 0.0117, 0.02, 5.0, 12.0}) {
    spec.mu = mu;
    const auto iv = admissible_interval(spec, example_constants(), fake_report4(162.872, 86.0932));
    EXPECT_EQ(iv.mu_in_example, mu_in_example_interval(mu, 162.872, 86.0932)) << mu;
  }
}

TEST(Properties, RefinementNeverTurnsFailIntoPass) {
  const auto spec = problems::ball_example(3);
  const auto coarse = HypothesisSampling::make(example_ball, 9, 1e-2, 1e2, 5, -1000.0, 1000.0, 11);
  const auto fine = HypothesisSampling::make(example_ball, 17, 1e-2, 1e2, 9, -1000.0, 1000.0, 21);
  for (auto check : {check_assumption_1, check_assumption_2}) {
    const auto a = check(spec, coarse);
    const auto b = check(spec, fine);
    EXPECT_LE(b.worst_margin, a.worst_margin + 1e-9 * std::abs(a.worst_margin));
    if (!a.pass) EXPECT_FALSE(b.pass);
  }
}

TEST(Properties, AssumptionOneImpliesIntegratedBound) {
  const auto spec = problems::ball_example(3);
  const auto s = HypothesisSampling::make(example_ball, 9, 1e-2, 1e2, 5, 0.0, 1000.0, 201);
  ASSERT_TRUE(check_assumption_1(spec, s).pass);
  const Grid& grid = *s.x_grid;
  for (std::size_t i : grid.interior_nodes()) {
    const auto x = grid.coords(i);
    double g = 0.01;
    for (double xk : x) g -= xk * xk;
    g *= 0.001;
    const double lap_g = -0.006;
    for (double t : s.t_samples) {
      for (double eta : s.s_samples) {
        const double bound = (0.5 * eta * eta - eta * g + eta * lap_g) / spec.mu + spec.m1 * std::abs(eta) +
                             spec.m2 * std::pow(std::abs(eta), spec.q) / spec.q;
        EXPECT_LE(f_tilde(spec, x, t, eta), bound + 1e-9 * std::abs(bound));
      }
    }
  }
}

TEST(Properties, DeterministicAcrossThreadCounts) {
  const auto spec = problems::ball_example(3);
  const auto s = HypothesisSampling::make(example_ball, 9, 1e-2, 1e2, 5, -1000.0, 1000.0, 21);
  setenv("TRISOL_THREADS", "1", 1);
  const auto a = check_assumption_2(spec, s);
  setenv("TRISOL_THREADS", "5", 1);
  const auto b = check_assumption_2(spec, s);
  unsetenv("TRISOL_THREADS");
  EXPECT_EQ(a.worst_margin, b.worst_margin);
  EXPECT_EQ(a.witness.x, b.witness.x);
  EXPECT_EQ(a.witness.t, b.witness.t);
  EXPECT_EQ(a.witness.s, b.witness.s);
}
