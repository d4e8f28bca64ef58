#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "trisol/constants.hpp"
#include "trisol/errors.hpp"
#include "trisol/hypotheses.hpp"
#include "trisol/problems.hpp"
#include "trisol/testfn.hpp"

using namespace trisol;

namespace {

constexpr double pi = std::numbers::pi;

double discrete_phi_error(double h) {
  const auto grid = Grid::cartesian(Domain::ball({0.0, 0.0}, 1.0), h);
  const std::vector<double> x0{0.0, 0.0};
  const Field u = build_u_beta(grid, x0, 1.0, 1.0);
  const double closed = phi_u_beta_closed(1.0, 2, 1.0);
  return std::abs(0.5 * h10_norm_sq(u) - closed) / closed;
}

ProblemSpec toy_spec(double beta) {
  ProblemSpec spec;
  spec.nonlinearity = problems::polynomial({0.0, 2.0});  // F~ = eta^2
  spec.mu = 1.0;
  spec.beta = beta;
  return spec;
}

}  // namespace

TEST(UBeta, ProfileValues) {
  EXPECT_EQ(u_beta_profile(0.0, 0.4, 7.0), 7.0);
  EXPECT_DOUBLE_EQ(u_beta_profile(0.3, 0.4, 7.0), 3.5);
  EXPECT_EQ(u_beta_profile(0.4, 0.4, 7.0), 0.0);
  EXPECT_EQ(u_beta_profile(2.0, 0.4, 7.0), 0.0);
  EXPECT_DOUBLE_EQ(u_beta_profile(0.2, 0.4, 7.0), 7.0);
}

TEST(UBeta, FieldValuesAndDirichlet) {
  const auto grid = Grid::cartesian(Domain::box({-1.0, -1.0}, {1.0, 1.0}), 1.0 / 8.0);
  const std::vector<double> x0{0.0, 0.0};
  const Field u = build_u_beta(grid, x0, 1.0, 2.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto x = grid->coords(i);
    const double r = std::hypot(x[0], x[1]);
    if (!grid->interior(i) || r >= 1.0) EXPECT_EQ(u[i], 0.0);
    if (r == 0.0) EXPECT_EQ(u[i], 2.0);
    if (std::abs(r - 0.75) < 1e-12) EXPECT_DOUBLE_EQ(u[i], 1.0);
  }
}

TEST(UBeta, BallMustBeContained) {
  const auto grid = Grid::cartesian(Domain::ball({0.0, 0.0}, 1.0), 1.0 / 8.0);
  const std::vector<double> off{0.2, 0.0};
  EXPECT_THROW(build_u_beta(grid, off, 1.0, 1.0), BallNotContainedError);
  EXPECT_NO_THROW(build_u_beta(grid, off, 0.8, 1.0));
}

TEST(UBeta, ClosedFormPhi) {
  EXPECT_NEAR(phi_u_beta_closed(1.0, 2, 1.0), 1.5 * pi, 1e-12);
  EXPECT_EQ(phi_u_beta_closed(1.0, 3, 0.0), 0.0);
  EXPECT_GT(phi_u_beta_closed(0.1, 3, -2.0), 0.0);
}

TEST(UBeta, DiscretePhiAtFineGrid) { EXPECT_LT(discrete_phi_error(1.0 / 256.0), 0.02); }

TEST(UBeta, DiscretePhiConverges) {
  const double coarse = discrete_phi_error(1.0 / 64.0);
  const double fine = discrete_phi_error(1.0 / 128.0);
  EXPECT_GE(coarse / fine, 1.5);
  EXPECT_LT(fine, 0.02);
}

TEST(UBeta, AlphaSquaredBelowPhiWhenBetaExceedsAlphaKappa) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const int n = 3 + static_cast<int>(4 * unit(rng));
    const double d = 0.01 + 3.0 * unit(rng);
    const double alpha = 0.01 + 5.0 * unit(rng);
    const double beta = alpha * kappa(d, n) * (1.0 + 1e-6 + unit(rng));
    EXPECT_LT(alpha * alpha, phi_u_beta_closed(d, n, beta));
    // equality exactly at beta = alpha kappa
    EXPECT_NEAR(phi_u_beta_closed(d, n, alpha * kappa(d, n)), alpha * alpha, 1e-10 * alpha * alpha);
  }
}

TEST(Chi, VanishingGrowth) { EXPECT_EQ(chi_upper_bound(1.0, 0.0, 0.0, 3.0, 0.3, 0.4), 0.0); }

TEST(Chi, PublishedInputs) {
  const double c1 = 0.00445759;
  const double cq = 0.171543;
  const double direct = std::sqrt(2.0) * c1 * 9.0 + std::pow(2.0, 1.5) * std::pow(cq, 3) / 3.0;
  EXPECT_NEAR(chi_upper_bound(1.0, 9.0, 1.0, 3.0, c1, cq), direct, 1e-15);
  const auto [k1, k2] = k1_k2(0.1, 3, 3.0, c1, cq);
  const double scale = 0.01 / (2.0 * 7.0);
  EXPECT_LT(std::abs(chi_upper_bound(1.0, 9.0, 1.0, 3.0, c1, cq) - scale * (9.0 * k1 + k2)), 1e-12 * direct);
}

TEST(Chi, IdentityWithKConstantsForAnyAlpha) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.05, 3.0);
  for (int k = 0; k < 200; ++k) {
    const int n = 3 + k % 4;
    const double d = unit(rng);
    const double q = 1.0 + 0.5 * unit(rng);
    const double c1 = unit(rng);
    const double cq = unit(rng);
    const double alpha = unit(rng);
    const double m1 = unit(rng);
    const double m2 = unit(rng);
    const auto [k1, k2] = k1_k2(d, n, q, c1, cq);
    const double scale = d * d / (2.0 * (std::ldexp(1.0, n) - 1.0));
    const double lhs = chi_upper_bound(alpha * alpha, m1, m2, q, c1, cq);
    const double rhs = scale * (m1 * k1 / alpha + m2 * k2 * std::pow(alpha, q - 2.0));
    EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::abs(rhs));
  }
}

TEST(Chi, DecaysForSubquadraticQ) {
  const double far = chi_upper_bound(1e12, 1.0, 1.0, 1.5, 0.3, 0.3);
  EXPECT_LT(far, 1e-2);
  EXPECT_LT(chi_upper_bound(1e14, 1.0, 1.0, 1.5, 0.3, 0.3), far);
}

TEST(Infimum, EqualityCaseGivesZero) {
  // F~ = eta^2/2 with mu = 1, g = 0 equals the subtracted group.
  ProblemSpec spec;
  spec.nonlinearity = problems::polynomial({0.0, 1.0});
  spec.beta = 3.0;
  const auto grid = Grid::cartesian(Domain::box({0.0}, {1.0}), 1.0 / 16);
  const auto inf = assumption4_infimum(spec, {grid, {1.0, 2.0}});
  EXPECT_EQ(inf.value, 0.0);
  ConstantsReport c;
  c.n = 1;
  c.d = 0.5;
  EXPECT_EQ(vartheta_u_beta_lower(inf.value, c), 0.0);
}

TEST(Infimum, ToyQuotientIsOneHalf) {
  const auto grid = Grid::cartesian(Domain::box({0.0}, {1.0}), 1.0 / 16);
  const auto inf = assumption4_infimum(toy_spec(4.0), {grid, {0.5, 1.0}});
  EXPECT_NEAR(inf.value / 16.0, 0.5, 1e-14);
  EXPECT_EQ(inf.t, 0.5);
  EXPECT_EQ(inf.node, grid->interior_nodes().front());
}

TEST(Infimum, BallExampleQuotient) {
  const auto spec = problems::ball_example(3);
  const auto sampling =
      HypothesisSampling::make(Domain::ball({0.0, 0.0, 0.0}, 0.1), 33, 1e-2, 1e2, 17, -1000.0, 1000.0, 3);
  const auto inf = assumption4_infimum(spec, {sampling.x_grid, sampling.t_samples});
  const double quotient = inf.value / (spec.beta * spec.beta);
  // closed form at the sampled minimum: F~ factor times (8b + 50b^2 + b^3/3) minus (1/mu)(b^2/2 - b g + b lap g)
  EXPECT_NEAR(quotient, 164.517, 0.01);
  EXPECT_LT(std::abs(quotient - 162.872) / 162.872, 0.02);
}

TEST(Report, RatioIdentityAndChain) {
  const auto spec = problems::ball_example(3);
  const Domain ball = Domain::ball({0.0, 0.0, 0.0}, 0.1);
  const auto constants = compute_constants(3, ball_volume(3, 0.1), 0.1, 3.0);
  const auto sampling = HypothesisSampling::make(ball, 17, 1e-2, 1e2, 9, -1000.0, 1000.0, 3);
  const std::vector<double> x0{0.0, 0.0, 0.0};
  const auto r = evaluate_test_function(spec, constants, Grid::radial(ball, 128), x0,
                                        {sampling.x_grid, sampling.t_samples});
  const double scale = 0.01 / (2.0 * 7.0);
  EXPECT_LT(std::abs(r.ratio_lower - scale * r.inf_quotient), 1e-12 * r.ratio_lower);
  EXPECT_LT(r.chi_alpha2_upper, r.ratio_lower);
  EXPECT_LT(std::abs(r.phi_discrete - r.phi_closed) / r.phi_closed, 0.02);
  EXPECT_LT(spec.alpha * spec.alpha, r.phi_closed);
}
