#include <gtest/gtest.h>

#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "trisol/errors.hpp"
#include "trisol/problems.hpp"
#include "trisol/solver.hpp"

using namespace trisol;

namespace {

constexpr double pi = std::numbers::pi;

GridPtr interval(int nodes) { return Grid::cartesian_nodes(Domain::box({0.0}, {1.0}), nodes); }

ProblemSpec double_well(double mu) {
  ProblemSpec spec;
  spec.nonlinearity = problems::cubic_logistic(mu);
  spec.mu = mu;
  spec.beta = 1.0;
  return spec;
}

// -u'' = lambda u + |u| with g = 0, mu = 1: F(s) = (lambda + 1) s + |s|.
ProblemSpec kinked_linear(double lambda) {
  ProblemSpec spec;
  spec.nonlinearity.name = "kinked";
  spec.nonlinearity.primitive = [lambda](Point, double, double s) { return (lambda + 1.0) * s + std::abs(s); };
  spec.nonlinearity.antiderivative = [lambda](Point, double, double e) {
    return 0.5 * (lambda + 1.0) * e * e + 0.5 * e * std::abs(e);
  };
  spec.mu = 1.0;
  return spec;
}

double sup_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double sup(const Field& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST(Descend, CriticalStartReturnsImmediately) {
  const CriticalPointSolver solver(FrozenProblem(double_well(15.0), interval(65), 1.0));
  const auto cp = solver.descend(Field(solver.problem().grid()));
  EXPECT_TRUE(cp.converged());
  EXPECT_EQ(cp.iterations, 0);
  EXPECT_EQ(cp.energy, 0.0);
}

TEST(Descend, LinearProblemMatchesConjugateGradient) {
  // F = 0: -u'' + u = g - g'' with g = sin(pi x) + x(1 - x)
  ProblemSpec spec;
  spec.nonlinearity = problems::polynomial({0.0});
  spec.g = [](Point x) { return std::sin(pi * x[0]) + x[0] * (1.0 - x[0]); };
  spec.lap_g = [](Point x) { return -pi * pi * std::sin(pi * x[0]) - 2.0; };
  const auto grid = interval(257);
  const FrozenProblem problem(spec, grid, 1.0);

  std::vector<double> diag(grid->size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid->size()));
  for (std::size_t i = 0; i < grid->size(); ++i) {
    diag[i] = grid->cell_volume(i);
    if (grid->interior(i)) rhs[i] = grid->cell_volume(i) * (problem.g()[i] - problem.lap_g()[i]);
  }
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-14);
  cg.setMaxIterations(100000);
  const Eigen::SparseMatrix<double> matrix = oracle::assemble(*grid, diag);
  cg.compute(matrix);
  const Eigen::VectorXd exact = cg.solve(rhs);

  const CriticalPointSolver solver(problem);
  const auto cp = solver.descend(Field(grid), {.tol = 1e-10});
  ASSERT_TRUE(cp.converged());
  double err = 0.0;
  for (std::size_t i = 0; i < grid->size(); ++i) err = std::max(err, std::abs(cp.u[i] - exact[i]));
  EXPECT_LT(err, 1e-8);
  // continuous solution is g itself
  EXPECT_LT(sup_diff(cp.u, problem.g()), 1e-3);
}

TEST(Descend, EnergyNonIncreasingAlongLog) {
  const CriticalPointSolver solver(FrozenProblem(kinked_linear(1.0), interval(129), 1.0));
  const auto cp = solver.descend(smoothed_noise(solver.problem().grid(), 3, 1.0));
  ASSERT_GT(cp.log.size(), 2u);
  for (std::size_t k = 1; k < cp.log.size(); ++k) {
    EXPECT_LE(cp.log[k].energy, cp.log[k - 1].energy) << k;
  }
  EXPECT_LT(cp.log.back().energy, cp.log.front().energy);
}

TEST(Descend, DoubleWellEnergyMonotone) {
  const CriticalPointSolver solver(FrozenProblem(double_well(15.0), interval(129), 1.0));
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto cp = solver.descend(smoothed_noise(solver.problem().grid(), s, 1.0));
    EXPECT_TRUE(cp.converged());
    for (std::size_t k = 1; k < cp.log.size(); ++k) EXPECT_LE(cp.log[k].energy, cp.log[k - 1].energy);
  }
}

TEST(MountainPass, DoubleWellSaddleIsZero) {
  const CriticalPointSolver solver(FrozenProblem(double_well(15.0), interval(129), 1.0));
  const auto grid = solver.problem().grid();
  const Field plus = solver.descend(Field::sample(grid, [](Point x) { return std::sin(pi * x[0]); })).u;
  const Field minus = -1.0 * plus;
  std::vector<IterationRecord> log;
  const auto mp = solver.mountain_pass(plus, minus, {}, &log);
  EXPECT_TRUE(mp.converged());
  EXPECT_LT(mp.grad_norm, 1e-8);
  EXPECT_LT(sup(mp.u), 1e-6);
  EXPECT_EQ(mp.kind, PointKind::mountain_pass);
  EXPECT_GE(mp.energy, solver.problem().i_mu(plus));
}

TEST(MountainPass, AsymmetricStartStillFindsSaddle) {
  const CriticalPointSolver solver(FrozenProblem(double_well(15.0), interval(129), 1.0));
  const auto grid = solver.problem().grid();
  const Field plus = solver.descend(Field::sample(grid, [](Point x) { return std::sin(pi * x[0]); })).u;
  const Field minus = -1.0 * plus;
  MountainPassOptions opts;
  opts.path_points = 9;
  const auto mp = solver.mountain_pass(plus, minus, opts);
  EXPECT_TRUE(mp.converged());
  EXPECT_LT(mp.grad_norm, 1e-8);
}

TEST(MountainPass, IdenticalEndpoints) {
  const CriticalPointSolver solver(FrozenProblem(double_well(15.0), interval(65), 1.0));
  const Field u = smoothed_noise(solver.problem().grid(), 1, 1.0);
  EXPECT_THROW(solver.mountain_pass(u, u), PreconditionError);
}

TEST(MountainPass, ConvexEnergyCollapses) {
  ProblemSpec spec;
  spec.nonlinearity = problems::polynomial({0.0});
  const CriticalPointSolver solver(FrozenProblem(spec, interval(65), 1.0));
  const auto grid = solver.problem().grid();
  EXPECT_THROW(solver.mountain_pass(Field(grid), smoothed_noise(grid, 2, 1.0)), PathCollapseError);
}

TEST(FindThree, DoubleWellMatchesShootingOracle) {
  const auto grid = interval(513);
  FindThreeOptions opts;
  const auto set = find_three(double_well(15.0), 1.0, grid, opts);
  ASSERT_EQ(set.points.size(), 3u);
  EXPECT_FALSE(set.warning.has_value());
  const auto oracle = oracle::positive_branch(15.0, 512);
  int matched = 0;
  for (const auto& p : set.points) {
    EXPECT_TRUE(p.converged());
    EXPECT_LT(p.grad_norm, 1e-8);
    EXPECT_LT(p.weak_residual, 1e-8);
    double plus = 0.0;
    double minus = 0.0;
    for (std::size_t i = 0; i < grid->size(); ++i) {
      const double x = grid->abscissa(i);
      const double o = (x < 0.0 || x > 1.0) ? 0.0 : oracle[static_cast<std::size_t>(std::lround(x * 512))];
      plus = std::max(plus, std::abs(p.u[i] - o));
      minus = std::max(minus, std::abs(p.u[i] + o));
    }
    if (std::min(plus, minus) < 1e-3) ++matched;
    if (p.kind == PointKind::mountain_pass) EXPECT_LT(sup(p.u), 1e-6);
  }
  EXPECT_EQ(matched, 2);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) EXPECT_GT(set.pairwise_l2_distances[i][j], 1e-2);
  }
}

TEST(FindThree, InvariantsOfTheSet) {
  const auto grid = interval(129);
  const auto set = find_three(double_well(15.0), 1.0, grid);
  for (std::size_t k = 1; k < set.points.size(); ++k) {
    EXPECT_LE(set.points[k - 1].energy, set.points[k].energy);
  }
  for (const auto& p : set.points) {
    for (std::size_t i = 0; i < p.u.size(); ++i) {
      if (!grid->interior(i)) EXPECT_EQ(p.u[i], 0.0);
    }
    EXPECT_TRUE(std::isfinite(p.energy));
  }
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    for (std::size_t j = 0; j < set.points.size(); ++j) {
      if (i != j) EXPECT_GT(set.pairwise_l2_distances[i][j], set.distinctness_threshold);
    }
  }
  double low = std::numeric_limits<double>::infinity();
  for (const auto& p : set.points) {
    if (p.kind == PointKind::minimizer) low = std::min(low, p.energy);
  }
  for (const auto& p : set.points) {
    if (p.kind == PointKind::mountain_pass) EXPECT_GE(p.energy, low);
  }
}

TEST(FindThree, ConvexInstanceWarns) {
  ProblemSpec spec;
  spec.nonlinearity = problems::polynomial({0.0, 1.0});
  spec.mu = 1.0;
  const auto set = find_three(spec, 1.0, interval(65));
  EXPECT_EQ(set.points.size(), 1u);
  ASSERT_TRUE(set.warning.has_value());
  EXPECT_NE(set.warning->find("fewer-than-three"), std::string::npos);
}

TEST(FindThree, Deterministic) {
  const auto grid = interval(129);
  FindThreeOptions opts;
  opts.seed = 9;
  const auto a = find_three(double_well(15.0), 1.0, grid, opts);
  const auto b = find_three(double_well(15.0), 1.0, grid, opts);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    EXPECT_EQ(a.points[k].energy, b.points[k].energy);
    EXPECT_TRUE(std::equal(a.points[k].u.values().begin(), a.points[k].u.values().end(),
                           b.points[k].u.values().begin()));
  }
  EXPECT_EQ(nlohmann::json(a).dump(), nlohmann::json(b).dump());
}

TEST(WeakForm, PerturbationScalesLinearly) {
  const auto grid = interval(257);
  const CriticalPointSolver solver(FrozenProblem(double_well(15.0), grid, 1.0));
  const Field u = solver.descend(Field::sample(grid, [](Point x) { return std::sin(pi * x[0]); })).u;
  EXPECT_LT(solver.verify_weak_form(u, 20), 1e-8);
  const Field noise = smoothed_noise(grid, 77, 1.0);
  const double r2 = solver.verify_weak_form(u + 1e-2 * noise, 20);
  const double r4 = solver.verify_weak_form(u + 1e-4 * noise, 20);
  EXPECT_GT(r2 / r4, 30.0);
  EXPECT_LT(r2 / r4, 300.0);
}

TEST(WeakForm, AgreesWithDualNormBound) {
  const auto grid = interval(129);
  const CriticalPointSolver solver(FrozenProblem(double_well(15.0), grid, 1.0));
  const Field u = smoothed_noise(grid, 5, 1.0);
  // sup over v of <r, v>/|v| is the dual norm, so sampled v cannot exceed it
  EXPECT_LE(solver.verify_weak_form(u, 20), solver.dual_norm(solver.problem().gradient(u)) * (1.0 + 1e-12));
}

TEST(GradientCheck, BallExampleTwoDimensions) {
  const auto grid = Grid::cartesian_nodes(Domain::ball({0.0, 0.0}, 0.1), 33);
  const FrozenProblem p(problems::ball_example(2), grid, 1.0);
  EXPECT_LT(gradient_check(p, 100, 42), 1e-6);
}

TEST(Noise, SeededAndScaled) {
  const auto grid = interval(65);
  const Field a = smoothed_noise(grid, 4, 2.5);
  const Field b = smoothed_noise(grid, 4, 2.5);
  EXPECT_NEAR(sup(a), 2.5, 1e-12);
  EXPECT_EQ(sup_diff(a, b), 0.0);
  EXPECT_GT(sup_diff(a, smoothed_noise(grid, 5, 2.5)), 0.0);
}
