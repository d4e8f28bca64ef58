#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "trisol/constants.hpp"
#include "trisol/functionals.hpp"
#include "trisol/geometry.hpp"

namespace trisol {

std::vector<double> linspace(double lo, double hi, int count);
std::vector<double> logspace(double lo, double hi, int count);

/// Sample boxes for the pointwise inequalities. The x samples are the interior
/// nodes of a Cartesian lattice over the domain.
struct HypothesisSampling {
  GridPtr x_grid;
  std::vector<double> t_samples;
  std::vector<double> s_samples;

  /// Defaults: 33 x-nodes per axis, 17 log-spaced t values, 201 s values.
  static HypothesisSampling make(const Domain& domain, int x_per_axis, double t_min, double t_max, int t_count,
                                 double s_min, double s_max, int s_count);
};

struct Witness {
  std::vector<double> x;
  double t = 0.0;
  double s = 0.0;
};

/// Outcome of one sampled inequality; worst_margin >= 0 means it holds everywhere sampled.
struct AssumptionReport {
  int id = 0;
  std::string statement;
  bool pass = false;
  bool boundary_pass = false;
  double worst_margin = 0.0;
  double tolerance = 0.0;
  Witness witness;
  std::array<std::size_t, 3> sample_counts{};
  std::pair<double, double> s_range{};
  std::pair<double, double> t_range{};
  // assumption (4) only
  std::optional<double> lhs;
  std::optional<double> rhs;
};

void to_json(nlohmann::json& j, const AssumptionReport& r);

/// (1): F(x,t,s) <= m1 + m2 |s|^{q-1} + (1/mu)(s - g(x) + Lap g(x)).
AssumptionReport check_assumption_1(const ProblemSpec& spec, const HypothesisSampling& sampling);
/// (2): F~(x,t,eta) >= (1/mu)(eta^2/2 - eta g(x) + eta Lap g(x)).
AssumptionReport check_assumption_2(const ProblemSpec& spec, const HypothesisSampling& sampling);
/// (3): F~(x,t,eta) <= a(1 + |eta|^b) + (1/mu)(eta^2/2 - eta g + eta Lap g). Requires b < 2.
AssumptionReport check_assumption_3(const ProblemSpec& spec, const HypothesisSampling& sampling);
/// (4): inf_x (F~(x,t,beta) - (1/mu)(beta^2/2 - beta g + beta Lap g)) / beta^2
///      > m1 K1/alpha + m2 K2 alpha^{q-2}, inf over the x and t samples.
AssumptionReport check_assumption_4(const ProblemSpec& spec, const ConstantsReport& constants,
                                    const HypothesisSampling& sampling);

/// m1 K1 / alpha + m2 K2 alpha^{q-2}.
double assumption4_rhs(const ProblemSpec& spec, const ConstantsReport& constants);

struct AdmissibleInterval {
  double delta1_inv = 0.0;
  double delta2_inv = 0.0;
  std::pair<double, double> example_convention{};
  std::pair<double, double> theorem_convention{};
  double theorem_scale = 0.0;
  bool mu_in_example = false;
  bool mu_in_theorem = false;
};

void to_json(nlohmann::json& j, const AdmissibleInterval& a);

/// Both conventions: ]1/lhs, 1/rhs[ and 2(2^N-1)/D^2 times it. Throws
/// EmptyIntervalError when lhs <= rhs, PreconditionError when report4 failed.
AdmissibleInterval admissible_interval(const ProblemSpec& spec, const ConstantsReport& constants,
                                       const AssumptionReport& report4);

/// Membership decided from lhs and rhs directly: mu lhs > 1 and mu rhs < 1.
bool mu_in_example_interval(double mu, double lhs, double rhs);

}  // namespace trisol
