#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "trisol/constants.hpp"
#include "trisol/functionals.hpp"
#include "trisol/geometry.hpp"

namespace trisol {

struct TestFunctionReport {
  std::vector<double> x0;
  double beta = 0.0;
  double alpha = 0.0;
  double phi_closed = 0.0;
  double phi_discrete = 0.0;
  double vartheta_lower = 0.0;
  double ratio_lower = 0.0;
  double chi_alpha2_upper = 0.0;
  /// inf_x (F~(x,t,beta) - (1/mu)(beta^2/2 - beta g + beta Lap g)) / beta^2
  double inf_quotient = 0.0;
  double inf_t = 0.0;
  std::vector<double> inf_x;
  int x_samples = 0;
  int t_samples = 0;
};

void to_json(nlohmann::json& j, const TestFunctionReport& r);

/// Cone with plateau: beta on B(x0, D/2), (2 beta/D)(D - |x - x0|) on the
/// annulus, 0 outside B(x0, D). Throws BallNotContainedError unless
/// B(x0, D) lies in the grid's domain.
Field build_u_beta(const GridPtr& grid, std::span<const double> x0, double d, double beta);

/// Radial profile of u_beta at distance r from x0.
double u_beta_profile(double r, double d, double beta);

/// 1/2 (2 beta/D)^2 pi^{N/2}/Gamma(N/2+1) (D^N - (D/2)^N).
double phi_u_beta_closed(double d, int n, double beta);

/// sqrt(2/r) c1 m1 + (2^{q/2} cq^q m2 / q) r^{q/2 - 1}.
double chi_upper_bound(double r, double m1, double m2, double q, double c1, double cq);

/// Sampled points at which the infimum over x in Omega and t is taken.
struct InfSampling {
  GridPtr x_grid;
  std::vector<double> t_samples;
};

/// Grid minimum of F~(x,t,beta) - (1/mu)(beta^2/2 - beta g(x) + beta Lap g(x)),
/// ties broken by lowest (t, node) index. Returns the value and its argmin.
struct InfResult {
  double value = 0.0;
  double t = 0.0;
  std::size_t node = 0;
};
InfResult assumption4_infimum(const ProblemSpec& spec, const InfSampling& sampling);

/// inf * pi^{N/2}/Gamma(N/2+1) * D^N / 2^N.
double vartheta_u_beta_lower(double infimum, const ConstantsReport& constants);

/// Builds the full report; `grid` is the run grid used for phi_discrete.
TestFunctionReport evaluate_test_function(const ProblemSpec& spec, const ConstantsReport& constants,
                                          const GridPtr& grid, std::span<const double> x0,
                                          const InfSampling& sampling);

}  // namespace trisol
