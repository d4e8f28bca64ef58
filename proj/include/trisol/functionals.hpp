#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trisol/geometry.hpp"

namespace trisol {

/// Scalar function of (x, t, s).
using SpaceTimeFn = std::function<double(Point x, double t, double s)>;
using SpatialFn = std::function<double(Point x)>;

/// Nonlinearity of the frozen-time problem  -Lap u = mu F(x,t,u) - u + g - Lap g.
///
/// `primitive` is F(x,t,s) = int_0^t f(x,tau,s) dtau. When empty it is obtained
/// from `source` by quadrature. `antiderivative` is the closed form of
/// F~(x,t,eta) = int_0^eta F(x,t,s) ds, supplied when F is polynomial in s;
/// when empty F~ is computed by quadrature. `primitive_ds` = dF/ds is used by
/// Newton refinement; a central difference replaces it when empty.
struct Nonlinearity {
  std::string name;
  SpaceTimeFn source;
  SpaceTimeFn primitive;
  SpaceTimeFn antiderivative;
  SpaceTimeFn primitive_ds;
};

/// Full problem instance. g must vanish on the boundary; lap_g may be left
/// empty, in which case it is computed as -apply_neg_laplacian(g) on the grid.
struct ProblemSpec {
  Nonlinearity nonlinearity;
  SpatialFn g;
  SpatialFn lap_g;
  double mu = 1.0;
  double q = 2.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double a = 1.0;
  double b = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  std::vector<double> t_grid{1.0};
  double t_min = 1e-2;
};

/// Precondition violations as "field: message" strings (empty when valid).
/// Pass kappa to also check beta > alpha kappa.
std::vector<std::string> validate(const ProblemSpec& spec, std::optional<double> kappa = std::nullopt);

struct QuadratureSettings {
  double cutoff = 1e-8;      ///< lower limit eps0 of the time integral
  double tolerance = 1e-9;   ///< absolute tolerance scaled by (1 + |result|)
  double drift_limit = 0.01; ///< relative change between eps0 and eps0/100 that signals divergence
};

/// F(x,t,s): user closed form, or the cut-off time integral of the source.
double big_f(const ProblemSpec& spec, Point x, double t, double s, const QuadratureSettings& quad = {});

/// F~(x,t,eta) = int_0^eta F(x,t,s) ds.
double f_tilde(const ProblemSpec& spec, Point x, double t, double eta, const QuadratureSettings& quad = {});

/// dF/ds at (x,t,s).
double big_f_ds(const ProblemSpec& spec, Point x, double t, double s);

struct EnergyBreakdown {
  double phi = 0.0;
  double vartheta = 0.0;
  double i_mu = 0.0;
  /// Discrete L2 norm of the strong-form residual.
  double grad_norm = 0.0;
  double t = 0.0;
};

void to_json(nlohmann::json& j, const EnergyBreakdown& e);

/// The energy I_mu = phi - mu vartheta at a frozen time t on one grid, with g
/// and Lap g sampled once.
///
/// Discrete energy:
///   I(u) = 1/2 sum_links w (u_a - u_b)^2
///        + sum_i vol_i ( -mu F~(x_i,t,u_i) + u_i^2/2 - g_i u_i + (Lap g)_i u_i ).
/// `gradient` returns dI/du_i, i.e. vol_i times the strong residual, so that
/// <gradient(u), v> is the directional derivative of I at u along v.
class FrozenProblem {
 public:
  FrozenProblem(ProblemSpec spec, GridPtr grid, double t, QuadratureSettings quad = {});

  const ProblemSpec& spec() const { return spec_; }
  const GridPtr& grid() const { return grid_; }
  double t() const { return t_; }
  const Field& g() const { return g_; }
  const Field& lap_g() const { return lap_g_; }

  EnergyBreakdown energy(const Field& u) const;
  double i_mu(const Field& u) const;
  /// I(u + s) - I(u) without cancellation against I(u); the F~ increment is
  /// integrated with 5-point Gauss-Legendre over [u_i, u_i + s_i].
  double energy_difference(const Field& u, const Field& s) const;
  Field gradient(const Field& u) const;
  /// Per-node F(x_i, t, u_i) (zero off the interior).
  std::vector<double> nonlinearity_values(const Field& u) const;
  /// vol_i (1 - mu dF/ds(x_i,t,u_i)): the non-stiffness part of the Hessian.
  std::vector<double> hessian_diagonal(const Field& u) const;

 private:
  ProblemSpec spec_;
  GridPtr grid_;
  double t_;
  QuadratureSettings quad_;
  Field g_;
  Field lap_g_;
};

EnergyBreakdown energy(const ProblemSpec& spec, const Field& u, double t);
Field gradient(const ProblemSpec& spec, const Field& u, double t);

}  // namespace trisol
