#include "trisol/testfn.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "trisol/errors.hpp"

namespace trisol {

namespace {

double unit_ball_volume(int n) {
  return std::exp(0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0));
}

}  // namespace

double u_beta_profile(double r, double d, double beta) {
  if (r >= d) return 0.0;
  if (r <= 0.5 * d) return beta;
  return 2.0 * beta / d * (d - r);
}

Field build_u_beta(const GridPtr& grid, std::span<const double> x0, double d, double beta) {
  const Domain& domain = grid->domain();
  if (static_cast<int>(x0.size()) != domain.dim()) {
    throw PreconditionError("x0 has the wrong dimension");
  }
  if (!(d > 0.0)) {
    throw PreconditionError("D must be positive");
  }
  const double depth = -domain.signed_distance(x0);
  if (depth < d * (1.0 - 1e-12)) {
    throw BallNotContainedError("B(x0, " + std::to_string(d) + ") is not contained in " + domain.describe() +
                                " (distance to boundary " + std::to_string(depth) + ")");
  }
  return Field::sample(grid, [&](Point x) {
    double r2 = 0.0;
    for (std::size_t k = 0; k < x0.size(); ++k) r2 += (x[k] - x0[k]) * (x[k] - x0[k]);
    return u_beta_profile(std::sqrt(r2), d, beta);
  });
}

double phi_u_beta_closed(double d, int n, double beta) {
  if (!(d > 0.0) || n < 1) {
    throw PreconditionError("phi(u_beta) needs D > 0 and N >= 1");
  }
  const double slope = 2.0 * beta / d;
  return 0.5 * slope * slope * unit_ball_volume(n) * (std::pow(d, n) - std::pow(0.5 * d, n));
}

double chi_upper_bound(double r, double m1, double m2, double q, double c1, double cq) {
  if (!(r > 0.0)) {
    throw PreconditionError("chi(r) needs r > 0");
  }
  return std::sqrt(2.0 / r) * c1 * m1 + std::pow(2.0, 0.5 * q) * std::pow(cq, q) * m2 / q * std::pow(r, 0.5 * q - 1.0);
}

InfResult assumption4_infimum(const ProblemSpec& spec, const InfSampling& sampling) {
  if (sampling.t_samples.empty()) {
    throw PreconditionError("need at least one t sample");
  }
  const Grid& grid = *sampling.x_grid;
  const Field g = spec.g ? Field::sample(sampling.x_grid, spec.g) : Field(sampling.x_grid);
  const Field lap_g = spec.lap_g ? Field::sample(sampling.x_grid, spec.lap_g) : -1.0 * apply_neg_laplacian(g);
  const double beta = spec.beta;
  InfResult best{std::numeric_limits<double>::infinity(), 0.0, 0};
  for (double t : sampling.t_samples) {
    for (std::size_t i : grid.interior_nodes()) {
      const double group = (0.5 * beta * beta - beta * g[i] + beta * lap_g[i]) / spec.mu;
      const double value = f_tilde(spec, grid.coords(i), t, beta) - group;
      if (value < best.value) best = {value, t, i};
    }
  }
  return best;
}

double vartheta_u_beta_lower(double infimum, const ConstantsReport& constants) {
  return infimum * unit_ball_volume(constants.n) * std::pow(constants.d, constants.n) / std::ldexp(1.0, constants.n);
}

TestFunctionReport evaluate_test_function(const ProblemSpec& spec, const ConstantsReport& constants,
                                          const GridPtr& grid, std::span<const double> x0,
                                          const InfSampling& sampling) {
  TestFunctionReport r;
  r.x0.assign(x0.begin(), x0.end());
  r.beta = spec.beta;
  r.alpha = spec.alpha;
  r.phi_closed = phi_u_beta_closed(constants.d, constants.n, spec.beta);
  if (grid) {
    const Field u = build_u_beta(grid, x0, constants.d, spec.beta);
    r.phi_discrete = 0.5 * h10_norm_sq(u);
  }
  const InfResult inf = assumption4_infimum(spec, sampling);
  r.inf_quotient = inf.value / (spec.beta * spec.beta);
  r.inf_t = inf.t;
  const auto xs = sampling.x_grid->coords(inf.node);
  r.inf_x.assign(xs.begin(), xs.end());
  r.vartheta_lower = vartheta_u_beta_lower(inf.value, constants);
  r.ratio_lower = r.vartheta_lower / r.phi_closed;
  r.chi_alpha2_upper = chi_upper_bound(spec.alpha * spec.alpha, spec.m1, spec.m2, spec.q, constants.c1, constants.cq);
  r.x_samples = static_cast<int>(sampling.x_grid->interior_nodes().size());
  r.t_samples = static_cast<int>(sampling.t_samples.size());
  return r;
}

void to_json(nlohmann::json& j, const TestFunctionReport& r) {
  j = nlohmann::json{{"x0", r.x0},
                     {"beta", r.beta},
                     {"alpha", r.alpha},
                     {"phi_closed", r.phi_closed},
                     {"phi_discrete", r.phi_discrete},
                     {"vartheta_lower", r.vartheta_lower},
                     {"ratio_lower", r.ratio_lower},
                     {"chi_alpha2_upper", r.chi_alpha2_upper},
                     {"inf_quotient", r.inf_quotient},
                     {"inf_t", r.inf_t},
                     {"inf_x", r.inf_x},
                     {"x_samples", r.x_samples},
                     {"t_samples", r.t_samples}};
}

}  // namespace trisol
