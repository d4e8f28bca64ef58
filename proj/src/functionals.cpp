#include "trisol/functionals.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "trisol/errors.hpp"

namespace trisol {

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

/// int_lo^hi f(x, tau, s) dtau in the variable log(tau), plus lo * f(lo) for [0, lo].
double cutoff_time_integral(const ProblemSpec& spec, Point x, double t, double s, double lo,
                            const QuadratureSettings& quad) {
  const auto& f = spec.nonlinearity.source;
  auto integrand = [&](double log_tau) {
    const double tau = std::exp(log_tau);
    return f(x, tau, s) * tau;
  };
  double error = 0.0;
  const double value = gauss_kronrod<double, 15>::integrate(integrand, std::log(lo), std::log(t), 25, 1e-12, &error);
  if (!std::isfinite(value) || error > quad.tolerance * (1.0 + std::abs(value))) {
    throw SingularIntegralError("time quadrature of f failed to converge at t = " + fmt(t) + ", s = " + fmt(s));
  }
  return value + lo * f(x, lo, s);
}

}  // namespace

std::vector<std::string> validate(const ProblemSpec& spec, std::optional<double> kappa) {
  std::vector<std::string> issues;
  if (!spec.nonlinearity.primitive && !spec.nonlinearity.source) {
    issues.emplace_back("problem: neither F nor f is defined");
  }
  if (!(spec.mu > 0.0)) issues.push_back("parameters.mu: must be > 0, got " + fmt(spec.mu));
  if (!(spec.q > 1.0)) issues.push_back("parameters.q: must be > 1, got " + fmt(spec.q));
  if (!(spec.m1 >= 0.0)) issues.push_back("parameters.m1: must be >= 0, got " + fmt(spec.m1));
  if (!(spec.m2 >= 0.0)) issues.push_back("parameters.m2: must be >= 0, got " + fmt(spec.m2));
  if (!(spec.a > 0.0)) issues.push_back("parameters.a: must be > 0, got " + fmt(spec.a));
  if (!(spec.b > 0.0 && spec.b < 2.0)) {
    issues.push_back("parameters.b: assumption (3) requires 0 < b < 2, got " + fmt(spec.b));
  }
  if (!(spec.alpha > 0.0)) issues.push_back("parameters.alpha: must be > 0, got " + fmt(spec.alpha));
  if (!(spec.beta > 0.0)) issues.push_back("parameters.beta: must be > 0, got " + fmt(spec.beta));
  if (kappa && !(spec.beta > spec.alpha * *kappa)) {
    issues.push_back("parameters.beta: assumption (4) requires beta > alpha*kappa = " + fmt(spec.alpha * *kappa) +
                     ", got " + fmt(spec.beta));
  }
  if (!(spec.t_min > 0.0)) issues.push_back("sampling.t_min: must be > 0, got " + fmt(spec.t_min));
  if (spec.t_grid.empty()) issues.emplace_back("t_grid: must contain at least one time");
  for (std::size_t k = 0; k < spec.t_grid.size(); ++k) {
    if (!(spec.t_grid[k] >= spec.t_min)) {
      issues.push_back("t_grid[" + std::to_string(k) + "]: must be >= t_min = " + fmt(spec.t_min) + ", got " +
                       fmt(spec.t_grid[k]));
    }
  }
  return issues;
}

double big_f(const ProblemSpec& spec, Point x, double t, double s, const QuadratureSettings& quad) {
  if (spec.nonlinearity.primitive) {
    return spec.nonlinearity.primitive(x, t, s);
  }
  if (!spec.nonlinearity.source) {
    throw PreconditionError("nonlinearity '" + spec.nonlinearity.name + "' defines neither F nor f");
  }
  if (!(t >= 0.0)) {
    throw PreconditionError("time must be non-negative");
  }
  if (t == 0.0) {
    return 0.0;
  }
  if (t <= quad.cutoff) {
    throw PreconditionError("t = " + fmt(t) + " lies below the quadrature cutoff " + fmt(quad.cutoff));
  }
  const double coarse = cutoff_time_integral(spec, x, t, s, quad.cutoff, quad);
  const double fine = cutoff_time_integral(spec, x, t, s, quad.cutoff / 100.0, quad);
  const double drift = std::abs(fine - coarse);
  if (drift > quad.drift_limit * std::abs(fine) && drift > quad.tolerance) {
    throw SingularIntegralError("F(x,t,s) = int_0^t f ds diverges: estimate moves from " + fmt(coarse) + " to " +
                                fmt(fine) + " as the cutoff shrinks from " + fmt(quad.cutoff) + " to " +
                                fmt(quad.cutoff / 100.0) + " (t = " + fmt(t) + ", s = " + fmt(s) + ")");
  }
  return fine;
}

double f_tilde(const ProblemSpec& spec, Point x, double t, double eta, const QuadratureSettings& quad) {
  if (spec.nonlinearity.antiderivative) {
    return spec.nonlinearity.antiderivative(x, t, eta);
  }
  if (eta == 0.0) {
    return 0.0;
  }
  auto integrand = [&](double s) { return big_f(spec, x, t, s, quad); };
  const double lo = std::min(0.0, eta);
  const double hi = std::max(0.0, eta);
  double error = 0.0;
  const double value = gauss_kronrod<double, 15>::integrate(integrand, lo, hi, 20, 1e-12, &error);
  if (!std::isfinite(value) || error > quad.tolerance * (1.0 + std::abs(value))) {
    throw SingularIntegralError("quadrature of F over [0, " + fmt(eta) + "] did not converge");
  }
  return eta > 0.0 ? value : -value;
}

double big_f_ds(const ProblemSpec& spec, Point x, double t, double s) {
  if (spec.nonlinearity.primitive_ds) {
    return spec.nonlinearity.primitive_ds(x, t, s);
  }
  const double h = 1e-6 * (1.0 + std::abs(s));
  return (big_f(spec, x, t, s + h) - big_f(spec, x, t, s - h)) / (2.0 * h);
}

void to_json(nlohmann::json& j, const EnergyBreakdown& e) {
  j = nlohmann::json{{"phi", e.phi}, {"vartheta", e.vartheta}, {"i_mu", e.i_mu}, {"grad_norm", e.grad_norm}, {"t", e.t}};
}

// ---------------------------------------------------------------------------

FrozenProblem::FrozenProblem(ProblemSpec spec, GridPtr grid, double t, QuadratureSettings quad)
    : spec_(std::move(spec)), grid_(std::move(grid)), t_(t), quad_(quad), g_(grid_), lap_g_(grid_) {
  if (spec_.g) {
    g_ = Field::sample(grid_, spec_.g);
  }
  if (spec_.lap_g) {
    lap_g_ = Field::sample(grid_, spec_.lap_g);
  } else {
    lap_g_ = -1.0 * apply_neg_laplacian(g_);
  }
}

EnergyBreakdown FrozenProblem::energy(const Field& u) const {
  const Grid& grid = *grid_;
  const double mu = spec_.mu;
  EnergyBreakdown e;
  e.t = t_;
  e.phi = 0.5 * h10_norm_sq(u);
  double tilde = 0.0;
  double mass = 0.0;
  double data = 0.0;
  for (std::size_t i : grid.interior_nodes()) {
    const double vol = grid.cell_volume(i);
    tilde += vol * f_tilde(spec_, grid.coords(i), t_, u[i], quad_);
    mass += vol * u[i] * u[i];
    data += vol * (g_[i] - lap_g_[i]) * u[i];
  }
  e.vartheta = tilde - mass / (2.0 * mu) + data / mu;
  // I = phi - mu vartheta with the mu * (1/mu) factors cancelled.
  e.i_mu = e.phi - mu * tilde + 0.5 * mass - data;
  const Field r = gradient(u);
  double res = 0.0;
  for (std::size_t i : grid.interior_nodes()) res += r[i] * r[i] / grid.cell_volume(i);
  e.grad_norm = std::sqrt(res);
  return e;
}

double FrozenProblem::i_mu(const Field& u) const {
  const Grid& grid = *grid_;
  double sum = 0.5 * h10_norm_sq(u);
  for (std::size_t i : grid.interior_nodes()) {
    const double v = u[i];
    sum += grid.cell_volume(i) *
           (-spec_.mu * f_tilde(spec_, grid.coords(i), t_, v, quad_) + 0.5 * v * v - (g_[i] - lap_g_[i]) * v);
  }
  return sum;
}

double FrozenProblem::energy_difference(const Field& u, const Field& s) const {
  const Grid& grid = *grid_;
  double sum = 0.0;
  for (const Link& l : grid.links()) {
    const double du = u[l.a] - u[l.b];
    const double ds = s[l.a] - s[l.b];
    sum += 0.5 * l.weight * ds * (2.0 * du + ds);
  }
  for (std::size_t i : grid.interior_nodes()) {
    const double v = u[i];
    const double step = s[i];
    if (step == 0.0) continue;
    const Point x = grid.coords(i);
    const double increment =
        gauss<double, 5>::integrate([&](double w) { return big_f(spec_, x, t_, w, quad_); }, v, v + step);
    sum += grid.cell_volume(i) * (-spec_.mu * increment + 0.5 * step * (2.0 * v + step) - (g_[i] - lap_g_[i]) * step);
  }
  return sum;
}

std::vector<double> FrozenProblem::nonlinearity_values(const Field& u) const {
  std::vector<double> out(u.size(), 0.0);
  for (std::size_t i : grid_->interior_nodes()) out[i] = big_f(spec_, grid_->coords(i), t_, u[i], quad_);
  return out;
}

Field FrozenProblem::gradient(const Field& u) const {
  const Grid& grid = *grid_;
  Field r(grid_);
  for (const Link& l : grid.links()) {
    const double flux = l.weight * (u[l.a] - u[l.b]);
    r[l.a] += flux;
    r[l.b] -= flux;
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!grid.interior(i)) {
      r[i] = 0.0;
      continue;
    }
    const double f = big_f(spec_, grid.coords(i), t_, u[i], quad_);
    r[i] += grid.cell_volume(i) * (-spec_.mu * f + u[i] - g_[i] + lap_g_[i]);
  }
  return r;
}

std::vector<double> FrozenProblem::hessian_diagonal(const Field& u) const {
  std::vector<double> out(u.size(), 0.0);
  for (std::size_t i : grid_->interior_nodes()) {
    out[i] = grid_->cell_volume(i) * (1.0 - spec_.mu * big_f_ds(spec_, grid_->coords(i), t_, u[i]));
  }
  return out;
}

EnergyBreakdown energy(const ProblemSpec& spec, const Field& u, double t) {
  return FrozenProblem(spec, u.grid_ptr(), t).energy(u);
}

Field gradient(const ProblemSpec& spec, const Field& u, double t) {
  return FrozenProblem(spec, u.grid_ptr(), t).gradient(u);
}

}  // namespace trisol
