#include "trisol/problems.hpp"

#include <cmath>

namespace trisol::problems {

double example_time_factor(double t) { return 0.99 * (1.0 + std::exp(-t) / 99.0); }

ProblemSpec ball_example(int dim, bool closed_form_primitive) {
  ProblemSpec spec;
  spec.nonlinearity.name = "ball_example";
  spec.nonlinearity.source = [](Point, double t, double s) {
    return 0.99 / t * (1.0 + std::exp(-t) / 99.0) * (8.0 + 100.0 * s + s * s);
  };
  if (closed_form_primitive) {
    spec.nonlinearity.primitive = [](Point, double t, double s) {
      return example_time_factor(t) * (8.0 + 100.0 * s + s * s);
    };
    spec.nonlinearity.antiderivative = [](Point, double t, double eta) {
      return example_time_factor(t) * (8.0 * eta + 50.0 * eta * eta + eta * eta * eta / 3.0);
    };
    spec.nonlinearity.primitive_ds = [](Point, double t, double s) {
      return example_time_factor(t) * (100.0 + 2.0 * s);
    };
  }
  spec.g = [](Point x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return 0.001 * (0.01 - r2);
  };
  spec.lap_g = [dim](Point) { return -0.002 * dim; };
  spec.mu = 0.01;
  spec.q = 3.0;
  spec.m1 = 9.0;
  spec.m2 = 1.0;
  spec.a = 10.0;
  spec.b = 10.0;
  spec.alpha = 1.0;
  spec.beta = 500.0;
  spec.t_grid = {1.0};
  spec.t_min = 1e-2;
  return spec;
}

Nonlinearity cubic_logistic(double mu) {
  Nonlinearity n;
  n.name = "cubic_logistic";
  const double shift = 1.0 / mu;
  n.primitive = [shift](Point, double, double s) { return s - s * s * s + shift * s; };
  n.antiderivative = [shift](Point, double, double eta) {
    const double e2 = eta * eta;
    return 0.5 * e2 - 0.25 * e2 * e2 + 0.5 * shift * e2;
  };
  n.primitive_ds = [shift](Point, double, double s) { return 1.0 - 3.0 * s * s + shift; };
  return n;
}

Nonlinearity polynomial(std::vector<double> coefficients) {
  Nonlinearity n;
  n.name = "polynomial";
  n.primitive = [c = coefficients](Point, double, double s) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
    return acc;
  };
  n.antiderivative = [c = coefficients](Point, double, double eta) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * eta + c[k] / static_cast<double>(k + 1);
    return acc * eta;
  };
  n.primitive_ds = [c = std::move(coefficients)](Point, double, double s) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) acc = acc * s + static_cast<double>(k) * c[k];
    return acc;
  };
  return n;
}

}  // namespace trisol::problems
