#pragma once

#include <vector>

#include "trisol/functionals.hpp"

namespace trisol::problems {

/// Time factor (99/100)(1 + e^{-t}/99) of the ball example.
double example_time_factor(double t);

/// Ball example: f = (99/(100t))(1 + e^{-t}/99)(8 + 100s + s^2),
/// F = (99/100)(1 + e^{-t}/99)(8 + 100s + s^2), g = 0.001(0.01 - |x|^2),
/// Lap g = -0.002 N. With `closed_form_primitive = false` only f is supplied
/// and F has to come from the (divergent) time quadrature.
ProblemSpec ball_example(int dim = 3, bool closed_form_primitive = true);

/// F(s) = s - s^3 + s/mu, g = 0: the frozen equation becomes -u'' = mu u (1 - u^2).
Nonlinearity cubic_logistic(double mu);

/// F(s) = sum_k coefficients[k] s^k, independent of (x, t).
Nonlinearity polynomial(std::vector<double> coefficients);

}  // namespace trisol::problems
