#include "trisol/constants.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "trisol/errors.hpp"

namespace trisol {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw PreconditionError(std::string(name) + " must be positive, got " + std::to_string(value));
  }
}

}  // namespace

double critical_exponent(int n) {
  if (n <= 2) {
    throw DimensionTooSmallError("critical exponent 2N/(N-2) needs N >= 3, got N = " + std::to_string(n));
  }
  return 2.0 * n / (n - 2.0);
}

double ball_volume(int n, double radius) {
  const double half = 0.5 * n;
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0)) * std::pow(radius, n);
}

double embedding_bound(double q, int n, double measure) {
  const double two_star = critical_exponent(n);
  if (!(q >= 1.0 && q < two_star)) {
    throw ExponentOutOfRangeError("q must lie in [1, " + std::to_string(two_star) + "[, got " + std::to_string(q));
  }
  if (!(measure >= 0.0)) {
    throw PreconditionError("measure must be non-negative");
  }
  if (measure == 0.0) {
    return 0.0;
  }
  const double exponent = (two_star - q) / (two_star * q);
  // log of N! / (2 Gamma(N/2+1))
  const double log_ratio = std::lgamma(n + 1.0) - std::log(2.0) - std::lgamma(0.5 * n + 1.0);
  const double log_bound = exponent * std::log(measure) - 0.5 * std::log(n * (n - 2.0) * std::numbers::pi) + log_ratio / n;
  return std::exp(log_bound);
}

double kappa(double d, int n) {
  require_positive(d, "D");
  if (n < 1) {
    throw PreconditionError("N must be at least 1");
  }
  const double annulus = std::pow(d, n) * (1.0 - std::pow(0.5, n));
  const double log_gamma = std::lgamma(0.5 * n + 1.0);
  return d * std::numbers::sqrt2 / (2.0 * std::pow(std::numbers::pi, 0.25 * n)) *
         std::exp(0.5 * (log_gamma - std::log(annulus)));
}

std::pair<double, double> k1_k2(double d, int n, double q, double c1, double cq) {
  require_positive(d, "D");
  if (c1 < 0.0 || cq < 0.0) {
    throw PreconditionError("embedding constants must be non-negative");
  }
  if (!(q > 0.0)) {
    throw PreconditionError("q must be positive");
  }
  const double shells = std::ldexp(1.0, n) - 1.0;
  const double d2 = d * d;
  const double k1 = 2.0 * std::numbers::sqrt2 * c1 * shells / d2;
  const double k2 = std::pow(2.0, 0.5 * (q + 2.0)) * std::pow(cq, q) * shells / (q * d2);
  return {k1, k2};
}

ConstantsReport compute_constants(int n, double measure, double d, double q) {
  ConstantsReport r;
  r.n = n;
  r.measure = measure;
  r.two_star = critical_exponent(n);
  if (!(q > 1.0 && q < r.two_star)) {
    throw ExponentOutOfRangeError("q must lie in ]1, 2*[ = ]1, " + std::to_string(r.two_star) + "[, got " +
                                  std::to_string(q));
  }
  require_positive(measure, "measure");
  r.d = d;
  r.q = q;
  r.c1 = embedding_bound(1.0, n, measure);
  r.cq = embedding_bound(q, n, measure);
  r.kappa = kappa(d, n);
  std::tie(r.k1, r.k2) = k1_k2(d, n, q, r.c1, r.cq);
  return r;
}

void to_json(nlohmann::json& j, const ConstantsReport& r) {
  j = nlohmann::json{{"n", r.n},         {"measure", r.measure}, {"two_star", r.two_star}, {"d", r.d},
                     {"c1", r.c1},       {"cq", r.cq},           {"kappa", r.kappa},       {"k1", r.k1},
                     {"k2", r.k2},       {"q", r.q}};
}

}  // namespace trisol
