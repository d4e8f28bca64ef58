#pragma once

#include <utility>

#include <nlohmann/json.hpp>

namespace trisol {

/// Closed-form constants of the three-solutions theorem for one domain.
///
/// All values are recomputed from (n, measure, d, q); `c1` and `cq` are the
/// Talenti-type upper bounds of the embedding H^1_0 -> L^1 and H^1_0 -> L^q.
struct ConstantsReport {
  int n = 0;
  double measure = 0.0;
  double two_star = 0.0;
  double d = 0.0;
  double c1 = 0.0;
  double cq = 0.0;
  double kappa = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double q = 0.0;
};

/// 2N/(N-2). Throws DimensionTooSmallError for N <= 2.
double critical_exponent(int n);

/// Volume of the N-ball of the given radius.
double ball_volume(int n, double radius);

/// Upper bound of the embedding constant c_q of H^1_0(Omega) into L^q(Omega):
///
///   meas^{(2*-q)/(2* q)} / sqrt(N(N-2)pi) * (N! / (2 Gamma(N/2+1)))^{1/N}
///
/// Gamma is evaluated through lgamma, N! as Gamma(N+1).
double embedding_bound(double q, int n, double measure);

/// kappa = D sqrt(2) / (2 pi^{N/4}) * (Gamma(N/2+1) / (D^N - (D/2)^N))^{1/2}.
double kappa(double d, int n);

/// (K1, K2) = (2 sqrt(2) c1 (2^N-1) / D^2, 2^{(q+2)/2} cq^q (2^N-1) / (q D^2)).
std::pair<double, double> k1_k2(double d, int n, double q, double c1, double cq);

/// Assembles the full report. Requires n >= 3 and 1 < q < 2*.
ConstantsReport compute_constants(int n, double measure, double d, double q);

void to_json(nlohmann::json& j, const ConstantsReport& r);

}  // namespace trisol
