#include "trisol/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trisol/errors.hpp"
#include "trisol/parallel.hpp"
#include "trisol/testfn.hpp"

namespace trisol {

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw PreconditionError("sample count must be positive");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[k] = lo + (hi - lo) * k / (count - 1);
  out.back() = hi;
  return out;
}

std::vector<double> logspace(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi >= lo)) throw PreconditionError("log spacing needs 0 < lo <= hi");
  auto exps = linspace(std::log(lo), std::log(hi), count);
  for (auto& e : exps) e = std::exp(e);
  exps.front() = lo;
  exps.back() = hi;
  return exps;
}

HypothesisSampling HypothesisSampling::make(const Domain& domain, int x_per_axis, double t_min, double t_max,
                                            int t_count, double s_min, double s_max, int s_count) {
  HypothesisSampling s;
  s.x_grid = Grid::cartesian_nodes(domain, x_per_axis);
  s.t_samples = logspace(t_min, t_max, t_count);
  s.s_samples = linspace(s_min, s_max, s_count);
  return s;
}

namespace {

struct SampledData {
  Field g;
  Field lap_g;
};

SampledData sample_data(const ProblemSpec& spec, const GridPtr& grid) {
  Field g = spec.g ? Field::sample(grid, spec.g) : Field(grid);
  Field lap = spec.lap_g ? Field::sample(grid, spec.lap_g) : -1.0 * apply_neg_laplacian(g);
  return {std::move(g), std::move(lap)};
}

struct Worst {
  double margin = std::numeric_limits<double>::infinity();
  std::size_t flat = std::numeric_limits<std::size_t>::max();
  double scale = 0.0;
};

/// Evaluates margin(node, t, s) -> (margin, scale) over all samples, in parallel
/// over x nodes. Ties in the margin go to the lowest flat (x, t, s) index.
template <typename MarginFn>
AssumptionReport scan(int id, std::string statement, const HypothesisSampling& sampling, MarginFn&& margin) {
  const auto& nodes = sampling.x_grid->interior_nodes();
  const std::size_t nt = sampling.t_samples.size();
  const std::size_t ns = sampling.s_samples.size();
  if (nodes.empty() || nt == 0 || ns == 0) {
    throw PreconditionError("hypothesis sampling needs nonempty x, t and s samples");
  }
  const int chunks = thread_count();
  std::vector<Worst> partial(chunks);
  parallel_chunks(nodes.size(), chunks, [&](int chunk, std::size_t begin, std::size_t end) {
    Worst w;
    for (std::size_t ix = begin; ix < end; ++ix) {
      for (std::size_t it = 0; it < nt; ++it) {
        for (std::size_t is = 0; is < ns; ++is) {
          const auto [m, scale] = margin(nodes[ix], sampling.t_samples[it], sampling.s_samples[is]);
          const std::size_t flat = (ix * nt + it) * ns + is;
          w.scale = std::max(w.scale, scale);
          if (m < w.margin || std::isnan(m)) {
            w.margin = std::isnan(m) ? -std::numeric_limits<double>::infinity() : m;
            w.flat = flat;
          }
        }
      }
    }
    partial[chunk] = w;
  });
  Worst worst;
  for (const Worst& w : partial) {
    worst.scale = std::max(worst.scale, w.scale);
    if (w.flat == std::numeric_limits<std::size_t>::max()) continue;
    if (w.margin < worst.margin || (w.margin == worst.margin && w.flat < worst.flat)) {
      worst.margin = w.margin;
      worst.flat = w.flat;
    }
  }
  AssumptionReport r;
  r.id = id;
  r.statement = std::move(statement);
  r.worst_margin = worst.margin;
  r.tolerance = 1e-9 * std::max(1.0, worst.scale);
  r.pass = worst.margin >= -r.tolerance;
  r.boundary_pass = r.pass && worst.margin <= r.tolerance;
  const std::size_t ix = worst.flat / (nt * ns);
  const std::size_t it = (worst.flat / ns) % nt;
  const std::size_t is = worst.flat % ns;
  const auto x = sampling.x_grid->coords(nodes[ix]);
  r.witness = {std::vector<double>(x.begin(), x.end()), sampling.t_samples[it], sampling.s_samples[is]};
  r.sample_counts = {nodes.size(), nt, ns};
  r.s_range = {sampling.s_samples.front(), sampling.s_samples.back()};
  r.t_range = {sampling.t_samples.front(), sampling.t_samples.back()};
  return r;
}

double group(const ProblemSpec& spec, double eta, double g, double lap_g) {
  return (0.5 * eta * eta - eta * g + eta * lap_g) / spec.mu;
}

}  // namespace

AssumptionReport check_assumption_1(const ProblemSpec& spec, const HypothesisSampling& sampling) {
  const auto data = sample_data(spec, sampling.x_grid);
  const Grid& grid = *sampling.x_grid;
  return scan(1, "F(x,t,s) <= m1 + m2|s|^(q-1) + (1/mu)(s - g(x) + Lap g(x))", sampling,
              [&](std::size_t i, double t, double s) {
                const double lhs = big_f(spec, grid.coords(i), t, s);
                const double rhs =
                    spec.m1 + spec.m2 * std::pow(std::abs(s), spec.q - 1.0) + (s - data.g[i] + data.lap_g[i]) / spec.mu;
                return std::pair{rhs - lhs, std::max(std::abs(lhs), std::abs(rhs))};
              });
}

AssumptionReport check_assumption_2(const ProblemSpec& spec, const HypothesisSampling& sampling) {
  const auto data = sample_data(spec, sampling.x_grid);
  const Grid& grid = *sampling.x_grid;
  return scan(2, "F~(x,t,eta) >= (1/mu)(eta^2/2 - eta g(x) + eta Lap g(x))", sampling,
              [&](std::size_t i, double t, double eta) {
                const double lhs = f_tilde(spec, grid.coords(i), t, eta);
                const double rhs = group(spec, eta, data.g[i], data.lap_g[i]);
                return std::pair{lhs - rhs, std::max(std::abs(lhs), std::abs(rhs))};
              });
}

AssumptionReport check_assumption_3(const ProblemSpec& spec, const HypothesisSampling& sampling) {
  if (!(spec.b > 0.0 && spec.b < 2.0)) {
    throw PreconditionError("assumption (3) requires 0 < b < 2, got b = " + std::to_string(spec.b));
  }
  if (!(spec.a > 0.0)) {
    throw PreconditionError("assumption (3) requires a > 0");
  }
  const auto data = sample_data(spec, sampling.x_grid);
  const Grid& grid = *sampling.x_grid;
  return scan(3, "F~(x,t,eta) <= a(1 + |eta|^b) + (1/mu)(eta^2/2 - eta g(x) + eta Lap g(x))", sampling,
              [&](std::size_t i, double t, double eta) {
                const double lhs = f_tilde(spec, grid.coords(i), t, eta);
                const double rhs =
                    spec.a * (1.0 + std::pow(std::abs(eta), spec.b)) + group(spec, eta, data.g[i], data.lap_g[i]);
                return std::pair{rhs - lhs, std::max(std::abs(lhs), std::abs(rhs))};
              });
}

double assumption4_rhs(const ProblemSpec& spec, const ConstantsReport& constants) {
  return spec.m1 * constants.k1 / spec.alpha + spec.m2 * constants.k2 * std::pow(spec.alpha, spec.q - 2.0);
}

AssumptionReport check_assumption_4(const ProblemSpec& spec, const ConstantsReport& constants,
                                    const HypothesisSampling& sampling) {
  if (!(spec.beta > spec.alpha * constants.kappa)) {
    throw PreconditionError("assumption (4) requires beta > alpha*kappa = " +
                            std::to_string(spec.alpha * constants.kappa));
  }
  const InfResult inf = assumption4_infimum(spec, {sampling.x_grid, sampling.t_samples});
  AssumptionReport r;
  r.id = 4;
  r.statement = "inf_x (F~(x,t,beta) - (1/mu)(beta^2/2 - beta g + beta Lap g))/beta^2 > m1 K1/alpha + m2 K2 alpha^(q-2)";
  r.lhs = inf.value / (spec.beta * spec.beta);
  r.rhs = assumption4_rhs(spec, constants);
  r.worst_margin = *r.lhs - *r.rhs;
  r.tolerance = 1e-9 * std::max({1.0, std::abs(*r.lhs), std::abs(*r.rhs)});
  r.pass = r.worst_margin > r.tolerance;
  r.boundary_pass = false;
  const auto x = sampling.x_grid->coords(inf.node);
  r.witness = {std::vector<double>(x.begin(), x.end()), inf.t, spec.beta};
  r.sample_counts = {sampling.x_grid->interior_nodes().size(), sampling.t_samples.size(), 1};
  r.s_range = {spec.beta, spec.beta};
  r.t_range = {sampling.t_samples.front(), sampling.t_samples.back()};
  return r;
}

bool mu_in_example_interval(double mu, double lhs, double rhs) { return mu * lhs > 1.0 && mu * rhs < 1.0; }

AdmissibleInterval admissible_interval(const ProblemSpec& spec, const ConstantsReport& constants,
                                       const AssumptionReport& report4) {
  if (report4.id != 4 || !report4.lhs || !report4.rhs) {
    throw PreconditionError("admissible interval needs an assumption (4) report");
  }
  const double lhs = *report4.lhs;
  const double rhs = *report4.rhs;
  if (!(lhs > rhs)) {
    throw EmptyIntervalError("admissible interval is empty: lhs = " + std::to_string(lhs) +
                             " <= rhs = " + std::to_string(rhs));
  }
  if (!report4.pass) {
    throw PreconditionError("assumption (4) did not pass");
  }
  AdmissibleInterval a;
  a.delta1_inv = lhs;
  a.delta2_inv = rhs;
  a.example_convention = {1.0 / lhs, 1.0 / rhs};
  a.theorem_scale = 2.0 * (std::ldexp(1.0, constants.n) - 1.0) / (constants.d * constants.d);
  a.theorem_convention = {a.theorem_scale / lhs, a.theorem_scale / rhs};
  a.mu_in_example = spec.mu > a.example_convention.first && spec.mu < a.example_convention.second;
  a.mu_in_theorem = spec.mu > a.theorem_convention.first && spec.mu < a.theorem_convention.second;
  return a;
}

void to_json(nlohmann::json& j, const AssumptionReport& r) {
  j = nlohmann::json{{"id", r.id},
                     {"statement", r.statement},
                     {"pass", r.pass},
                     {"boundary_pass", r.boundary_pass},
                     {"worst_margin", r.worst_margin},
                     {"tolerance", r.tolerance},
                     {"witness", {{"x", r.witness.x}, {"t", r.witness.t}, {"s", r.witness.s}}},
                     {"sample_counts", {{"x", r.sample_counts[0]}, {"t", r.sample_counts[1]}, {"s", r.sample_counts[2]}}},
                     {"s_range", {r.s_range.first, r.s_range.second}},
                     {"t_range", {r.t_range.first, r.t_range.second}}};
  if (r.lhs) j["lhs"] = *r.lhs;
  if (r.rhs) j["rhs"] = *r.rhs;
}

void to_json(nlohmann::json& j, const AdmissibleInterval& a) {
  j = nlohmann::json{{"delta1_inv", a.delta1_inv},
                     {"delta2_inv", a.delta2_inv},
                     {"interval_example_convention", {a.example_convention.first, a.example_convention.second}},
                     {"interval_theorem_convention", {a.theorem_convention.first, a.theorem_convention.second}},
                     {"theorem_scale", a.theorem_scale},
                     {"mu_in_example", a.mu_in_example},
                     {"mu_in_theorem", a.mu_in_theorem}};
}

}  // namespace trisol
