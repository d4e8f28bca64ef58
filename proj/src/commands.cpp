#include "trisol/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "trisol/constants.hpp"
#include "trisol/errors.hpp"
#include "trisol/hypotheses.hpp"
#include "trisol/problems.hpp"
#include "trisol/solver.hpp"
#include "trisol/testfn.hpp"

namespace trisol::cli {

namespace {

using nlohmann::json;

std::string num(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

double rel_diff(double value, double ref) { return std::abs(value - ref) / std::abs(ref); }

json provenance(const RunConfig& config) {
  return json{{"schema", 1}, {"config_hash", config_hash(config)}, {"seed", config.solver.seed}};
}

std::string provenance_line(const RunConfig& config) {
  return "trisol schema=1 config_hash=" + config_hash(config) + " seed=" + std::to_string(config.solver.seed);
}

std::vector<std::string> csv_header(const RunConfig& config) { return {provenance_line(config)}; }

/// Constants with user overrides applied; nullopt (plus a diagnostic) when
/// N < 3 and no overrides are given.
struct ConstantsOutcome {
  std::optional<ConstantsReport> report;
  int n = 0;
  double measure = 0.0;
  double d = 0.0;
  std::vector<std::string> diagnostics;
};

double domain_measure(const Domain& domain) {
  if (auto m = domain.measure()) return *m;
  const auto grid = Grid::cartesian_nodes(domain, 129);
  return integrate(Field::sample(grid, [](Point) { return 1.0; }));
}

ConstantsOutcome constants_for(const RunConfig& config) {
  const Domain domain = make_domain(config);
  ConstantsOutcome out;
  out.n = domain.dim();
  out.measure = domain_measure(domain);
  out.d = inradius(domain, 129);
  const double q = config.parameters.q;
  ConstantsReport r;
  r.n = out.n;
  r.measure = out.measure;
  r.d = out.d;
  r.q = q;
  r.kappa = kappa(out.d, out.n);
  if (out.n >= 3) {
    r.two_star = critical_exponent(out.n);
    if (!(q > 1.0 && q < r.two_star)) {
      throw ConfigError("parameters.q: must lie in ]1, 2*[ = ]1, " + num(r.two_star) + "[, got " + num(q));
    }
    r.c1 = embedding_bound(1.0, out.n, out.measure);
    r.cq = embedding_bound(q, out.n, out.measure);
  } else {
    r.two_star = std::numeric_limits<double>::infinity();
    out.diagnostics.push_back("dimension-too-small: the closed-form embedding bound needs N >= 3 (N = " +
                              std::to_string(out.n) + "); supply constants.c1 and constants.cq");
  }
  if (config.constants.c1) r.c1 = *config.constants.c1;
  if (config.constants.cq) r.cq = *config.constants.cq;
  if (out.n >= 3 || (config.constants.c1 && config.constants.cq)) {
    std::tie(r.k1, r.k2) = k1_k2(out.d, out.n, q, r.c1, r.cq);
    out.report = r;
  } else {
    out.report.reset();
  }
  if (!out.report) {
    // partial: D and kappa only
    out.diagnostics.emplace_back("c1, cq, K1, K2 unavailable");
  }
  return out;
}

json constants_json(const ConstantsOutcome& c) {
  if (c.report) {
    json j = *c.report;
    if (!std::isfinite(c.report->two_star)) j["two_star"] = nullptr;
    return j;
  }
  return json{{"n", c.n},     {"measure", c.measure}, {"two_star", nullptr}, {"d", c.d},   {"c1", nullptr},
              {"cq", nullptr}, {"kappa", kappa(c.d, c.n)}, {"k1", nullptr}, {"k2", nullptr}, {"q", nullptr}};
}

struct Row {
  std::string name;
  double value;
  std::optional<double> ref;
};

std::string table(const std::vector<Row>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "quantity" << std::setw(16) << "value" << std::setw(14) << "reference"
     << "rel_diff\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(10) << r.name << std::setw(16) << num(r.value, 9);
    if (r.ref) {
      os << std::setw(14) << num(*r.ref, 9) << sci(rel_diff(r.value, *r.ref));
    } else {
      os << std::setw(14) << "-" << "-";
    }
    os << '\n';
  }
  return os.str();
}

HypothesisSampling sampling_for(const RunConfig& config, const Domain& domain) {
  const auto& s = config.sampling;
  const double beta = config.parameters.beta;
  return HypothesisSampling::make(domain, s.x_per_axis, s.t_min, s.t_max, s.t_count, s.s_min.value_or(-2.0 * beta),
                                  s.s_max.value_or(2.0 * beta), s.s_count);
}

std::string witness_text(const Witness& w) {
  std::ostringstream os;
  os << "x=(";
  for (std::size_t k = 0; k < w.x.size(); ++k) os << (k ? "," : "") << num(w.x[k], 4);
  os << ") t=" << num(w.t, 4) << " s=" << num(w.s, 6);
  return os.str();
}

std::string assumption_line(const AssumptionReport& r) {
  std::ostringstream os;
  os << std::left << "(" << r.id << ")  " << std::setw(14)
     << (r.pass ? (r.boundary_pass ? "boundary-pass" : "pass") : "FAIL") << std::setw(16) << num(r.worst_margin, 8)
     << witness_text(r.witness) << '\n';
  return os.str();
}

struct CheckOutcome {
  ConstantsReport constants;
  std::vector<AssumptionReport> reports;  // (1), (2), (3) if admissible, (4)
  std::optional<std::string> rejected3;
  std::optional<AdmissibleInterval> interval;
  std::optional<std::string> interval_error;
  TestFunctionReport testfn;
  bool chain_holds = false;
  bool all_pass = false;
};

json check_json(const CheckOutcome& c, const ProblemSpec& spec) {
  json assumptions = json::array();
  for (const auto& r : c.reports) assumptions.push_back(r);
  json j{{"assumptions", assumptions},
         {"mu", spec.mu},
         {"all_pass", c.all_pass},
         {"interval", c.interval ? json(*c.interval) : json(nullptr)},
         {"interval_error", c.interval_error ? json(*c.interval_error) : json(nullptr)},
         {"assumption3_rejected", c.rejected3 ? json(*c.rejected3) : json(nullptr)},
         {"test_function", c.testfn},
         {"proof_chain",
          {{"chi_alpha2_upper", c.testfn.chi_alpha2_upper},
           {"ratio_lower", c.testfn.ratio_lower},
           {"holds", c.chain_holds}}}};
  return j;
}

CheckOutcome evaluate_check(const RunConfig& config, const ProblemSpec& spec, const ConstantsReport& constants,
                            bool allow_rejected_b) {
  const Domain domain = make_domain(config);
  const auto sampling = sampling_for(config, domain);
  CheckOutcome c;
  c.constants = constants;
  c.reports.push_back(check_assumption_1(spec, sampling));
  c.reports.push_back(check_assumption_2(spec, sampling));
  if (spec.b > 0.0 && spec.b < 2.0) {
    c.reports.push_back(check_assumption_3(spec, sampling));
  } else if (allow_rejected_b) {
    c.rejected3 = "b = " + num(spec.b) + " violates the theorem's requirement b < 2";
  }
  c.reports.push_back(check_assumption_4(spec, constants, sampling));
  const AssumptionReport& r4 = c.reports.back();
  try {
    c.interval = admissible_interval(spec, constants, r4);
  } catch (const Error& e) {
    c.interval_error = e.what();
  }
  const GridPtr grid = make_grid(config);
  const auto x0 = inradius_center(domain, 129);
  c.testfn = evaluate_test_function(spec, constants, grid, x0, {sampling.x_grid, sampling.t_samples});
  c.chain_holds = c.testfn.chi_alpha2_upper < c.testfn.ratio_lower;
  c.all_pass = !c.rejected3;
  for (const auto& r : c.reports) c.all_pass = c.all_pass && r.pass;
  return c;
}

void require_valid(const ProblemSpec& spec, std::optional<double> kappa_value) {
  const auto issues = validate(spec, kappa_value);
  if (issues.empty()) return;
  std::string msg;
  for (const auto& i : issues) msg += (msg.empty() ? "" : "; ") + i;
  throw ConfigError(msg);
}

std::string iteration_csv(const std::vector<IterationRecord>& log, const std::vector<std::string>& header) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto& h : header) os << "# " << h << '\n';
  os << "iter,energy,grad_norm,step\n";
  for (const auto& r : log) os << r.iter << ',' << r.energy << ',' << r.grad_norm << ',' << r.step << '\n';
  return os.str();
}

std::string profile_columns(const SolutionSet& set, const std::vector<std::string>& header) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto& h : header) os << "# " << h << '\n';
  os << "# r";
  for (std::size_t k = 0; k < set.points.size(); ++k) os << " u" << k;
  os << '\n';
  const Grid& grid = set.points.front().u.grid();
  const Ball* ball = grid.domain().as_ball();
  const double origin = grid.is_radial() && ball ? ball->center[0] : 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << grid.abscissa(i) - origin;
    for (const auto& p : set.points) os << ' ' << p.u[i];
    os << '\n';
  }
  return os.str();
}

FindThreeOptions solver_options(const RunConfig& config) {
  FindThreeOptions opts;
  opts.descent.tol = config.solver.tol;
  opts.descent.max_iters = config.solver.max_iters;
  opts.mountain_pass.tol = config.solver.tol;
  opts.mountain_pass.path_points = config.solver.path_points;
  opts.mountain_pass.max_iters = config.solver.mp_max_iters;
  opts.seed = config.solver.seed;
  opts.random_starts = config.solver.random_starts;
  opts.start_amplitude = config.solver.start_amplitude;
  opts.weak_form_trials = config.solver.weak_form_trials;
  return opts;
}

struct SolveOutcome {
  std::vector<SolutionSet> sets;
  std::vector<double> smoke;
};

SolveOutcome solve_all(const RunConfig& config, const ProblemSpec& spec, const GridPtr& grid) {
  SolveOutcome out;
  const auto opts = solver_options(config);
  for (double t : spec.t_grid) {
    FrozenProblem problem(spec, grid, t);
    const double smoke = gradient_check(problem, 10, config.solver.seed + 500);
    out.smoke.push_back(smoke);
    if (!(smoke < 1e-6)) {
      throw Error("gradient consistency smoke check failed at t = " + num(t) + ": relative error " + sci(smoke));
    }
    CriticalPointSolver solver(std::move(problem));
    out.sets.push_back(solver.find_three(solver.default_starts(opts), opts));
  }
  return out;
}

void add_solution_files(CommandResult& result, const RunConfig& config, const SolveOutcome& solved,
                        const GridPtr& grid) {
  const auto header = csv_header(config);
  for (std::size_t ti = 0; ti < solved.sets.size(); ++ti) {
    const auto& set = solved.sets[ti];
    const std::string tag = "t" + std::to_string(ti);
    for (std::size_t k = 0; k < set.points.size(); ++k) {
      auto h = header;
      h.push_back("t=" + num(set.t, 17) + " kind=" + to_string(set.points[k].kind) + " energy=" +
                  num(set.points[k].energy, 17));
      result.files.push_back({"solution_" + tag + "_p" + std::to_string(k) + ".csv", field_to_csv(set.points[k].u, h)});
      result.files.push_back({"log_" + tag + "_p" + std::to_string(k) + ".csv", iteration_csv(set.points[k].log, header)});
    }
    if (!set.path_log.empty()) {
      result.files.push_back({"mountain_pass_path_" + tag + ".csv", iteration_csv(set.path_log, header)});
    }
    if ((grid->is_radial() || grid->dim() == 1) && !set.points.empty()) {
      result.files.push_back({"profile_" + tag + ".dat", profile_columns(set, header)});
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

CommandResult run_constants(const RunConfig& config) {
  const ConstantsOutcome c = constants_for(config);
  CommandResult result;
  result.report = provenance(config);
  result.report.update(constants_json(c));
  result.report["diagnostics"] = c.diagnostics;
  const bool compare = config.problem.name == "ball_example";
  std::vector<Row> rows{{"N", static_cast<double>(c.n), std::nullopt},
                        {"meas", c.measure, std::nullopt},
                        {"D", c.d, std::nullopt},
                        {"kappa", kappa(c.d, c.n), compare ? std::optional(reference::kappa) : std::nullopt}};
  if (c.report) {
    rows.insert(rows.begin() + 3, {"2*", c.report->two_star, std::nullopt});
    rows.push_back({"c1", c.report->c1, compare ? std::optional(reference::c1) : std::nullopt});
    rows.push_back({"cq", c.report->cq, compare ? std::optional(reference::cq) : std::nullopt});
    rows.push_back({"K1", c.report->k1, compare ? std::optional(reference::k1) : std::nullopt});
    rows.push_back({"K2", c.report->k2, compare ? std::optional(reference::k2) : std::nullopt});
  }
  std::ostringstream os;
  os << "# " << provenance_line(config) << '\n';
  os << "constants for " << make_domain(config).describe() << ", q = " << num(config.parameters.q) << "\n"
     << table(rows);
  for (const auto& d : c.diagnostics) os << "note: " << d << '\n';
  result.summary = os.str();
  result.files.push_back({"constants.json", result.report.dump(2) + "\n"});
  result.files.push_back({"constants.txt", result.summary});
  return result;
}

CommandResult run_check(const RunConfig& config) {
  const ConstantsOutcome c = constants_for(config);
  if (!c.report) {
    throw ConfigError("constants.cq: required when N < 3 (" + c.diagnostics.front() + ")");
  }
  const ProblemSpec spec = make_problem(config);
  require_valid(spec, c.report->kappa);
  const CheckOutcome outcome = evaluate_check(config, spec, *c.report, false);

  CommandResult result;
  result.report = provenance(config);
  result.report["constants"] = *c.report;
  result.report.update(check_json(outcome, spec));
  std::ostringstream os;
  os << "# " << provenance_line(config) << '\n';
  os << "assumption  status        worst_margin    witness\n";
  for (const auto& r : outcome.reports) os << assumption_line(r);
  const auto& r4 = outcome.reports.back();
  os << "lhs = " << num(*r4.lhs, 9) << ", rhs = " << num(*r4.rhs, 9) << '\n';
  if (outcome.interval) {
    const auto& iv = *outcome.interval;
    os << "example interval  ]" << num(iv.example_convention.first, 9) << ", " << num(iv.example_convention.second, 9)
       << "[  mu = " << num(spec.mu) << (iv.mu_in_example ? " inside" : " outside") << '\n'
       << "theorem interval  ]" << num(iv.theorem_convention.first, 9) << ", " << num(iv.theorem_convention.second, 9)
       << "[  mu = " << num(spec.mu) << (iv.mu_in_theorem ? " inside" : " outside") << '\n';
  } else {
    os << "interval: " << *outcome.interval_error << '\n';
  }
  os << "chain chi(alpha^2) = " << num(outcome.testfn.chi_alpha2_upper, 9)
     << (outcome.chain_holds ? " < " : " >= ") << num(outcome.testfn.ratio_lower, 9) << " = ratio bound\n";
  result.summary = os.str();
  const bool ok = outcome.all_pass && outcome.interval && outcome.interval->mu_in_example;
  result.exit_code = ok ? kOk : kHypothesisFailure;
  if (outcome.all_pass && !outcome.chain_holds) result.exit_code = kNumericalFailure;
  result.files.push_back({"hypotheses.json", result.report.dump(2) + "\n"});
  result.files.push_back({"hypotheses.txt", result.summary});
  return result;
}

CommandResult run_solve(const RunConfig& config) {
  const ProblemSpec spec = make_problem(config);
  const GridPtr grid = make_grid(config);
  const SolveOutcome solved = solve_all(config, spec, grid);
  CommandResult result;
  result.report = provenance(config);
  result.report["gradient_smoke_check"] = solved.smoke;
  result.report["runs"] = solved.sets;
  std::ostringstream os;
  bool warned = false;
  for (const auto& set : solved.sets) {
    os << "t = " << num(set.t) << ": " << set.points.size() << " distinct critical point(s)\n";
    for (std::size_t k = 0; k < set.points.size(); ++k) {
      const auto& p = set.points[k];
      os << "  [" << k << "] " << std::left << std::setw(14) << to_string(p.kind) << " energy " << std::setw(16)
         << num(p.energy, 10) << " grad_norm " << sci(p.grad_norm) << " weak_residual " << sci(p.weak_residual)
         << "  from " << p.start_label << '\n';
    }
    if (set.warning) {
      os << "  warning: " << *set.warning << '\n';
      warned = true;
    }
    for (const auto& n : set.notes) os << "  note: " << n << '\n';
  }
  result.report["warning"] = warned;
  result.summary = os.str();
  result.files.push_back({"solutions.json", result.report.dump(2) + "\n"});
  add_solution_files(result, config, solved, grid);
  return result;
}

// ---------------------------------------------------------------------------

namespace {

struct Comparison {
  std::string quantity;
  double published;
  double recomputed;
  double tolerance;  // relative
  std::string note;
  bool matches() const { return rel_diff(recomputed, published) <= tolerance; }
};

json comparison_json(const Comparison& c) {
  return json{{"quantity", c.quantity},   {"published", c.published},
              {"recomputed", c.recomputed}, {"rel_diff", rel_diff(c.recomputed, c.published)},
              {"tolerance", c.tolerance}, {"status", c.matches() ? "match" : "DISCREPANCY"},
              {"note", c.note}};
}

/// Smallest a with F~ <= a(1 + |eta|^b) + group on the samples; grows without
/// bound in the sampled range when F~ outgrows |eta|^b.
double required_a(const ProblemSpec& spec, const HypothesisSampling& sampling, double b) {
  const Grid& grid = *sampling.x_grid;
  const Field g = Field::sample(sampling.x_grid, spec.g);
  const Field lap = Field::sample(sampling.x_grid, spec.lap_g);
  double worst = 0.0;
  for (std::size_t i : grid.interior_nodes()) {
    for (double t : sampling.t_samples) {
      for (double eta : sampling.s_samples) {
        const double excess = f_tilde(spec, grid.coords(i), t, eta) -
                              (0.5 * eta * eta - eta * g[i] + eta * lap[i]) / spec.mu;
        worst = std::max(worst, excess / (1.0 + std::pow(std::abs(eta), b)));
      }
    }
  }
  return worst;
}

}  // namespace

CommandResult run_reproduce(std::uint64_t seed) {
  RunConfig config = ball_example_config();
  config.solver.seed = seed;
  const ProblemSpec spec = make_problem(config);
  const double radius_a = 0.1;
  const double radius_b = std::sqrt(0.1);
  json report = provenance(config);
  report["config"] = to_json(config);
  std::vector<Comparison> comparisons;
  std::ostringstream md;
  md << std::setprecision(9);
  md << "# Ball example reproduction\n\n"
     << "config_hash `" << config_hash(config) << "`, seed " << seed << "\n\n"
     << "Problem: N = 3, mu = 0.01, q = 3, m1 = 9, m2 = 1, alpha = 1, beta = 500, a = b = 10 (as published).\n"
     << "The domain is written as |x|^2 <= 0.1 (radius sqrt(0.1)) while D = r = 0.1 is used, and "
        "g = 0.001(0.01 - |x|^2) vanishes only on the sphere of radius 0.1. Constants are computed under both "
        "readings.\n\n";

  // Constants, both readings.
  json readings = json::array();
  md << "## Constants\n\n| reading | meas | D | c1 | cq | kappa | K1 | K2 |\n|---|---|---|---|---|---|---|---|\n";
  std::optional<ConstantsReport> primary;
  for (double radius : {radius_a, radius_b}) {
    const ConstantsReport r = compute_constants(3, ball_volume(3, radius), radius, 3.0);
    const std::string name = radius == radius_a ? "radius 0.1" : "radius sqrt(0.1)";
    json j = r;
    j["reading"] = name;
    json cmp = json::array();
    for (auto [q, val, ref] : {std::tuple{"c1", r.c1, reference::c1}, std::tuple{"cq", r.cq, reference::cq},
                               std::tuple{"kappa", r.kappa, reference::kappa}, std::tuple{"K1", r.k1, reference::k1},
                               std::tuple{"K2", r.k2, reference::k2}}) {
      Comparison c{std::string(q) + " (" + name + ")", ref, val, 0.02, ""};
      cmp.push_back(comparison_json(c));
      if (radius == radius_a) comparisons.push_back(c);
    }
    j["comparison"] = cmp;
    readings.push_back(j);
    md << "| " << name << " | " << r.measure << " | " << r.d << " | " << r.c1 << " | " << r.cq << " | " << r.kappa
       << " | " << r.k1 << " | " << r.k2 << " |\n";
    if (radius == radius_a) primary = r;
  }
  md << "| published | | 0.1 | " << reference::c1 << " | " << reference::cq << " | " << reference::kappa << " | "
     << reference::k1 << " | " << reference::k2 << " |\n\n";
  report["constants"] = readings;
  const ConstantsReport& constants = *primary;

  // Hypotheses on the radius-0.1 domain.
  const CheckOutcome full = evaluate_check(config, spec, constants, true);
  RunConfig half = config;
  half.sampling.s_min = 0.0;
  const Domain domain = make_domain(config);
  const auto half_sampling = sampling_for(half, domain);
  const AssumptionReport half1 = check_assumption_1(spec, half_sampling);
  const AssumptionReport half2 = check_assumption_2(spec, half_sampling);
  const auto full_sampling = sampling_for(config, domain);
  // (3) with the published a = b = 10, ignoring b < 2, on the same samples.
  double margin_ab10 = std::numeric_limits<double>::infinity();
  {
    const Field g = Field::sample(full_sampling.x_grid, spec.g);
    const Field lap = Field::sample(full_sampling.x_grid, spec.lap_g);
    const Grid& grid = *full_sampling.x_grid;
    for (std::size_t i : grid.interior_nodes()) {
      for (double t : full_sampling.t_samples) {
        for (double eta : full_sampling.s_samples) {
          const double lhs = f_tilde(spec, grid.coords(i), t, eta);
          const double rhs = 10.0 * (1.0 + std::pow(std::abs(eta), 10.0)) +
                             (0.5 * eta * eta - eta * g[i] + eta * lap[i]) / spec.mu;
          margin_ab10 = std::min(margin_ab10, rhs - lhs);
        }
      }
    }
  }
  // Search for an admissible (a, b): required a over two nested s ranges.
  json search = json::array();
  RunConfig coarse = config;
  coarse.sampling.x_per_axis = 9;
  coarse.sampling.s_min = 0.0;
  for (double b : {1.0, 1.5, 1.9}) {
    json entry{{"b", b}};
    json per_range = json::array();
    for (double factor : {2.0, 8.0}) {
      coarse.sampling.s_max = factor * config.parameters.beta;
      const auto s = sampling_for(coarse, domain);
      per_range.push_back({{"s_max", *coarse.sampling.s_max}, {"required_a", required_a(spec, s, b)}});
    }
    entry["required_a"] = per_range;
    search.push_back(entry);
  }

  json hyp = check_json(full, spec);
  hyp["half_range_s_ge_0"] = {half1, half2};
  hyp["assumption3_published_ab"] = {{"a", 10.0}, {"b", 10.0}, {"sampled_worst_margin", margin_ab10},
                                     {"admissible", false}, {"reason", "b = 10 violates b < 2"}};
  hyp["assumption3_ab_search"] = search;
  report["hypotheses"] = hyp;

  const AssumptionReport& r4 = full.reports.back();
  comparisons.push_back({"inf quotient (assumption 4 lhs)", reference::inf_quotient, *r4.lhs, 0.02,
                         "infimum over x and t samples; attained at t = " + num(r4.witness.t)});
  comparisons.push_back({"m1 K1 + m2 K2 (assumption 4 rhs)", reference::rhs, *r4.rhs, 1e-3 / reference::rhs, ""});

  md << "## Hypotheses (sampled, s in [" << num(full.reports[0].s_range.first) << ", "
     << num(full.reports[0].s_range.second) << "], t in [" << num(full.reports[0].t_range.first) << ", "
     << num(full.reports[0].t_range.second) << "])\n\n"
     << "| assumption | status | worst margin | witness |\n|---|---|---|---|\n";
  for (const auto& r : full.reports) {
    if (r.id == 4) md << "| (3) | **REJECTED** | - | " << *full.rejected3 << " |\n";
    md << "| (" << r.id << ") | " << (r.pass ? "pass" : "**FAIL**") << " | " << r.worst_margin << " | "
       << witness_text(r.witness) << " |\n";
  }
  md << '\n';
  md << "Restricted to s >= 0: (1) " << (half1.pass ? "pass" : "FAIL") << " (worst margin " << half1.worst_margin
     << "), (2) " << (half2.pass ? "pass" : "FAIL") << " (worst margin " << half2.worst_margin << ").\n\n";
  md << "With the published a = b = 10 the sampled inequality (3) has worst margin " << margin_ab10
     << ", but b = 10 violates the theorem's hypothesis b < 2. Required a for b < 2 (s >= 0):\n\n"
     << "| b | required a, s <= 1000 | required a, s <= 4000 |\n|---|---|---|\n";
  for (const auto& e : search) {
    md << "| " << e["b"].get<double>() << " | " << e["required_a"][0]["required_a"].get<double>() << " | "
       << e["required_a"][1]["required_a"].get<double>() << " |\n";
  }
  md << "\nThe required a grows with the sampled range because F~ grows like eta^3/3 while the bound grows like "
        "eta^2/(2 mu) + a eta^b, so no finite a with b < 2 satisfies (3) for all eta.\n\n";

  md << "## Assumption (4) and the admissible interval\n\n"
     << "lhs (inf quotient) = " << *r4.lhs << " (published 162.872), rhs = " << *r4.rhs
     << " (published 86.0932), lhs > rhs: " << (r4.pass ? "yes" : "no") << "\n\n";
  if (full.interval) {
    const auto& iv = *full.interval;
    comparisons.push_back({"mu = 0.01 in example interval (1 = yes)", 1.0, iv.mu_in_example ? 1.0 : 0.0, 0.0, ""});
    md << "Example convention: ]" << iv.example_convention.first << ", " << iv.example_convention.second
       << "[, mu = 0.01 " << (iv.mu_in_example ? "inside" : "outside") << ".\n\n"
       << "Theorem convention (times 2(2^N-1)/D^2 = " << iv.theorem_scale << "): ]" << iv.theorem_convention.first
       << ", " << iv.theorem_convention.second << "[, mu = 0.01 " << (iv.mu_in_theorem ? "inside" : "outside")
       << ".\n\n";
  } else {
    md << "Interval: " << *full.interval_error << "\n\n";
  }
  md << "Chain: chi(alpha^2) <= " << full.testfn.chi_alpha2_upper << (full.chain_holds ? " < " : " >= ")
     << full.testfn.ratio_lower << " <= vartheta(u_beta)/phi(u_beta).\n\n";

  // Critical points on the radial grid.
  const GridPtr grid = make_grid(config);
  json solve_json;
  try {
    const SolveOutcome solved = solve_all(config, spec, grid);
    solve_json = {{"gradient_smoke_check", solved.smoke}, {"runs", solved.sets}};
    md << "## Critical points (radial grid, " << grid->size() << " nodes)\n\n"
       << "| t | kind | energy | grad_norm | weak residual | sup norm | start |\n|---|---|---|---|---|---|---|\n";
    for (const auto& set : solved.sets) {
      for (const auto& p : set.points) {
        double sup = 0.0;
        for (double v : p.u.values()) sup = std::max(sup, std::abs(v));
        md << "| " << set.t << " | " << to_string(p.kind) << " | " << p.energy << " | " << sci(p.grad_norm) << " | "
           << sci(p.weak_residual) << " | " << sup << " | " << p.start_label << " |\n";
      }
      if (set.warning) md << "\n**Warning:** " << *set.warning << "\n";
      for (const auto& n : set.notes) md << "\nNote: " << n << "\n";
    }
    md << '\n';
  } catch (const Error& e) {
    solve_json = {{"error", e.what()}};
    md << "## Critical points\n\nsolver failed: " << e.what() << "\n\n";
  }
  report["solve"] = solve_json;

  json cmp = json::array();
  md << "## Comparison with published values\n\n| quantity | published | recomputed | rel diff | status |\n"
     << "|---|---|---|---|---|\n";
  for (const auto& c : comparisons) {
    cmp.push_back(comparison_json(c));
    md << "| " << c.quantity << " | " << c.published << " | " << c.recomputed << " | " << sci(rel_diff(c.recomputed, c.published))
       << " | " << (c.matches() ? "match" : "**DISCREPANCY**") << " |\n";
  }
  std::vector<std::string> flags;
  for (const auto& c : comparisons) {
    if (!c.matches()) flags.push_back("DISCREPANCY " + c.quantity + ": published " + num(c.published, 9) +
                                      ", recomputed " + num(c.recomputed, 9));
  }
  if (rel_diff(*r4.lhs, reference::inf_quotient) > 1e-4) {
    flags.push_back("inf quotient recomputed as " + num(*r4.lhs, 9) + " vs published 162.872 (rel diff " +
                    sci(rel_diff(*r4.lhs, reference::inf_quotient)) + ")");
  }
  flags.push_back("INCONSISTENT a = b = 10: assumption (3) requires b < 2");
  for (const auto& r : full.reports) {
    if (!r.pass) {
      flags.push_back("assumption (" + std::to_string(r.id) + ") fails on the sampled range, worst margin " +
                      num(r.worst_margin, 9) + " at " + witness_text(r.witness));
    }
  }
  if (full.interval && !full.interval->mu_in_theorem) {
    flags.push_back("mu = 0.01 lies outside the theorem-convention interval ]" +
                    num(full.interval->theorem_convention.first, 9) + ", " +
                    num(full.interval->theorem_convention.second, 9) + "[");
  }
  report["comparisons"] = cmp;
  report["flags"] = flags;
  md << "\n## Flags\n\n";
  for (const auto& f : flags) md << "- " << f << '\n';

  CommandResult result;
  result.report = report;
  result.summary = md.str();
  result.files.push_back({"reproduce.json", report.dump(2) + "\n"});
  result.files.push_back({"reproduce.md", md.str()});
  return result;
}

void write_outputs(const CommandResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& f : result.files) {
    std::ofstream out(dir / f.name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / f.name).string());
    out << f.content;
  }
}

int run_command(const std::string& command, const std::optional<std::string>& config_path,
                std::optional<std::uint64_t> seed, std::optional<std::string> out_dir, std::ostream& out,
                std::ostream& err) {
  try {
    CommandResult result;
    std::string dir;
    if (command == "reproduce") {
      result = run_reproduce(seed.value_or(42));
      dir = out_dir.value_or(ball_example_config().output_dir);
    } else {
      if (!config_path) {
        err << "error: --config is required for '" << command << "'\n";
        return kConfigError;
      }
      RunConfig config = load_config(*config_path);
      if (seed) config.solver.seed = *seed;
      if (out_dir) config.output_dir = *out_dir;
      dir = config.output_dir;
      if (command == "constants") {
        result = run_constants(config);
      } else if (command == "check") {
        result = run_check(config);
      } else if (command == "solve") {
        result = run_solve(config);
      } else {
        err << "error: unknown command '" << command << "'\n";
        return kConfigError;
      }
    }
    write_outputs(result, dir);
    out << result.summary;
    out << "wrote " << result.files.size() << " file(s) to " << dir << '\n';
    return result.exit_code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace trisol::cli
