#include "trisol/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "trisol/errors.hpp"
#include "trisol/hypotheses.hpp"
#include "trisol/problems.hpp"

namespace trisol {

namespace {

using nlohmann::json;

/// Strict reader over one JSON object: every key must be consumed.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  const json* get(const std::string& key) {
    seen_.insert(key);
    return has(key) ? &j_.at(key) : nullptr;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = get(key)) {
      if (!v->is_number()) fail(field(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) fail(field(key), "must be finite");
    }
  }

  void optional_number(const std::string& key, std::optional<double>& out) {
    if (const json* v = get(key)) {
      if (!v->is_number()) fail(field(key), "expected a number");
      out = v->get<double>();
    }
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (const json* v = get(key)) {
      if (!v->is_number_integer()) fail(field(key), "expected an integer");
      if (v->is_number_unsigned()) {
        out = static_cast<Int>(v->get<std::uint64_t>());
      } else {
        const auto value = v->get<std::int64_t>();
        if (std::is_unsigned_v<Int> && value < 0) fail(field(key), "must be non-negative");
        out = static_cast<Int>(value);
      }
    }
  }

  void optional_integer(const std::string& key, std::optional<int>& out) {
    if (has(key)) {
      int v = 0;
      integer(key, v);
      out = v;
    } else {
      seen_.insert(key);
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = get(key)) {
      if (!v->is_string()) fail(field(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (const json* v = get(key)) {
      if (!v->is_array()) fail(field(key), "expected an array of numbers");
      out.clear();
      for (std::size_t k = 0; k < v->size(); ++k) {
        if (!(*v)[k].is_number()) fail(field(key) + "[" + std::to_string(k) + "]", "expected a number");
        out.push_back((*v)[k].get<double>());
      }
    }
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail(field(key), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& msg) {
  if (!ok) ObjectReader::fail(path, msg);
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig c;
  ObjectReader root(j, "");
  if (const json* schema = root.get("schema")) {
    require(schema->is_number_integer() && schema->get<int>() == 1, "schema", "only schema version 1 is supported");
  }

  if (const json* d = root.get("domain")) {
    ObjectReader r(*d, "domain");
    r.string("shape", c.domain.shape);
    r.numbers("center", c.domain.center);
    r.number("radius", c.domain.radius);
    r.numbers("lower", c.domain.lower);
    r.numbers("upper", c.domain.upper);
    r.finish();
  } else {
    ObjectReader::fail("domain", "required");
  }
  if (c.domain.shape == "ball") {
    require(!c.domain.center.empty(), "domain.center", "required for a ball");
    require(c.domain.radius > 0.0, "domain.radius", "must be > 0");
    require(c.domain.lower.empty() && c.domain.upper.empty(), "domain", "a ball takes center and radius only");
  } else if (c.domain.shape == "box") {
    require(!c.domain.lower.empty(), "domain.lower", "required for a box");
    require(c.domain.lower.size() == c.domain.upper.size(), "domain.upper", "must match domain.lower in length");
    for (std::size_t k = 0; k < c.domain.lower.size(); ++k) {
      require(c.domain.upper[k] > c.domain.lower[k], "domain.upper[" + std::to_string(k) + "]",
              "must exceed domain.lower");
    }
    require(c.domain.center.empty() && c.domain.radius == 0.0, "domain", "a box takes lower and upper only");
  } else {
    ObjectReader::fail("domain.shape", "must be \"ball\" or \"box\", got \"" + c.domain.shape + "\"");
  }

  if (const json* g = root.get("grid")) {
    ObjectReader r(*g, "grid");
    r.string("mode", c.grid.mode);
    r.optional_number("h", c.grid.h);
    r.optional_integer("nodes_per_axis", c.grid.nodes_per_axis);
    r.finish();
  }
  require(c.grid.mode == "cartesian" || c.grid.mode == "radial", "grid.mode", "must be \"cartesian\" or \"radial\"");
  require(c.grid.mode == "cartesian" || c.domain.shape == "ball", "grid.mode", "radial mode needs a ball domain");
  require(c.grid.h.has_value() != c.grid.nodes_per_axis.has_value(), "grid",
          "give exactly one of h and nodes_per_axis");
  if (c.grid.h) require(*c.grid.h > 0.0, "grid.h", "must be > 0");
  if (c.grid.nodes_per_axis) require(*c.grid.nodes_per_axis >= 3, "grid.nodes_per_axis", "must be >= 3");

  if (const json* p = root.get("problem")) {
    ObjectReader r(*p, "problem");
    r.string("name", c.problem.name);
    r.numbers("coefficients", c.problem.coefficients);
    r.string("primitive", c.problem.primitive);
    r.finish();
  }
  require(c.problem.name == "ball_example" || c.problem.name == "cubic_logistic" || c.problem.name == "polynomial",
          "problem.name", "must be one of ball_example, cubic_logistic, polynomial");
  require(c.problem.name != "polynomial" || !c.problem.coefficients.empty(), "problem.coefficients",
          "required for the polynomial problem");
  require(c.problem.primitive == "closed_form" || c.problem.primitive == "quadrature", "problem.primitive",
          "must be \"closed_form\" or \"quadrature\"");
  require(c.problem.primitive == "closed_form" || c.problem.name == "ball_example", "problem.primitive",
          "quadrature of f is only available for ball_example");

  if (const json* p = root.get("parameters")) {
    ObjectReader r(*p, "parameters");
    auto& q = c.parameters;
    r.number("mu", q.mu);
    r.number("q", q.q);
    r.number("m1", q.m1);
    r.number("m2", q.m2);
    r.number("a", q.a);
    r.number("b", q.b);
    r.number("alpha", q.alpha);
    r.number("beta", q.beta);
    r.finish();
  }
  require(c.parameters.mu > 0.0, "parameters.mu", "must be > 0");
  require(c.parameters.q > 1.0, "parameters.q", "must be > 1");
  require(c.parameters.m1 >= 0.0, "parameters.m1", "must be >= 0");
  require(c.parameters.m2 >= 0.0, "parameters.m2", "must be >= 0");
  require(c.parameters.alpha > 0.0, "parameters.alpha", "must be > 0");
  require(c.parameters.beta > 0.0, "parameters.beta", "must be > 0");

  if (const json* s = root.get("sampling")) {
    ObjectReader r(*s, "sampling");
    auto& m = c.sampling;
    r.integer("x_per_axis", m.x_per_axis);
    r.integer("t_count", m.t_count);
    r.number("t_min", m.t_min);
    r.number("t_max", m.t_max);
    r.integer("s_count", m.s_count);
    r.optional_number("s_min", m.s_min);
    r.optional_number("s_max", m.s_max);
    r.finish();
  }
  require(c.sampling.x_per_axis >= 3, "sampling.x_per_axis", "must be >= 3");
  require(c.sampling.t_count >= 1, "sampling.t_count", "must be >= 1");
  require(c.sampling.s_count >= 2, "sampling.s_count", "must be >= 2");
  require(c.sampling.t_min > 0.0, "sampling.t_min", "must be > 0");
  require(c.sampling.t_max >= c.sampling.t_min, "sampling.t_max", "must be >= t_min");
  if (c.sampling.s_min && c.sampling.s_max) {
    require(*c.sampling.s_max > *c.sampling.s_min, "sampling.s_max", "must exceed s_min");
  }

  if (const json* t = root.get("t_grid")) {
    if (t->is_array()) {
      c.t_grid.clear();
      for (std::size_t k = 0; k < t->size(); ++k) {
        require((*t)[k].is_number(), "t_grid[" + std::to_string(k) + "]", "expected a number");
        c.t_grid.push_back((*t)[k].get<double>());
      }
    } else {
      ObjectReader r(*t, "t_grid");
      double lo = 0.0;
      double hi = 0.0;
      int count = 0;
      std::string spacing = "linear";
      r.number("min", lo);
      r.number("max", hi);
      r.integer("count", count);
      r.string("spacing", spacing);
      r.finish();
      require(count >= 1, "t_grid.count", "must be >= 1");
      require(hi >= lo, "t_grid.max", "must be >= min");
      require(spacing == "linear" || spacing == "log", "t_grid.spacing", "must be \"linear\" or \"log\"");
      require(spacing == "linear" || lo > 0.0, "t_grid.min", "log spacing needs min > 0");
      c.t_grid = spacing == "log" ? logspace(lo, hi, count) : linspace(lo, hi, count);
    }
  }
  require(!c.t_grid.empty(), "t_grid", "must contain at least one time");
  for (std::size_t k = 0; k < c.t_grid.size(); ++k) {
    require(c.t_grid[k] > 0.0, "t_grid[" + std::to_string(k) + "]", "must be > 0");
  }

  if (const json* s = root.get("solver")) {
    ObjectReader r(*s, "solver");
    auto& m = c.solver;
    r.number("tol", m.tol);
    r.integer("max_iters", m.max_iters);
    r.integer("path_points", m.path_points);
    r.integer("mp_max_iters", m.mp_max_iters);
    r.integer("seed", m.seed);
    r.integer("random_starts", m.random_starts);
    r.number("start_amplitude", m.start_amplitude);
    r.integer("weak_form_trials", m.weak_form_trials);
    r.finish();
  }
  require(c.solver.tol > 0.0, "solver.tol", "must be > 0");
  require(c.solver.max_iters >= 0, "solver.max_iters", "must be >= 0");
  require(c.solver.path_points >= 3, "solver.path_points", "must be >= 3");
  require(c.solver.mp_max_iters >= 0, "solver.mp_max_iters", "must be >= 0");
  require(c.solver.random_starts >= 0, "solver.random_starts", "must be >= 0");
  require(c.solver.start_amplitude >= 0.0, "solver.start_amplitude", "must be >= 0");
  require(c.solver.weak_form_trials >= 1, "solver.weak_form_trials", "must be >= 1");

  if (const json* k = root.get("constants")) {
    ObjectReader r(*k, "constants");
    r.optional_number("c1", c.constants.c1);
    r.optional_number("cq", c.constants.cq);
    r.finish();
  }
  if (c.constants.c1) require(*c.constants.c1 > 0.0, "constants.c1", "must be > 0");
  if (c.constants.cq) require(*c.constants.cq > 0.0, "constants.cq", "must be > 0");

  if (const json* o = root.get("output")) {
    ObjectReader r(*o, "output");
    r.string("dir", c.output_dir);
    r.finish();
  }
  root.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: invalid JSON in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json domain = {{"shape", c.domain.shape}};
  if (c.domain.shape == "ball") {
    domain["center"] = c.domain.center;
    domain["radius"] = c.domain.radius;
  } else {
    domain["lower"] = c.domain.lower;
    domain["upper"] = c.domain.upper;
  }
  json grid = {{"mode", c.grid.mode}};
  if (c.grid.h) grid["h"] = *c.grid.h;
  if (c.grid.nodes_per_axis) grid["nodes_per_axis"] = *c.grid.nodes_per_axis;
  json problem = {{"name", c.problem.name}, {"primitive", c.problem.primitive}};
  if (!c.problem.coefficients.empty()) problem["coefficients"] = c.problem.coefficients;
  const auto& p = c.parameters;
  json sampling = {{"x_per_axis", c.sampling.x_per_axis}, {"t_count", c.sampling.t_count},
                   {"t_min", c.sampling.t_min},           {"t_max", c.sampling.t_max},
                   {"s_count", c.sampling.s_count}};
  if (c.sampling.s_min) sampling["s_min"] = *c.sampling.s_min;
  if (c.sampling.s_max) sampling["s_max"] = *c.sampling.s_max;
  const auto& s = c.solver;
  json constants = json::object();
  if (c.constants.c1) constants["c1"] = *c.constants.c1;
  if (c.constants.cq) constants["cq"] = *c.constants.cq;
  return json{{"schema", 1},
              {"domain", domain},
              {"grid", grid},
              {"problem", problem},
              {"parameters",
               {{"mu", p.mu}, {"q", p.q}, {"m1", p.m1}, {"m2", p.m2}, {"a", p.a}, {"b", p.b}, {"alpha", p.alpha},
                {"beta", p.beta}}},
              {"t_grid", c.t_grid},
              {"sampling", sampling},
              {"solver",
               {{"tol", s.tol},
                {"max_iters", s.max_iters},
                {"path_points", s.path_points},
                {"mp_max_iters", s.mp_max_iters},
                {"seed", s.seed},
                {"random_starts", s.random_starts},
                {"start_amplitude", s.start_amplitude},
                {"weak_form_trials", s.weak_form_trials}}},
              {"constants", constants},
              {"output", {{"dir", c.output_dir}}}};
}

std::string config_hash(const RunConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Domain make_domain(const RunConfig& config) {
  if (config.domain.shape == "ball") return Domain::ball(config.domain.center, config.domain.radius);
  return Domain::box(config.domain.lower, config.domain.upper);
}

GridPtr make_grid(const RunConfig& config) {
  const Domain domain = make_domain(config);
  if (config.grid.mode == "radial") {
    const double radius = config.domain.radius;
    const int intervals = config.grid.nodes_per_axis ? *config.grid.nodes_per_axis - 1
                                                     : static_cast<int>(std::lround(radius / *config.grid.h));
    return Grid::radial(domain, intervals);
  }
  if (config.grid.nodes_per_axis) return Grid::cartesian_nodes(domain, *config.grid.nodes_per_axis);
  return Grid::cartesian(domain, *config.grid.h);
}

ProblemSpec make_problem(const RunConfig& config) {
  const int dim = make_domain(config).dim();
  ProblemSpec spec;
  if (config.problem.name == "ball_example") {
    spec = problems::ball_example(dim, config.problem.primitive == "closed_form");
  } else if (config.problem.name == "cubic_logistic") {
    spec.nonlinearity = problems::cubic_logistic(config.parameters.mu);
  } else {
    spec.nonlinearity = problems::polynomial(config.problem.coefficients);
  }
  if (config.problem.name != "ball_example") {
    spec.lap_g = [](Point) { return 0.0; };
  }
  const auto& p = config.parameters;
  spec.mu = p.mu;
  spec.q = p.q;
  spec.m1 = p.m1;
  spec.m2 = p.m2;
  spec.a = p.a;
  spec.b = p.b;
  spec.alpha = p.alpha;
  spec.beta = p.beta;
  spec.t_grid = config.t_grid;
  spec.t_min = config.sampling.t_min;
  return spec;
}

RunConfig ball_example_config() {
  RunConfig c;
  c.domain.shape = "ball";
  c.domain.center = {0.0, 0.0, 0.0};
  c.domain.radius = 0.1;
  c.grid.mode = "radial";
  c.grid.nodes_per_axis = 257;
  c.problem.name = "ball_example";
  c.parameters = {0.01, 3.0, 9.0, 1.0, 10.0, 10.0, 1.0, 500.0};
  c.t_grid = {1.0};
  c.output_dir = "trisol_reproduce";
  return c;
}

}  // namespace trisol
