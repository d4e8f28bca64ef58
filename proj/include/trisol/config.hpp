#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trisol/functionals.hpp"
#include "trisol/geometry.hpp"

namespace trisol {

/// Run configuration: one JSON document. Unknown keys are rejected, and every
/// violation is reported as a ConfigError naming the field path.
struct RunConfig {
  struct DomainSpec {
    std::string shape = "ball";  ///< "ball" or "box"
    std::vector<double> center;
    double radius = 0.0;
    std::vector<double> lower;
    std::vector<double> upper;
    bool operator==(const DomainSpec&) const = default;
  };
  struct GridSpec {
    std::string mode = "cartesian";  ///< "cartesian" or "radial"
    std::optional<double> h;
    std::optional<int> nodes_per_axis;
    bool operator==(const GridSpec&) const = default;
  };
  struct ProblemSel {
    std::string name = "ball_example";  ///< ball_example | cubic_logistic | polynomial
    std::vector<double> coefficients;   ///< polynomial F(s) = sum c_k s^k
    std::string primitive = "closed_form";  ///< closed_form | quadrature (ball_example only)
    bool operator==(const ProblemSel&) const = default;
  };
  struct Parameters {
    double mu = 0.01;
    double q = 3.0;
    double m1 = 9.0;
    double m2 = 1.0;
    double a = 1.0;
    double b = 1.0;
    double alpha = 1.0;
    double beta = 500.0;
    bool operator==(const Parameters&) const = default;
  };
  struct Sampling {
    int x_per_axis = 33;
    int t_count = 17;
    double t_min = 1e-2;
    double t_max = 1e2;
    int s_count = 201;
    std::optional<double> s_min;  ///< default -2 beta
    std::optional<double> s_max;  ///< default 2 beta
    bool operator==(const Sampling&) const = default;
  };
  struct SolverSpec {
    double tol = 1e-8;
    int max_iters = 20000;
    int path_points = 17;
    int mp_max_iters = 2000;
    std::uint64_t seed = 42;
    int random_starts = 3;
    double start_amplitude = 0.0;  ///< 0 means beta
    int weak_form_trials = 20;
    bool operator==(const SolverSpec&) const = default;
  };
  struct ConstantOverrides {
    std::optional<double> c1;
    std::optional<double> cq;
    bool operator==(const ConstantOverrides&) const = default;
  };

  DomainSpec domain;
  GridSpec grid;
  ProblemSel problem;
  Parameters parameters;
  std::vector<double> t_grid{1.0};
  Sampling sampling;
  SolverSpec solver;
  ConstantOverrides constants;
  std::string output_dir = "trisol_out";

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& config);

/// Hex FNV-1a 64 digest of the canonical serialization.
std::string config_hash(const RunConfig& config);

Domain make_domain(const RunConfig& config);
GridPtr make_grid(const RunConfig& config);
ProblemSpec make_problem(const RunConfig& config);

/// Built-in configuration of the ball example (radius 0.1, N = 3, radial grid).
RunConfig ball_example_config();

}  // namespace trisol
