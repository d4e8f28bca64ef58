#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trisol/functionals.hpp"
#include "trisol/geometry.hpp"

namespace trisol {

enum class PointKind { minimizer, mountain_pass, unknown };
enum class SolveStatus { converged, max_iterations, line_search_stall, diverged };

std::string to_string(PointKind kind);
std::string to_string(SolveStatus status);

struct IterationRecord {
  int iter = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

/// One critical point candidate. `grad_norm` is the discrete H^{-1} norm of the
/// residual, i.e. sup_v <gradient(u), v> / |v|_{H^1_0}; `residual_l2` is the
/// L2 norm of the strong-form residual.
struct CriticalPoint {
  Field u;
  double energy = 0.0;
  double grad_norm = 0.0;
  double residual_l2 = 0.0;
  double weak_residual = 0.0;
  PointKind kind = PointKind::unknown;
  SolveStatus status = SolveStatus::max_iterations;
  double t = 0.0;
  int iterations = 0;
  std::string start_label{};
  std::vector<IterationRecord> log{};

  bool converged() const { return status == SolveStatus::converged; }
};

struct DescentOptions {
  int max_iters = 20000;
  double tol = 1e-8;
  double armijo = 1e-4;
  double backtrack = 0.5;
  double min_step = 1e-14;
  /// Iterates whose sup norm exceeds this are reported as diverged.
  double blowup = 1e12;
};

struct MountainPassOptions {
  int path_points = 17;
  int max_iters = 2000;
  double tol = 1e-8;
  /// Climbing phase hands over to Newton refinement below this H^{-1} residual
  /// (relative to 1 + |u|_{H^1_0}).
  double refine_below = 1e-3;
  int newton_iters = 50;
};

struct FindThreeOptions {
  DescentOptions descent;
  MountainPassOptions mountain_pass;
  std::uint64_t seed = 42;
  int random_starts = 3;
  /// Sup norm of random starts; 0 means beta.
  double start_amplitude = 0.0;
  int weak_form_trials = 20;
  /// u_beta parameters for the +-u_beta starts (D defaults to the inradius).
  std::optional<double> d;
  std::optional<std::vector<double>> x0;
};

struct NamedStart {
  std::string label;
  Field u;
};

struct DescentSummary {
  std::string start_label{};
  SolveStatus status = SolveStatus::max_iterations;
  double energy = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  /// Index into SolutionSet::points this run deduplicated to.
  std::optional<std::size_t> point;
};

struct SolutionSet {
  double t = 0.0;
  std::vector<CriticalPoint> points;
  std::vector<std::vector<double>> pairwise_l2_distances;
  double distinctness_threshold = 0.0;
  std::vector<DescentSummary> descents;
  std::vector<IterationRecord> path_log;
  std::optional<std::string> warning;
  std::vector<std::string> notes;
};

void to_json(nlohmann::json& j, const IterationRecord& r);
/// Summary of a point without the nodal values.
void to_json(nlohmann::json& j, const CriticalPoint& p);
void to_json(nlohmann::json& j, const SolutionSet& s);

/// Critical-point machinery for one frozen problem: the H^1_0 Riesz map is
/// factored once and shared by every descent and path iteration.
class CriticalPointSolver {
 public:
  explicit CriticalPointSolver(FrozenProblem problem);
  ~CriticalPointSolver();
  CriticalPointSolver(CriticalPointSolver&&) noexcept;
  CriticalPointSolver& operator=(CriticalPointSolver&&) noexcept;

  const FrozenProblem& problem() const { return problem_; }

  /// Solves A p = r where A is the stiffness matrix of h10_norm_sq; p vanishes off the interior.
  Field riesz(const Field& r) const;
  /// sqrt(<r, A^{-1} r>).
  double dual_norm(const Field& r) const;

  /// Sobolev-gradient descent: direction -A^{-1} grad I, Barzilai-Borwein
  /// initial step in the H^1_0 metric, Armijo backtracking.
  CriticalPoint descend(const Field& u0, const DescentOptions& opts = {}, std::string label = "") const;

  /// Newton iteration on grad I = 0 with residual-decrease damping.
  CriticalPoint newton(const Field& u0, double tol, int max_iters) const;

  /// Discretized-path mountain pass between two separated fields. Repeatedly
  /// moves the highest interior path point with a damped climbing step (the
  /// tangential part of the descent direction reversed), redistributes the
  /// path by H^1_0 arclength, then refines the top point with Newton.
  CriticalPoint mountain_pass(const Field& u_low, const Field& u_high, const MountainPassOptions& opts = {},
                              std::vector<IterationRecord>* path_log = nullptr) const;

  /// max over `trials` seeded smooth v of |<grad u, grad v> - mu<F(u), v> + <u, v> - <g, v> + <Lap g, v>| / |v|_{H^1_0}.
  double verify_weak_form(const Field& u, int trials, std::uint64_t seed = 7) const;

  /// Descent from every start, deduplication, then a mountain pass between
  /// the two lowest minima (or between the lowest minimum and a lower-energy
  /// escape point when only one minimum exists).
  SolutionSet find_three(const std::vector<NamedStart>& starts, const FindThreeOptions& opts = {}) const;

  /// {0, u_beta, -u_beta, random_1..random_k}.
  std::vector<NamedStart> default_starts(const FindThreeOptions& opts) const;

  double distance(const Field& a, const Field& b) const;

 private:
  struct Factorization;
  FrozenProblem problem_;
  std::unique_ptr<Factorization> factor_;
};

/// Smoothed white noise: standard normal nodal values, `passes` Jacobi
/// smoothing sweeps, scaled to the given sup norm.
Field smoothed_noise(const GridPtr& grid, std::uint64_t seed, double amplitude, int passes = 3);

/// Largest relative mismatch between <gradient(u), v> and the central
/// difference (I(u + eps v) - I(u - eps v)) / (2 eps) over `trials` seeded
/// smoothed-noise pairs (u, v) of sup norm `amplitude`.
double gradient_check(const FrozenProblem& problem, int trials, std::uint64_t seed, double eps = 1e-5,
                      double amplitude = 1.0);

CriticalPoint descend(const ProblemSpec& spec, double t, const Field& u0, const DescentOptions& opts = {});
CriticalPoint mountain_pass(const ProblemSpec& spec, double t, const Field& u_low, const Field& u_high,
                            const MountainPassOptions& opts = {});
SolutionSet find_three(const ProblemSpec& spec, double t, const GridPtr& grid, const FindThreeOptions& opts = {});
double verify_weak_form(const ProblemSpec& spec, double t, const Field& u, int trials, std::uint64_t seed = 7);

}  // namespace trisol
