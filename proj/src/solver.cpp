#include "trisol/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "trisol/errors.hpp"
#include "trisol/testfn.hpp"

namespace trisol {

std::string to_string(PointKind kind) {
  switch (kind) {
    case PointKind::minimizer:
      return "minimizer";
    case PointKind::mountain_pass:
      return "mountain-pass";
    case PointKind::unknown:
      break;
  }
  return "unknown";
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::max_iterations:
      return "max-iterations";
    case SolveStatus::line_search_stall:
      return "line-search-stall";
    case SolveStatus::diverged:
      break;
  }
  return "diverged";
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

double dot(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sup_norm(const Field& u) {
  double m = 0.0;
  for (double v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

Field axpy(const Field& x, double alpha, const Field& d) {
  Field out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += alpha * d[i];
  return out;
}

}  // namespace

struct CriticalPointSolver::Factorization {
  std::vector<std::ptrdiff_t> row;  // node -> row, -1 off the interior
  std::vector<std::size_t> nodes;
  SparseMatrix stiffness;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
};

CriticalPointSolver::CriticalPointSolver(FrozenProblem problem)
    : problem_(std::move(problem)), factor_(std::make_unique<Factorization>()) {
  const Grid& grid = *problem_.grid();
  auto& f = *factor_;
  f.nodes = grid.interior_nodes();
  f.row.assign(grid.size(), -1);
  for (std::size_t k = 0; k < f.nodes.size(); ++k) f.row[f.nodes[k]] = static_cast<std::ptrdiff_t>(k);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(4 * grid.links().size());
  for (const Link& l : grid.links()) {
    const auto ra = f.row[l.a];
    const auto rb = f.row[l.b];
    if (ra >= 0) entries.emplace_back(ra, ra, l.weight);
    if (rb >= 0) entries.emplace_back(rb, rb, l.weight);
    if (ra >= 0 && rb >= 0) {
      entries.emplace_back(ra, rb, -l.weight);
      entries.emplace_back(rb, ra, -l.weight);
    }
  }
  const auto n = static_cast<Eigen::Index>(f.nodes.size());
  f.stiffness.resize(n, n);
  f.stiffness.setFromTriplets(entries.begin(), entries.end());
  f.ldlt.compute(f.stiffness);
  if (f.ldlt.info() != Eigen::Success) {
    throw Error("stiffness matrix factorization failed");
  }
}

CriticalPointSolver::~CriticalPointSolver() = default;
CriticalPointSolver::CriticalPointSolver(CriticalPointSolver&&) noexcept = default;
CriticalPointSolver& CriticalPointSolver::operator=(CriticalPointSolver&&) noexcept = default;

Field CriticalPointSolver::riesz(const Field& r) const {
  const auto& f = *factor_;
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(f.nodes.size()));
  for (std::size_t k = 0; k < f.nodes.size(); ++k) rhs[static_cast<Eigen::Index>(k)] = r[f.nodes[k]];
  const Eigen::VectorXd sol = f.ldlt.solve(rhs);
  Field p(problem_.grid());
  for (std::size_t k = 0; k < f.nodes.size(); ++k) p[f.nodes[k]] = sol[static_cast<Eigen::Index>(k)];
  return p;
}

double CriticalPointSolver::dual_norm(const Field& r) const { return std::sqrt(std::max(0.0, dot(r, riesz(r)))); }

double CriticalPointSolver::distance(const Field& a, const Field& b) const { return std::sqrt(l2_norm_sq(a - b)); }

namespace {

double residual_l2(const Field& r) {
  const Grid& g = r.grid();
  double s = 0.0;
  for (std::size_t i : g.interior_nodes()) s += r[i] * r[i] / g.cell_volume(i);
  return std::sqrt(s);
}

}  // namespace

CriticalPoint CriticalPointSolver::descend(const Field& u0, const DescentOptions& opts, std::string label) const {
  if (!(opts.tol > 0.0)) {
    throw PreconditionError("descent tolerance must be positive");
  }
  Field u = u0;
  u.enforce_dirichlet();
  Field r = problem_.gradient(u);
  Field p = riesz(r);
  double gn = std::sqrt(std::max(0.0, dot(r, p)));
  double energy = problem_.i_mu(u);
  double step = 1.0;
  double last_step = 0.0;

  CriticalPoint cp{.u = u};
  cp.t = problem_.t();
  cp.start_label = std::move(label);
  cp.status = SolveStatus::max_iterations;
  int iter = 0;
  for (;; ++iter) {
    cp.log.push_back({iter, energy, gn, last_step});
    if (gn < opts.tol) {
      cp.status = SolveStatus::converged;
      break;
    }
    if (iter >= opts.max_iters) break;
    if (!std::isfinite(gn) || sup_norm(u) > opts.blowup) {
      cp.status = SolveStatus::diverged;
      break;
    }
    const Field d = -1.0 * p;
    const double slope = -gn * gn;
    double alpha = step;
    double decrease = 0.0;
    bool accepted = false;
    while (alpha >= opts.min_step) {
      decrease = problem_.energy_difference(u, alpha * d);
      if (std::isfinite(decrease) && decrease <= opts.armijo * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= opts.backtrack;
    }
    if (!accepted) {
      cp.status = SolveStatus::line_search_stall;
      break;
    }
    Field u_next = axpy(u, alpha, d);
    Field r_next = problem_.gradient(u_next);
    double sy = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sy += alpha * d[i] * (r_next[i] - r[i]);
    const double s_as = alpha * alpha * gn * gn;
    step = (sy > 0.0 && std::isfinite(sy)) ? std::clamp(s_as / sy, 1e-10, 1e10) : std::min(2.0 * alpha, 1e10);
    u = std::move(u_next);
    r = std::move(r_next);
    p = riesz(r);
    gn = std::sqrt(std::max(0.0, dot(r, p)));
    energy += decrease;
    last_step = alpha;
  }
  cp.iterations = iter;
  cp.energy = problem_.i_mu(u);
  cp.grad_norm = gn;
  cp.residual_l2 = residual_l2(r);
  cp.kind = (cp.converged() && iter > 0) ? PointKind::minimizer : PointKind::unknown;
  cp.u = std::move(u);
  return cp;
}

CriticalPoint CriticalPointSolver::newton(const Field& u0, double tol, int max_iters) const {
  const auto& f = *factor_;
  Field u = u0;
  u.enforce_dirichlet();
  Field r = problem_.gradient(u);
  double gn = dual_norm(r);
  CriticalPoint cp{.u = u};
  cp.t = problem_.t();
  cp.status = SolveStatus::max_iterations;
  int iter = 0;
  for (;; ++iter) {
    cp.log.push_back({iter, problem_.i_mu(u), gn, 0.0});
    if (gn < tol) {
      cp.status = SolveStatus::converged;
      break;
    }
    if (iter >= max_iters) break;
    const auto diag = problem_.hessian_diagonal(u);
    SparseMatrix hessian = f.stiffness;
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(f.nodes.size()));
    for (std::size_t k = 0; k < f.nodes.size(); ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      hessian.coeffRef(kk, kk) += diag[f.nodes[k]];
      rhs[kk] = -r[f.nodes[k]];
    }
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(hessian);
    if (lu.info() != Eigen::Success) {
      cp.status = SolveStatus::line_search_stall;
      break;
    }
    const Eigen::VectorXd delta = lu.solve(rhs);
    Field d(problem_.grid());
    for (std::size_t k = 0; k < f.nodes.size(); ++k) d[f.nodes[k]] = delta[static_cast<Eigen::Index>(k)];
    double lambda = 1.0;
    bool accepted = false;
    Field u_next = u;
    Field r_next = r;
    double gn_next = gn;
    for (int halvings = 0; halvings < 30; ++halvings, lambda *= 0.5) {
      u_next = axpy(u, lambda, d);
      r_next = problem_.gradient(u_next);
      gn_next = dual_norm(r_next);
      if (std::isfinite(gn_next) && gn_next < gn) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      cp.status = SolveStatus::line_search_stall;
      break;
    }
    u = std::move(u_next);
    r = std::move(r_next);
    gn = gn_next;
    cp.log.back().step = lambda;
  }
  cp.iterations = iter;
  cp.energy = problem_.i_mu(u);
  cp.grad_norm = gn;
  cp.residual_l2 = residual_l2(r);
  cp.u = std::move(u);
  return cp;
}

namespace {

/// Resamples the polyline pts[first..last] (inclusive) into `count` points
/// equally spaced in H^1_0 arclength, endpoints kept.
std::vector<Field> resample(const std::vector<Field>& pts, std::size_t first, std::size_t last, std::size_t count) {
  std::vector<double> cum{0.0};
  for (std::size_t i = first; i < last; ++i) cum.push_back(cum.back() + std::sqrt(h10_norm_sq(pts[i + 1] - pts[i])));
  std::vector<Field> out;
  out.reserve(count);
  const double total = cum.back();
  for (std::size_t j = 0; j < count; ++j) {
    if (j == 0) {
      out.push_back(pts[first]);
      continue;
    }
    if (j + 1 == count) {
      out.push_back(pts[last]);
      continue;
    }
    const double target = total * static_cast<double>(j) / static_cast<double>(count - 1);
    std::size_t seg = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin());
    seg = std::clamp<std::size_t>(seg, 1, cum.size() - 1) - 1;
    const double len = cum[seg + 1] - cum[seg];
    const double w = len > 0.0 ? (target - cum[seg]) / len : 0.0;
    const Field& a = pts[first + seg];
    const Field& b = pts[first + seg + 1];
    out.push_back(axpy(a, w, b - a));
  }
  return out;
}

}  // namespace

CriticalPoint CriticalPointSolver::mountain_pass(const Field& u_low, const Field& u_high,
                                                 const MountainPassOptions& opts,
                                                 std::vector<IterationRecord>* path_log) const {
  if (opts.path_points < 3) {
    throw PreconditionError("mountain pass needs at least 3 path points");
  }
  const double threshold = 1e-3 * (1.0 + std::max(std::sqrt(l2_norm_sq(u_low)), std::sqrt(l2_norm_sq(u_high))));
  if (distance(u_low, u_high) <= threshold) {
    throw PreconditionError("mountain pass endpoints coincide (L2 distance <= " + std::to_string(threshold) + ")");
  }
  const std::size_t count = static_cast<std::size_t>(opts.path_points);
  std::vector<Field> path;
  for (std::size_t j = 0; j < count; ++j) {
    const double w = static_cast<double>(j) / static_cast<double>(count - 1);
    path.push_back(axpy(u_low, w, u_high - u_low));
  }
  std::vector<double> energies(count);
  for (std::size_t j = 0; j < count; ++j) energies[j] = problem_.i_mu(path[j]);
  const double end_level = std::max(energies.front(), energies.back());
  const double level_tol = 1e-12 * (1.0 + std::abs(end_level));

  double lambda = 1.0;
  std::size_t top = 1;
  int iter = 0;
  for (;; ++iter) {
    top = static_cast<std::size_t>(std::max_element(energies.begin() + 1, energies.end() - 1) - energies.begin());
    if (energies[top] <= end_level + level_tol) {
      throw PathCollapseError("path maximum " + std::to_string(energies[top]) +
                              " does not exceed the endpoint level " + std::to_string(end_level));
    }
    const Field r = problem_.gradient(path[top]);
    const Field p = riesz(r);
    const double gn = std::sqrt(std::max(0.0, dot(r, p)));
    if (path_log) path_log->push_back({iter, energies[top], gn, lambda});
    const double scale = 1.0 + std::sqrt(h10_norm_sq(path[top]));
    if (gn < opts.tol || gn < opts.refine_below * scale || iter >= opts.max_iters) break;

    // Damped descent of the top point; the step shrinks until its energy drops.
    bool moved = false;
    while (lambda > 1e-12) {
      Field candidate = axpy(path[top], -lambda, p);
      const double e = problem_.i_mu(candidate);
      if (e < energies[top]) {
        path[top] = std::move(candidate);
        energies[top] = e;
        moved = true;
        lambda = std::min(1.0, 1.5 * lambda);
        break;
      }
      lambda *= 0.5;
    }
    if (!moved) break;

    // Arclength redistribution, keeping the moved point as a vertex.
    double left = 0.0;
    double right = 0.0;
    for (std::size_t j = 0; j + 1 < count; ++j) {
      const double len = std::sqrt(h10_norm_sq(path[j + 1] - path[j]));
      (j < top ? left : right) += len;
    }
    auto split = static_cast<std::size_t>(std::lround((count - 1) * left / (left + right)));
    split = std::clamp<std::size_t>(split, 1, count - 2);
    auto head = resample(path, 0, top, split + 1);
    auto tail = resample(path, top, count - 1, count - split);
    std::vector<Field> next = std::move(head);
    next.insert(next.end(), tail.begin() + 1, tail.end());
    path = std::move(next);
    for (std::size_t j = 1; j + 1 < count; ++j) energies[j] = problem_.i_mu(path[j]);
  }

  CriticalPoint cp = newton(path[top], opts.tol, opts.newton_iters);
  cp.iterations += iter;
  cp.kind = PointKind::mountain_pass;
  const double d_low = distance(cp.u, u_low);
  const double d_high = distance(cp.u, u_high);
  if (cp.converged() && (d_low <= threshold || d_high <= threshold || cp.energy < end_level - level_tol)) {
    // Refinement slid back to an endpoint minimum: not a pass point.
    cp.kind = PointKind::unknown;
  }
  return cp;
}

Field smoothed_noise(const GridPtr& grid, std::uint64_t seed, double amplitude, int passes) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Field u(grid);
  for (std::size_t i : grid->interior_nodes()) u[i] = normal(rng);
  std::vector<double> num(grid->size());
  std::vector<double> den(grid->size());
  for (int pass = 0; pass < passes; ++pass) {
    std::fill(num.begin(), num.end(), 0.0);
    std::fill(den.begin(), den.end(), 0.0);
    for (const Link& l : grid->links()) {
      num[l.a] += l.weight * u[l.b];
      den[l.a] += l.weight;
      num[l.b] += l.weight * u[l.a];
      den[l.b] += l.weight;
    }
    for (std::size_t i : grid->interior_nodes()) u[i] = den[i] > 0.0 ? num[i] / den[i] : 0.0;
  }
  const double m = sup_norm(u);
  if (m > 0.0) u *= amplitude / m;
  return u;
}

double CriticalPointSolver::verify_weak_form(const Field& u, int trials, std::uint64_t seed) const {
  const ProblemSpec& spec = problem_.spec();
  const Field f(problem_.grid(), problem_.nonlinearity_values(u));
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    Field v = smoothed_noise(problem_.grid(), seed + static_cast<std::uint64_t>(k) * 7919u, 1.0, 10);
    const double norm = std::sqrt(h10_norm_sq(v));
    if (!(norm > 0.0)) continue;
    v *= 1.0 / norm;
    const double residual = h10_inner(u, v) - spec.mu * inner_product(f, v) + inner_product(u, v) -
                            inner_product(problem_.g(), v) + inner_product(problem_.lap_g(), v);
    worst = std::max(worst, std::abs(residual));
  }
  return worst;
}

std::vector<NamedStart> CriticalPointSolver::default_starts(const FindThreeOptions& opts) const {
  const GridPtr& grid = problem_.grid();
  const Domain& domain = grid->domain();
  const ProblemSpec& spec = problem_.spec();
  std::vector<NamedStart> starts;
  starts.push_back({"zero", Field(grid)});
  const double d = opts.d.value_or(inradius(domain, 64));
  const std::vector<double> x0 = opts.x0.value_or(inradius_center(domain, 64));
  Field ub = build_u_beta(grid, x0, d, spec.beta);
  starts.push_back({"u_beta", ub});
  starts.push_back({"-u_beta", -1.0 * ub});
  const double amplitude = opts.start_amplitude > 0.0 ? opts.start_amplitude : spec.beta;
  for (int k = 0; k < opts.random_starts; ++k) {
    starts.push_back({"random_" + std::to_string(k + 1),
                      smoothed_noise(grid, opts.seed + static_cast<std::uint64_t>(k), amplitude, 3)});
  }
  return starts;
}

SolutionSet CriticalPointSolver::find_three(const std::vector<NamedStart>& starts, const FindThreeOptions& opts) const {
  SolutionSet set;
  set.t = problem_.t();
  std::vector<CriticalPoint> candidates;
  std::vector<CriticalPoint> escaped;
  for (const auto& start : starts) {
    CriticalPoint cp = descend(start.u, opts.descent, start.label);
    set.descents.push_back({cp.start_label, cp.status, cp.energy, cp.grad_norm, cp.iterations, std::nullopt});
    if (cp.converged()) {
      candidates.push_back(std::move(cp));
    } else if (cp.status == SolveStatus::diverged) {
      escaped.push_back(std::move(cp));
    }
  }

  auto threshold_of = [](const std::vector<CriticalPoint>& pts) {
    double m = 0.0;
    for (const auto& p : pts) m = std::max(m, std::sqrt(l2_norm_sq(p.u)));
    return 1e-3 * (1.0 + m);
  };
  auto dedup = [&](std::vector<CriticalPoint>& pts, double thr) {
    std::vector<CriticalPoint> kept;
    for (auto& p : pts) {
      bool fresh = true;
      for (auto& k : kept) {
        if (distance(k.u, p.u) <= thr) {
          fresh = false;
          if (k.kind == PointKind::unknown) k.kind = p.kind;
          break;
        }
      }
      if (fresh) kept.push_back(std::move(p));
    }
    pts = std::move(kept);
  };
  dedup(candidates, threshold_of(candidates));

  std::vector<const CriticalPoint*> minima;
  for (const auto& c : candidates) {
    if (c.kind == PointKind::minimizer) minima.push_back(&c);
  }
  std::sort(minima.begin(), minima.end(), [](const auto* a, const auto* b) { return a->energy < b->energy; });

  std::optional<std::pair<Field, Field>> ends;
  if (minima.size() >= 2) {
    ends.emplace(minima[0]->u, minima[1]->u);
  } else if (minima.size() == 1) {
    const CriticalPoint& low = *minima[0];
    const double level = low.energy - 1e-9 * (1.0 + std::abs(low.energy));
    for (const auto& e : escaped) {
      if (problem_.i_mu(e.u) < level) {
        ends.emplace(low.u, e.u);
        set.notes.push_back("mountain pass towards the escaped iterate of start '" + e.start_label + "'");
        break;
      }
    }
    for (std::size_t s = 0; !ends && s < starts.size(); ++s) {
      if (sup_norm(starts[s].u) == 0.0) continue;
      double c = 1.0;
      for (int k = 0; k < 64; ++k, c *= 2.0) {
        Field e = axpy(low.u, c, starts[s].u);
        if (problem_.i_mu(e) < level) {
          set.notes.push_back("mountain pass towards minimizer + " + std::to_string(c) + " * start '" +
                              starts[s].label + "' (energy below the minimum)");
          ends.emplace(low.u, std::move(e));
          break;
        }
      }
    }
    if (!ends) set.notes.emplace_back("single minimizer and no lower-energy point found along the start directions");
  }
  if (ends) {
    try {
      CriticalPoint mp = mountain_pass(ends->first, ends->second, opts.mountain_pass, &set.path_log);
      mp.start_label = "mountain_pass";
      if (mp.converged()) {
        candidates.push_back(std::move(mp));
      } else {
        set.notes.push_back("mountain pass did not converge (status " + to_string(mp.status) +
                            ", residual " + std::to_string(mp.grad_norm) + ")");
      }
    } catch (const PathCollapseError& e) {
      set.notes.push_back(std::string("mountain pass: ") + e.what());
    }
  }

  set.distinctness_threshold = threshold_of(candidates);
  dedup(candidates, set.distinctness_threshold);
  for (auto& c : candidates) {
    c.weak_residual = verify_weak_form(c.u, opts.weak_form_trials, opts.seed + 1000);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const CriticalPoint& a, const CriticalPoint& b) { return a.energy < b.energy; });
  set.points = std::move(candidates);
  const std::size_t n = set.points.size();
  set.pairwise_l2_distances.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(set.points[i].u, set.points[j].u);
      set.pairwise_l2_distances[i][j] = set.pairwise_l2_distances[j][i] = d;
    }
  }
  for (auto& summary : set.descents) {
    for (std::size_t i = 0; i < n; ++i) {
      if (set.points[i].start_label == summary.start_label) summary.point = i;
    }
  }
  if (n < 3) {
    set.warning = "fewer-than-three: found " + std::to_string(n) +
                  " distinct critical point(s); existence is not findability by this heuristic";
  }
  return set;
}

double gradient_check(const FrozenProblem& problem, int trials, std::uint64_t seed, double eps, double amplitude) {
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    const auto base = seed + 2 * static_cast<std::uint64_t>(k);
    const Field u = smoothed_noise(problem.grid(), base, amplitude, 1);
    const Field v = smoothed_noise(problem.grid(), base + 1, amplitude, 1);
    const double analytic = dot(problem.gradient(u), v);
    const double numeric = (problem.i_mu(axpy(u, eps, v)) - problem.i_mu(axpy(u, -eps, v))) / (2.0 * eps);
    const double denom = std::max(std::abs(analytic), std::numeric_limits<double>::min());
    worst = std::max(worst, std::abs(numeric - analytic) / denom);
  }
  return worst;
}

CriticalPoint descend(const ProblemSpec& spec, double t, const Field& u0, const DescentOptions& opts) {
  return CriticalPointSolver(FrozenProblem(spec, u0.grid_ptr(), t)).descend(u0, opts);
}

CriticalPoint mountain_pass(const ProblemSpec& spec, double t, const Field& u_low, const Field& u_high,
                            const MountainPassOptions& opts) {
  return CriticalPointSolver(FrozenProblem(spec, u_low.grid_ptr(), t)).mountain_pass(u_low, u_high, opts);
}

SolutionSet find_three(const ProblemSpec& spec, double t, const GridPtr& grid, const FindThreeOptions& opts) {
  CriticalPointSolver solver(FrozenProblem(spec, grid, t));
  return solver.find_three(solver.default_starts(opts), opts);
}

double verify_weak_form(const ProblemSpec& spec, double t, const Field& u, int trials, std::uint64_t seed) {
  return CriticalPointSolver(FrozenProblem(spec, u.grid_ptr(), t)).verify_weak_form(u, trials, seed);
}

void to_json(nlohmann::json& j, const IterationRecord& r) {
  j = nlohmann::json{{"iter", r.iter}, {"energy", r.energy}, {"grad_norm", r.grad_norm}, {"step", r.step}};
}

void to_json(nlohmann::json& j, const CriticalPoint& p) {
  j = nlohmann::json{{"energy", p.energy},
                     {"grad_norm", p.grad_norm},
                     {"residual_l2", p.residual_l2},
                     {"weak_residual", p.weak_residual},
                     {"kind", to_string(p.kind)},
                     {"status", to_string(p.status)},
                     {"t", p.t},
                     {"iterations", p.iterations},
                     {"start_label", p.start_label},
                     {"l2_norm", std::sqrt(l2_norm_sq(p.u))},
                     {"h10_norm", std::sqrt(h10_norm_sq(p.u))},
                     {"sup_norm", sup_norm(p.u)}};
}

void to_json(nlohmann::json& j, const SolutionSet& s) {
  nlohmann::json descents = nlohmann::json::array();
  for (const auto& d : s.descents) {
    descents.push_back({{"start_label", d.start_label},
                        {"status", to_string(d.status)},
                        {"energy", d.energy},
                        {"grad_norm", d.grad_norm},
                        {"iterations", d.iterations},
                        {"point", d.point ? nlohmann::json(*d.point) : nlohmann::json(nullptr)}});
  }
  j = nlohmann::json{{"t", s.t},
                     {"count", s.points.size()},
                     {"points", s.points},
                     {"pairwise_l2_distances", s.pairwise_l2_distances},
                     {"distinctness_threshold", s.distinctness_threshold},
                     {"descents", descents},
                     {"warning", s.warning ? nlohmann::json(*s.warning) : nlohmann::json(nullptr)},
                     {"notes", s.notes}};
}

}  // namespace trisol
