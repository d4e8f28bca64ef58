#include "trisol/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "trisol/constants.hpp"
#include "trisol/errors.hpp"

namespace trisol {

namespace {

int shape_dim(const Domain::Shape& shape) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return static_cast<int>(s.center.size());
        } else {
          return static_cast<int>(s.lower.size());
        }
      },
      shape);
}

double box_signed_distance(const std::vector<double>& lower, const std::vector<double>& upper, Point x) {
  double outside_sq = 0.0;
  double inside = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < lower.size(); ++k) {
    const double half = 0.5 * (upper[k] - lower[k]);
    const double c = 0.5 * (upper[k] + lower[k]);
    const double q = std::abs(x[k] - c) - half;
    outside_sq += std::max(q, 0.0) * std::max(q, 0.0);
    inside = std::max(inside, q);
  }
  return outside_sq > 0.0 ? std::sqrt(outside_sq) : inside;
}

}  // namespace

Domain::Domain(Shape shape) : shape_(std::move(shape)), dim_(shape_dim(shape_)) {
  if (dim_ < 1) {
    throw PreconditionError("domain dimension must be at least 1");
  }
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    if (!(b->radius > 0.0)) {
      throw PreconditionError("ball radius must be positive");
    }
  } else {
    const auto lo = lower();
    const auto hi = upper();
    if (lo.size() != hi.size()) {
      throw PreconditionError("box bounds have different dimensions");
    }
    for (std::size_t k = 0; k < lo.size(); ++k) {
      if (!(hi[k] > lo[k])) {
        throw PreconditionError("upper bound must exceed lower bound on every axis");
      }
    }
    if (const auto* m = std::get_if<Masked>(&shape_); m != nullptr && !m->signed_distance) {
      throw PreconditionError("masked domain needs a signed-distance sampler");
    }
  }
}

Domain Domain::ball(std::vector<double> center, double radius) { return Domain(Ball{std::move(center), radius}); }

Domain Domain::box(std::vector<double> lower, std::vector<double> upper) {
  return Domain(Box{std::move(lower), std::move(upper)});
}

double Domain::signed_distance(Point x) const {
  return std::visit(
      [x](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          double r2 = 0.0;
          for (std::size_t k = 0; k < s.center.size(); ++k) {
            r2 += (x[k] - s.center[k]) * (x[k] - s.center[k]);
          }
          return std::sqrt(r2) - s.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          return box_signed_distance(s.lower, s.upper, x);
        } else {
          return s.signed_distance(x);
        }
      },
      shape_);
}

std::vector<double> Domain::lower() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    std::vector<double> lo(b->center);
    for (auto& v : lo) v -= b->radius;
    return lo;
  }
  if (const auto* b = std::get_if<Box>(&shape_)) return b->lower;
  return std::get<Masked>(shape_).lower;
}

std::vector<double> Domain::upper() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    std::vector<double> hi(b->center);
    for (auto& v : hi) v += b->radius;
    return hi;
  }
  if (const auto* b = std::get_if<Box>(&shape_)) return b->upper;
  return std::get<Masked>(shape_).upper;
}

std::optional<double> Domain::measure() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return ball_volume(dim_, b->radius);
  if (const auto* b = std::get_if<Box>(&shape_)) {
    double v = 1.0;
    for (std::size_t k = 0; k < b->lower.size(); ++k) v *= b->upper[k] - b->lower[k];
    return v;
  }
  return std::nullopt;
}

std::optional<std::vector<double>> Domain::incenter() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return b->center;
  if (const auto* b = std::get_if<Box>(&shape_)) {
    std::vector<double> c(b->lower.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = 0.5 * (b->lower[k] + b->upper[k]);
    return c;
  }
  return std::nullopt;
}

std::string Domain::describe() const {
  std::ostringstream os;
  auto vec = [&os](const std::vector<double>& v) {
    os << '[';
    for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k];
    os << ']';
  };
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    os << "ball(center=";
    vec(b->center);
    os << ", radius=" << b->radius << ')';
  } else if (const auto* b = std::get_if<Box>(&shape_)) {
    os << "box(lower=";
    vec(b->lower);
    os << ", upper=";
    vec(b->upper);
    os << ')';
  } else {
    os << "masked(dim=" << dim_ << ')';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

Grid::Grid(Domain domain, double h, bool radial) : domain_(std::move(domain)), h_(h), radial_(radial) {}

GridPtr Grid::cartesian(const Domain& domain, double h) {
  if (!(h > 0.0)) {
    throw PreconditionError("mesh spacing must be positive");
  }
  std::shared_ptr<Grid> grid(new Grid(domain, h, false));
  const int dim = domain.dim();
  const auto lo = domain.lower();
  const auto hi = domain.upper();
  // One padding layer on each side so every interior node has all 2N neighbors.
  std::vector<double> origin(dim);
  std::size_t total = 1;
  for (int k = 0; k < dim; ++k) {
    const int cells = static_cast<int>(std::ceil((hi[k] - lo[k]) / h - 1e-9));
    grid->shape_.push_back(cells + 3);
    origin[k] = lo[k] - h;
    total *= static_cast<std::size_t>(grid->shape_[k]);
  }
  if (total > std::numeric_limits<std::uint32_t>::max()) {
    throw PreconditionError("grid too large");
  }
  grid->coords_.resize(total * dim);
  grid->interior_.assign(total, 0);
  grid->volume_.assign(total, std::pow(h, dim));
  std::vector<int> ijk(dim, 0);
  for (std::size_t i = 0; i < total; ++i) {
    for (int k = 0; k < dim; ++k) grid->coords_[i * dim + k] = origin[k] + ijk[k] * h;
    grid->interior_[i] = domain.signed_distance(grid->coords(i)) < -0.25 * h ? 1 : 0;
    for (int k = dim - 1; k >= 0; --k) {
      if (++ijk[k] < grid->shape_[k]) break;
      ijk[k] = 0;
    }
  }
  const double link_weight = std::pow(h, dim - 2);
  std::vector<std::size_t> stride(dim, 1);
  for (int k = dim - 2; k >= 0; --k) stride[k] = stride[k + 1] * grid->shape_[k + 1];
  std::fill(ijk.begin(), ijk.end(), 0);
  for (std::size_t i = 0; i < total; ++i) {
    for (int k = 0; k < dim; ++k) {
      if (ijk[k] + 1 < grid->shape_[k]) {
        const std::size_t j = i + stride[k];
        if (grid->interior_[i] || grid->interior_[j]) {
          grid->links_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), link_weight});
        }
      }
    }
    for (int k = dim - 1; k >= 0; --k) {
      if (++ijk[k] < grid->shape_[k]) break;
      ijk[k] = 0;
    }
  }
  grid->finalize();
  return grid;
}

GridPtr Grid::cartesian_nodes(const Domain& domain, int nodes_per_axis) {
  if (nodes_per_axis < 2) {
    throw PreconditionError("need at least 2 nodes per axis");
  }
  const auto lo = domain.lower();
  const auto hi = domain.upper();
  double extent = 0.0;
  for (std::size_t k = 0; k < lo.size(); ++k) extent = std::max(extent, hi[k] - lo[k]);
  return cartesian(domain, extent / (nodes_per_axis - 1));
}

GridPtr Grid::radial(const Domain& ball_domain, int intervals) {
  const Ball* ball = ball_domain.as_ball();
  if (ball == nullptr) {
    throw PreconditionError("radial reduction needs a ball domain");
  }
  if (intervals < 2) {
    throw PreconditionError("radial grid needs at least 2 intervals");
  }
  const int n = ball_domain.dim();
  const double h = ball->radius / intervals;
  std::shared_ptr<Grid> grid(new Grid(ball_domain, h, true));
  const std::size_t total = static_cast<std::size_t>(intervals) + 1;
  grid->shape_ = {static_cast<int>(total)};
  grid->coords_.assign(total * n, 0.0);
  grid->interior_.assign(total, 0);
  grid->volume_.assign(total, 0.0);
  const double sphere_area = 2.0 * std::exp(0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n));
  for (std::size_t j = 0; j < total; ++j) {
    const double r = j * h;
    for (int k = 0; k < n; ++k) grid->coords_[j * n + k] = ball->center[k];
    grid->coords_[j * n] += r;
    grid->interior_[j] = j + 1 < total ? 1 : 0;
    const double outer = std::min(r + 0.5 * h, ball->radius);
    const double inner = std::max(r - 0.5 * h, 0.0);
    grid->volume_[j] = sphere_area / n * (std::pow(outer, n) - std::pow(inner, n));
  }
  for (std::size_t j = 0; j + 1 < total; ++j) {
    const double mid = (j + 0.5) * h;
    grid->links_.push_back({static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(j + 1),
                            sphere_area * std::pow(mid, n - 1) / h});
  }
  grid->finalize();
  return grid;
}

void Grid::finalize() {
  for (std::size_t i = 0; i < interior_.size(); ++i) {
    if (interior_[i]) interior_nodes_.push_back(i);
  }
  if (interior_nodes_.empty()) {
    throw EmptyInteriorError("no grid node lies inside " + domain_.describe() + " at h = " + std::to_string(h_));
  }
}

std::size_t Grid::index(std::span<const int> ijk) const {
  std::size_t i = 0;
  for (std::size_t k = 0; k < shape_.size(); ++k) i = i * shape_[k] + ijk[k];
  return i;
}

// ---------------------------------------------------------------------------

Field::Field(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

Field::Field(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) {
    throw PreconditionError("field size does not match grid");
  }
  enforce_dirichlet();
}

Field Field::sample(GridPtr grid, const std::function<double(Point)>& fn) {
  Field f(std::move(grid));
  for (std::size_t i : f.grid().interior_nodes()) f.values_[i] = fn(f.grid().coords(i));
  return f;
}

void Field::enforce_dirichlet() {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!grid_->interior(i)) values_[i] = 0.0;
  }
}

Field& Field::operator+=(const Field& other) {
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

double integrate(const Field& field) {
  const Grid& g = field.grid();
  double sum = 0.0;
  for (std::size_t i : g.interior_nodes()) sum += g.cell_volume(i) * field[i];
  return sum;
}

double inner_product(const Field& a, const Field& b) {
  const Grid& g = a.grid();
  double sum = 0.0;
  for (std::size_t i : g.interior_nodes()) sum += g.cell_volume(i) * a[i] * b[i];
  return sum;
}

double l2_norm_sq(const Field& field) { return inner_product(field, field); }

double h10_inner(const Field& u, const Field& v) {
  double sum = 0.0;
  for (const Link& l : u.grid().links()) sum += l.weight * (u[l.a] - u[l.b]) * (v[l.a] - v[l.b]);
  return sum;
}

double h10_norm_sq(const Field& field) { return h10_inner(field, field); }

Field apply_neg_laplacian(const Field& field) {
  const Grid& g = field.grid();
  Field out(field.grid_ptr());
  for (const Link& l : g.links()) {
    const double flux = l.weight * (field[l.a] - field[l.b]);
    out[l.a] += flux;
    out[l.b] -= flux;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = g.interior(i) ? out[i] / g.cell_volume(i) : 0.0;
  return out;
}

namespace {

std::pair<double, std::vector<double>> masked_inradius(const Domain& domain, int resolution) {
  if (resolution < 8) {
    throw PreconditionError("inradius search needs at least 8 nodes per axis");
  }
  const auto grid = Grid::cartesian_nodes(domain, resolution);
  double best = -1.0;
  std::size_t arg = 0;
  for (std::size_t i : grid->interior_nodes()) {
    const double depth = -domain.signed_distance(grid->coords(i));
    if (depth > best) {
      best = depth;
      arg = i;
    }
  }
  const auto c = grid->coords(arg);
  return {best, std::vector<double>(c.begin(), c.end())};
}

}  // namespace

double inradius(const Domain& domain, int resolution) {
  if (const auto* b = domain.as_ball()) return b->radius;
  if (const auto* b = std::get_if<Box>(&domain.shape())) {
    double side = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < b->lower.size(); ++k) side = std::min(side, b->upper[k] - b->lower[k]);
    return 0.5 * side;
  }
  return masked_inradius(domain, resolution).first;
}

std::vector<double> inradius_center(const Domain& domain, int resolution) {
  if (auto c = domain.incenter()) return *c;
  return masked_inradius(domain, resolution).second;
}

std::string field_to_csv(const Field& field, const std::vector<std::string>& header_comments) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& line : header_comments) os << "# " << line << '\n';
  const Grid& g = field.grid();
  for (int k = 0; k < g.dim(); ++k) os << 'x' << (k + 1) << ',';
  os << "value\n";
  for (std::size_t i = 0; i < field.size(); ++i) {
    for (double x : g.coords(i)) os << x << ',';
    os << field[i] << '\n';
  }
  return os.str();
}

}  // namespace trisol
