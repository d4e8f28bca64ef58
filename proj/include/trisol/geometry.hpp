#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace trisol {

using Point = std::span<const double>;

struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Domain given by a signed-distance sampler (negative inside) and a bounding box.
struct Masked {
  std::function<double(Point)> signed_distance;
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Bounded open subset of R^N.
class Domain {
 public:
  using Shape = std::variant<Ball, Box, Masked>;

  explicit Domain(Shape shape);

  static Domain ball(std::vector<double> center, double radius);
  static Domain box(std::vector<double> lower, std::vector<double> upper);

  int dim() const { return dim_; }
  const Shape& shape() const { return shape_; }
  const Ball* as_ball() const { return std::get_if<Ball>(&shape_); }

  /// Negative inside, zero on the boundary, positive outside. Exact for Ball
  /// and Box (for Box, the L-infinity-free Euclidean distance to the faces).
  double signed_distance(Point x) const;

  std::vector<double> lower() const;
  std::vector<double> upper() const;

  /// Lebesgue measure; nullopt for Masked domains.
  std::optional<double> measure() const;

  /// Center of the largest inscribed ball for Ball and Box; nullopt for Masked.
  std::optional<std::vector<double>> incenter() const;

  std::string describe() const;

 private:
  Shape shape_;
  int dim_ = 0;
};

/// Edge of the discrete gradient graph: the H^1_0 energy is sum weight*(u_a - u_b)^2.
struct Link {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  double weight = 0.0;
};

/// Uniform lattice over a domain with a Dirichlet mask, quadrature weights and
/// the link graph that defines the discrete Laplacian. Immutable once built.
///
/// Two flavors share this representation: Cartesian lattices (cell volume h^N,
/// (2N+1)-point stencil) and the radial reduction of a ball (nodes r_j = j h,
/// shell volumes as weights, links weighted by the sphere area at r_{j+1/2}).
class Grid {
 public:
  static std::shared_ptr<const Grid> cartesian(const Domain& domain, double h);
  static std::shared_ptr<const Grid> cartesian_nodes(const Domain& domain, int nodes_per_axis);
  static std::shared_ptr<const Grid> radial(const Domain& ball_domain, int intervals);

  const Domain& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }
  bool is_radial() const { return radial_; }
  double h() const { return h_; }
  std::size_t size() const { return interior_.size(); }
  const std::vector<int>& shape() const { return shape_; }

  Point coords(std::size_t i) const { return {coords_.data() + i * dim(), static_cast<std::size_t>(dim())}; }
  /// Radius r_j for radial grids, first coordinate otherwise.
  double abscissa(std::size_t i) const { return coords_[i * dim()]; }
  bool interior(std::size_t i) const { return interior_[i] != 0; }
  double cell_volume(std::size_t i) const { return volume_[i]; }
  std::span<const Link> links() const { return links_; }
  const std::vector<std::size_t>& interior_nodes() const { return interior_nodes_; }

  /// Lattice index of a Cartesian node (row-major, first axis slowest).
  std::size_t index(std::span<const int> ijk) const;

 private:
  Grid(Domain domain, double h, bool radial);
  void finalize();

  Domain domain_;
  double h_ = 0.0;
  bool radial_ = false;
  std::vector<int> shape_;
  std::vector<double> coords_;
  std::vector<char> interior_;
  std::vector<double> volume_;
  std::vector<Link> links_;
  std::vector<std::size_t> interior_nodes_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Nodal scalar function on a grid, identically zero off the interior mask.
class Field {
 public:
  explicit Field(GridPtr grid);
  Field(GridPtr grid, std::vector<double> values);

  static Field sample(GridPtr grid, const std::function<double(Point)>& fn);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  /// Zeroes every non-interior node.
  void enforce_dirichlet();

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Midpoint rule over interior nodes.
double integrate(const Field& field);
/// sum over interior nodes of vol_i * a_i * b_i
double inner_product(const Field& a, const Field& b);
double l2_norm_sq(const Field& field);
/// Sum over links of weight * (u_a - u_b)^2, i.e. the squared discrete gradient L2 norm.
double h10_norm_sq(const Field& field);
/// Discrete gradient inner product <grad u, grad v>.
double h10_inner(const Field& u, const Field& v);
/// (2N+1)-point Dirichlet Laplacian (negated); zero on non-interior nodes.
Field apply_neg_laplacian(const Field& field);

/// Largest distance from a point of the domain to its boundary.
///
/// Exact for Ball and Box; for Masked, the maximum of -signed_distance over a
/// lattice with `resolution` nodes along the longest bounding-box side.
double inradius(const Domain& domain, int resolution);

/// Point attaining the inradius (lattice argmax for Masked domains).
std::vector<double> inradius_center(const Domain& domain, int resolution);

/// CSV with columns x1..xN,value; optional comment header lines prefixed by '#'.
std::string field_to_csv(const Field& field, const std::vector<std::string>& header_comments = {});

}  // namespace trisol
