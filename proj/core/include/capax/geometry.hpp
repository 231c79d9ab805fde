#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "capax/jet.hpp"

namespace capax {

struct Ball {
  double radius = 1.0;
};

struct Ellipsoid {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
};

/// Real spherical harmonic term, amplitude relative to the base radius.
struct Harmonic {
  int degree = 0;
  int order = 0;
  double amplitude = 0.0;
};

/// r(w) = base_radius * (1 + sum amplitude * Y_lm(w)) with orthonormal real Y_lm.
struct PerturbedSphere {
  double base_radius = 1.0;
  std::vector<Harmonic> harmonics;
};

struct DomainSpec {
  std::variant<Ball, Ellipsoid, PerturbedSphere> kind;
  int dimension = 3;
  /// Rigid translation of the shape; the shape is star-shaped about this point.
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  std::string name;
};

/// Throws InvalidDomain on non-positive lengths; does not check perturbation positivity.
void validate(const DomainSpec& spec);

DomainSpec parse_domain_spec(std::string_view json_text);
DomainSpec load_domain_spec(const std::string& path);
std::string domain_spec_to_json(const DomainSpec& spec);
std::string kind_name(const DomainSpec& spec);

/// Unit outward normal and mean curvature (sum of principal curvatures) at a surface point.
struct SurfaceFrame {
  Eigen::Vector3d normal;
  double mean_curvature = 0.0;
};

/// Analytic description of a star-shaped boundary in shape-local coordinates.
class Shape {
 public:
  virtual ~Shape() = default;

  /// Distance from the local origin to the surface along the unit direction `dir`.
  virtual double radius(const Eigen::Vector3d& dir) const = 0;
  /// Negative inside, positive outside, gradient pointing outwards.
  virtual double implicit(const Eigen::Vector3d& x) const = 0;
  virtual Jet implicit_jet(const Eigen::Vector3d& x) const = 0;
  /// Degree-zero extension R(x) = radius(x / |x|).
  virtual Jet radial_jet(const Eigen::Vector3d& x) const = 0;
  virtual double circumradius() const = 0;

  virtual Eigen::Vector3d normal(const Eigen::Vector3d& x) const;
  SurfaceFrame frame(const Eigen::Vector3d& x) const;
};

std::shared_ptr<const Shape> make_shape(const DomainSpec& spec);

/// Orthonormal real spherical harmonic (no Condon-Shortley phase) at a unit direction.
double real_spherical_harmonic(int degree, int order, const Eigen::Vector3d& dir);

/// Position on the true surface and area density with respect to the reference
/// triangle {(xi, eta): xi, eta >= 0, xi + eta <= 1}.
struct SurfacePoint {
  Eigen::Vector3d position;
  double jacobian = 0.0;
};

/// Triangulated boundary. Panels are icosphere triangles mapped onto the analytic
/// surface by the radial parametrization; per-panel data is sampled on the true
/// surface. Immutable once built.
class SurfaceMesh {
 public:
  static constexpr int kNodesPerPanel = 7;

  int dimension() const { return 3; }
  int level() const { return level_; }
  std::size_t size() const { return panels_.size(); }

  const DomainSpec& spec() const { return spec_; }
  const Shape& shape() const { return *shape_; }
  const Eigen::Vector3d& center() const { return spec_.center; }

  const std::vector<Eigen::Vector3d>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& panels() const { return panels_; }

  const Eigen::Vector3d& centroid(std::size_t i) const { return centroid_[i]; }
  double area(std::size_t i) const { return area_[i]; }
  const Eigen::Vector3d& normal(std::size_t i) const { return normal_[i]; }
  double mean_curvature(std::size_t i) const { return curvature_[i]; }
  double support(std::size_t i) const { return support_[i]; }
  double diameter(std::size_t i) const { return diameter_[i]; }

  const std::vector<double>& areas() const { return area_; }
  const std::vector<double>& mean_curvatures() const { return curvature_; }
  const std::vector<double>& supports() const { return support_; }

  /// Far-field quadrature nodes of panel i (kNodesPerPanel entries, weights sum to area(i)).
  const Eigen::Vector3d& node(std::size_t i, int k) const {
    return node_pos_[i * kNodesPerPanel + k];
  }
  double node_weight(std::size_t i, int k) const { return node_w_[i * kNodesPerPanel + k]; }

  /// Maps reference coordinates (xi, eta) of panel i onto the surface.
  SurfacePoint map(std::size_t i, double xi, double eta) const;

  double total_area() const;
  /// True when `x` (world coordinates) lies strictly outside the closed domain.
  bool is_exterior(const Eigen::Vector3d& x) const;
  /// Surface distance from the shape center along the direction of `x - center`.
  double boundary_radius(const Eigen::Vector3d& dir) const;

  std::string to_off() const;

 private:
  friend SurfaceMesh build_mesh(const DomainSpec& spec, int level);

  DomainSpec spec_;
  std::shared_ptr<const Shape> shape_;
  int level_ = 0;

  std::vector<Eigen::Vector3d> directions_;  // icosphere vertices on the unit sphere
  std::vector<Eigen::Vector3d> vertices_;
  std::vector<std::array<int, 3>> panels_;

  std::vector<Eigen::Vector3d> centroid_;
  std::vector<double> area_;
  std::vector<Eigen::Vector3d> normal_;
  std::vector<double> curvature_;
  std::vector<double> support_;
  std::vector<double> diameter_;
  std::vector<double> plane_offset_;  // distance of the chord plane from the local origin
  std::vector<double> chord_area_;    // area of the chord triangle on the unit sphere

  std::vector<Eigen::Vector3d> node_pos_;
  std::vector<double> node_w_;
};

/// Icosphere subdivision of `level` steps (20 * 4^level panels) mapped onto the shape.
SurfaceMesh build_mesh(const DomainSpec& spec, int level);

/// |Omega| by the divergence theorem, (1/3) int <x - center, nu> over the panel nodes.
double enclosed_volume(const SurfaceMesh& mesh);

/// Minimum over panels of <x, nu>; positive certifies star-shapedness about the origin.
double starshapedness(const SurfaceMesh& mesh);

}  // namespace capax
