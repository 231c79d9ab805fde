#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "capax/errors.hpp"
#include "capax/geometry.hpp"
#include "capax/quadrature.hpp"

namespace capax {

namespace {

struct Icosphere {
  std::vector<Eigen::Vector3d> dirs;
  std::vector<std::array<int, 3>> faces;
};

Icosphere icosphere(int level) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  Icosphere ico;
  ico.dirs = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
              {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  ico.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
               {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
               {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  // Face 0 and its antipode centered on the x axis; central sub-faces keep the centroid there.
  const Eigen::Vector3d axis = (ico.dirs[0] + ico.dirs[11] + ico.dirs[5]).normalized();
  const Eigen::Matrix3d rot = Eigen::Quaterniond::FromTwoVectors(axis, Eigen::Vector3d::UnitX()).toRotationMatrix();
  for (auto& d : ico.dirs) d = (rot * d).normalized();
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      ico.dirs.push_back((ico.dirs[a] + ico.dirs[b]).normalized());
      const int idx = static_cast<int>(ico.dirs.size()) - 1;
      mid.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(ico.faces.size() * 4);
    for (const auto& f : ico.faces) {
      const int a = midpoint(f[0], f[1]);
      const int b = midpoint(f[1], f[2]);
      const int c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    ico.faces = std::move(next);
  }
  for (auto& f : ico.faces) {
    const auto& p0 = ico.dirs[f[0]];
    const Eigen::Vector3d n = (ico.dirs[f[1]] - p0).cross(ico.dirs[f[2]] - p0);
    if (n.dot(p0 + ico.dirs[f[1]] + ico.dirs[f[2]]) < 0.0) std::swap(f[1], f[2]);
  }
  return ico;
}

}  // namespace

void validate(const DomainSpec& spec) {
  if (spec.dimension < 3)
    throw Error(ErrorKind::UnsupportedDimension, "dimension must be at least 3");
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorKind::InvalidDomain, std::string(what) + " must be positive and finite");
  };
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Ball>) {
          positive(k.radius, "radius");
        } else if constexpr (std::is_same_v<K, Ellipsoid>) {
          positive(k.a, "a");
          positive(k.b, "b");
          positive(k.c, "c");
        } else {
          positive(k.base_radius, "base_radius");
          for (const auto& h : k.harmonics) {
            if (h.degree < 0 || std::abs(h.order) > h.degree)
              throw Error(ErrorKind::InvalidDomain, "harmonic needs 0 <= |m| <= l");
            if (!std::isfinite(h.amplitude))
              throw Error(ErrorKind::InvalidDomain, "harmonic amplitude must be finite");
          }
        }
        if constexpr (!std::is_same_v<K, Ball>) {
          if (spec.dimension != 3)
            throw Error(ErrorKind::UnsupportedDimension, "only balls are defined for n != 3");
        }
      },
      spec.kind);
  if (!spec.center.allFinite()) throw Error(ErrorKind::InvalidDomain, "center must be finite");
}

std::string kind_name(const DomainSpec& spec) {
  switch (spec.kind.index()) {
    case 0: return "ball";
    case 1: return "ellipsoid";
    default: return "perturbed_sphere";
  }
}

SurfacePoint SurfaceMesh::map(std::size_t i, double xi, double eta) const {
  const auto& f = panels_[i];
  const Eigen::Vector3d& d0 = directions_[f[0]];
  const Eigen::Vector3d p = d0 + xi * (directions_[f[1]] - d0) + eta * (directions_[f[2]] - d0);
  const double pn = p.norm();
  const Eigen::Vector3d w = p / pn;
  const double r = shape_->radius(w);
  const Eigen::Vector3d local = r * w;
  const double cosine = w.dot(shape_->normal(local));
  SurfacePoint sp;
  sp.position = spec_.center + local;
  sp.jacobian = r * r / cosine * plane_offset_[i] / (pn * pn * pn) * 2.0 * chord_area_[i];
  return sp;
}

double SurfaceMesh::total_area() const {
  double s = 0.0;
  for (double a : area_) s += a;
  return s;
}

bool SurfaceMesh::is_exterior(const Eigen::Vector3d& x) const {
  return shape_->implicit(x - spec_.center) > 0.0;
}

double SurfaceMesh::boundary_radius(const Eigen::Vector3d& dir) const {
  return shape_->radius(dir.normalized());
}

SurfaceMesh build_mesh(const DomainSpec& spec, int level) {
  validate(spec);
  if (spec.dimension != 3)
    throw Error(ErrorKind::UnsupportedDimension, "meshes are only built for n = 3");
  if (level < 0 || level > 8) throw Error(ErrorKind::InvalidDomain, "mesh level must be in [0, 8]");

  SurfaceMesh m;
  m.spec_ = spec;
  m.shape_ = make_shape(spec);
  m.level_ = level;
  Icosphere ico = icosphere(level);
  m.directions_ = std::move(ico.dirs);
  m.panels_ = std::move(ico.faces);

  const Shape& shape = *m.shape_;
  m.vertices_.reserve(m.directions_.size());
  for (const auto& d : m.directions_) {
    const double r = shape.radius(d);
    if (!(r > 0.0) || !std::isfinite(r))
      throw Error(ErrorKind::InvalidDomain, "radial map is not positive at a mesh node");
    m.vertices_.push_back(spec.center + r * d);
  }

  const std::size_t np = m.panels_.size();
  m.centroid_.resize(np);
  m.area_.resize(np);
  m.normal_.resize(np);
  m.curvature_.resize(np);
  m.support_.resize(np);
  m.diameter_.resize(np);
  m.plane_offset_.resize(np);
  m.chord_area_.resize(np);
  m.node_pos_.resize(np * SurfaceMesh::kNodesPerPanel);
  m.node_w_.resize(np * SurfaceMesh::kNodesPerPanel);

  const auto& rule = quadrature::triangle7();
  for (std::size_t i = 0; i < np; ++i) {
    const auto& f = m.panels_[i];
    const Eigen::Vector3d& d0 = m.directions_[f[0]];
    const Eigen::Vector3d n = (m.directions_[f[1]] - d0).cross(m.directions_[f[2]] - d0);
    m.chord_area_[i] = 0.5 * n.norm();
    m.plane_offset_[i] = d0.dot(n.normalized());

    double area = 0.0;
    for (int k = 0; k < SurfaceMesh::kNodesPerPanel; ++k) {
      const SurfacePoint sp = m.map(i, rule[k].xi, rule[k].eta);
      const double r = (sp.position - spec.center).norm();
      if (!(r > 0.0) || !(sp.jacobian > 0.0) || !std::isfinite(sp.jacobian))
        throw Error(ErrorKind::InvalidDomain, "radial map is not positive at a mesh node");
      m.node_pos_[i * SurfaceMesh::kNodesPerPanel + k] = sp.position;
      const double w = 0.5 * rule[k].weight * sp.jacobian;
      m.node_w_[i * SurfaceMesh::kNodesPerPanel + k] = w;
      area += w;
    }
    m.area_[i] = area;

    const SurfacePoint c = m.map(i, 1.0 / 3.0, 1.0 / 3.0);
    m.centroid_[i] = c.position;
    const SurfaceFrame fr = shape.frame(c.position - spec.center);
    m.normal_[i] = fr.normal;
    m.curvature_[i] = fr.mean_curvature;
    m.support_[i] = c.position.dot(fr.normal);

    const auto& v = m.vertices_;
    m.diameter_[i] = std::max({(v[f[0]] - v[f[1]]).norm(), (v[f[1]] - v[f[2]]).norm(),
                               (v[f[2]] - v[f[0]]).norm()});
  }
  if (!(m.total_area() > 0.0)) throw Error(ErrorKind::InvalidDomain, "mesh has zero area");
  return m;
}

double enclosed_volume(const SurfaceMesh& mesh) {
  double area = 0.0;
  double v = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    area += mesh.area(i);
    for (int k = 0; k < SurfaceMesh::kNodesPerPanel; ++k) {
      const Eigen::Vector3d x = mesh.node(i, k) - mesh.center();
      v += x.dot(mesh.shape().normal(x)) * mesh.node_weight(i, k);
    }
  }
  if (!(area > 0.0)) throw Error(ErrorKind::InvalidDomain, "degenerate mesh with zero area");
  return v / 3.0;
}

double starshapedness(const SurfaceMesh& mesh) {
  double s = std::numeric_limits<double>::infinity();
  for (double v : mesh.supports()) s = std::min(s, v);
  return s;
}

}  // namespace capax
