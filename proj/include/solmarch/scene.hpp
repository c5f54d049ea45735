// Scene description and distance estimators.
//
// Horizontal planes get their exact signed distance z - c. Balls and tubes use
// a lower bound built from the two families of totally geodesic hyperbolic
// sheets {y = const} and {x = const}: projecting onto either sheet is
// 1-Lipschitz, so the larger of the two projected hyperbolic distances never
// exceeds the Sol distance.
#ifndef SOLMARCH_SCENE_HPP
#define SOLMARCH_SCENE_HPP

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "solmarch/geodesic.hpp"
#include "solmarch/lattice.hpp"
#include "solmarch/sol.hpp"

namespace solmarch {

using Color = Eigen::Vector3d;

struct Material {
  Color color{0.95, 0.6, 0.25};
  Color back_color{0.78, 0.78, 0.78};
  bool two_sided = true;
};

/// The plane {z = level}, optionally perforated by a square grid of round
/// holes centered at ((i + 1/2) s, (j + 1/2) s).
struct HorizontalPlane {
  double level = 0.0;
  double hole_spacing = 1.0;
  double hole_radius = 0.35;
  bool holes = true;
};

struct Ball {
  Point3d center = Point3d::Zero();
  double radius = 0.3;
};

/// A thickened curve, stored as samples along it.
struct Tube {
  std::vector<Point3d> samples;
  double radius = 0.05;
  // Bounding data for early rejection: the middle sample and the largest
  // sheet bound from it to any other sample.
  Point3d hub = Point3d::Zero();
  double reach = 0.0;
};

using Shape = std::variant<HorizontalPlane, Ball, Tube>;

struct SceneObject {
  Shape shape;
  Material material;
};

struct Light {
  enum class Kind { Headlamp, Directional, Ambient };
  Kind kind = Kind::Headlamp;
  Eigen::Vector3d direction{0, 0, 1};  // at the origin; carried around by left translation
  double intensity = 1.0;
};

struct Scene {
  std::vector<SceneObject> objects;
  std::vector<Light> lights{Light{}};
  Color background{0, 0, 0};
  double fog = 0.0;
  bool quotient = false;
};

struct DistanceEstimate {
  double value;
  int object;
};

/// Tube through n_samples points spaced evenly on the model segment from a
/// to b. For a = o and b a generator this is the one-parameter subgroup
/// t -> gamma^t, whose image in the quotient is a closed curve.
Tube make_tube(const Point3d& a, const Point3d& b, double radius, int n_samples);

/// Tube along generator 1, 2 or 3 from the origin.
Tube generator_tube(int generator, double radius, int n_samples);

inline double sdf_plane(const Point3d& p, double level) { return p.z() - level; }

/// max of the hyperbolic distances between the (x, e^z) and (y, e^-z)
/// projections of p and q.
double sheet_lower_bound(const Point3d& p, const Point3d& q);

inline double fake_sdf_ball(const Point3d& p, const Point3d& center, double radius) {
  return sheet_lower_bound(p, center) - radius;
}

double fake_sdf_tube(const Point3d& p, const Tube& tube);

/// True when p lies over one of the plane's holes.
bool plane_hole_test(const Point3d& p, const HorizontalPlane& plane);

/// Estimator of a single object, including its lattice neighbours in
/// quotient mode. Two-sided planes report |z - c|.
double object_distance(const Point3d& p, const Scene& scene, int object);

/// Minimum over all objects, skipping `skip` when it is non-negative. In
/// quotient mode p must already lie in the fundamental domain.
DistanceEstimate scene_distance(const Point3d& p, const Scene& scene, int skip = -1);

/// Unit normal (metric norm 1) at a point near the surface of `object`.
/// Planes return exactly +-z; other objects use central differences of the
/// estimator along the orthonormal frame pushed to p.
Tangent3d surface_normal(const Point3d& p, const Scene& scene, int object);

/// Closed height interval that contains the object and every point where its
/// estimator is at most `margin`. Unbounded in quotient mode.
std::array<double, 2> height_band(const Scene& scene, int object, double margin);

/// Lattice elements whose translates are consulted in quotient mode.
const std::vector<Point3d>& neighbour_block();

void validate(const Scene& scene);

}  // namespace solmarch

#endif  // SOLMARCH_SCENE_HPP
