#include "solmarch/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace solmarch {

namespace {

// acosh(1 + u) for u >= 0 without cancellation near 0.
double acosh1p(double u) { return std::log1p(u + std::sqrt(u * (u + 2.0))); }

template <typename Fn>
double min_over_copies(const Point3d& p, const Scene& scene, Fn&& estimator) {
  if (!scene.quotient) return estimator(p);
  double best = std::numeric_limits<double>::infinity();
  for (const Point3d& g : neighbour_block()) best = std::min(best, estimator(mul(inverse(g), p)));
  return best;
}

double tube_distance_bounded(const Point3d& p, const Tube& tube, double cutoff) {
  if (sheet_lower_bound(p, tube.hub) - tube.reach - tube.radius >= cutoff) return cutoff;
  return fake_sdf_tube(p, tube);
}

struct ObjectEstimator {
  const Point3d& p;
  const Scene& scene;
  const Material& material;
  double cutoff;

  double operator()(const HorizontalPlane& plane) const {
    auto one = [&](double level) {
      const double d = sdf_plane(p, level);
      return material.two_sided ? std::abs(d) : d;
    };
    if (!scene.quotient) return one(plane.level);
    const double period = lattice::height_period();
    return std::min({one(plane.level - period), one(plane.level), one(plane.level + period)});
  }

  double operator()(const Ball& ball) const {
    return min_over_copies(p, scene, [&](const Point3d& q) { return fake_sdf_ball(q, ball.center, ball.radius); });
  }

  double operator()(const Tube& tube) const {
    return min_over_copies(p, scene, [&](const Point3d& q) { return tube_distance_bounded(q, tube, cutoff); });
  }
};

double estimate(const Point3d& p, const Scene& scene, int object, double cutoff) {
  const SceneObject& obj = scene.objects.at(static_cast<std::size_t>(object));
  return std::visit(ObjectEstimator{p, scene, obj.material, cutoff}, obj.shape);
}

}  // namespace

Tube make_tube(const Point3d& a, const Point3d& b, double radius, int n_samples) {
  if (!(radius > 0)) throw std::invalid_argument("tube radius must be positive");
  if (n_samples < 2) throw std::invalid_argument("tube needs at least two samples");
  Tube tube;
  tube.radius = radius;
  tube.samples.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const double s = static_cast<double>(i) / (n_samples - 1);
    tube.samples.push_back(a + s * (b - a));
  }
  tube.hub = tube.samples[tube.samples.size() / 2];
  for (const Point3d& q : tube.samples) tube.reach = std::max(tube.reach, sheet_lower_bound(tube.hub, q));
  return tube;
}

Tube generator_tube(int generator, double radius, int n_samples) {
  switch (generator) {
    case 1: return make_tube(origin<double>(), lattice::gamma1(), radius, n_samples);
    case 2: return make_tube(origin<double>(), lattice::gamma2(), radius, n_samples);
    case 3: return make_tube(origin<double>(), lattice::gamma3(), radius, n_samples);
    default: throw std::invalid_argument("lattice generator index must be 1, 2 or 3");
  }
}

double sheet_lower_bound(const Point3d& p, const Point3d& q) {
  const double dz = p.z() - q.z();
  const double sum_z = p.z() + q.z();
  const double dx = p.x() - q.x();
  const double dy = p.y() - q.y();
  const double sh = std::sinh(0.5 * dz);
  const double vertical = 2.0 * sh * sh;
  // The (x, e^z) and (y, e^-z) sheets share the vertical term.
  const double along_x = dx * dx * std::exp(-sum_z);
  const double along_y = dy * dy * std::exp(sum_z);
  return acosh1p(vertical + 0.5 * std::max(along_x, along_y));
}

double fake_sdf_tube(const Point3d& p, const Tube& tube) {
  double best = std::numeric_limits<double>::infinity();
  for (const Point3d& s : tube.samples) best = std::min(best, sheet_lower_bound(p, s));
  return best - tube.radius;
}

bool plane_hole_test(const Point3d& p, const HorizontalPlane& plane) {
  if (!plane.holes) return false;
  const double s = plane.hole_spacing;
  const double u = p.x() - s * std::floor(p.x() / s) - 0.5 * s;
  const double v = p.y() - s * std::floor(p.y() / s) - 0.5 * s;
  return u * u + v * v < plane.hole_radius * plane.hole_radius;
}

const std::vector<Point3d>& neighbour_block() {
  static const std::vector<Point3d> block = [] {
    std::vector<Point3d> out;
    for (long k = -1; k <= 1; ++k)
      for (long i = -1; i <= 1; ++i)
        for (long j = -1; j <= 1; ++j) out.push_back(word_element(GammaWord{i, j, k}));
    return out;
  }();
  return block;
}

double object_distance(const Point3d& p, const Scene& scene, int object) {
  return estimate(p, scene, object, std::numeric_limits<double>::infinity());
}

DistanceEstimate scene_distance(const Point3d& p, const Scene& scene, int skip) {
  DistanceEstimate best{std::numeric_limits<double>::infinity(), -1};
  for (int i = 0; i < static_cast<int>(scene.objects.size()); ++i) {
    if (i == skip) continue;
    const double d = estimate(p, scene, i, best.value);
    if (d < best.value) best = {d, i};
  }
  return best;
}

Tangent3d surface_normal(const Point3d& p, const Scene& scene, int object) {
  const SceneObject& obj = scene.objects.at(static_cast<std::size_t>(object));
  if (const auto* plane = std::get_if<HorizontalPlane>(&obj.shape)) {
    return Tangent3d(0, 0, sdf_plane(p, plane->level) >= 0 ? 1.0 : -1.0);
  }
  constexpr double h = 1e-4;
  Eigen::Vector3d grad;
  for (int i = 0; i < 3; ++i) {
    const Tangent3d step = push_tangent(p, Tangent3d(Tangent3d::Unit(i) * h));
    grad[i] = (object_distance(p + step, scene, object) - object_distance(p - step, scene, object)) / (2 * h);
  }
  const double n = grad.norm();
  if (!(n > 1e-12)) {
    throw std::runtime_error("degenerate surface normal for object " + std::to_string(object));
  }
  return push_tangent(p, Tangent3d(grad / n));
}

std::array<double, 2> height_band(const Scene& scene, int object, double margin) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (scene.quotient) return {-inf, inf};
  const SceneObject& obj = scene.objects.at(static_cast<std::size_t>(object));
  if (const auto* plane = std::get_if<HorizontalPlane>(&obj.shape)) {
    if (!obj.material.two_sided) return {-inf, plane->level + margin};
    return {plane->level - margin, plane->level + margin};
  }
  if (const auto* ball = std::get_if<Ball>(&obj.shape)) {
    // The sheet bound dominates |dz|.
    return {ball->center.z() - ball->radius - margin, ball->center.z() + ball->radius + margin};
  }
  const auto& tube = std::get<Tube>(obj.shape);
  double lo = inf;
  double hi = -inf;
  for (const Point3d& s : tube.samples) {
    lo = std::min(lo, s.z());
    hi = std::max(hi, s.z());
  }
  return {lo - tube.radius - margin, hi + tube.radius + margin};
}

void validate(const Scene& scene) {
  if (scene.objects.empty()) throw std::invalid_argument("scene has no objects");
  if (!(scene.fog >= 0)) throw std::invalid_argument("fog density must be non-negative");
  for (const SceneObject& obj : scene.objects) {
    if (const auto* plane = std::get_if<HorizontalPlane>(&obj.shape)) {
      if (plane->holes && !(plane->hole_spacing > 0 && plane->hole_radius > 0 &&
                            plane->hole_radius < plane->hole_spacing / 2)) {
        throw std::invalid_argument("plane holes need 0 < hole_radius < hole_spacing / 2");
      }
    } else if (const auto* ball = std::get_if<Ball>(&obj.shape)) {
      if (!(ball->radius > 0)) throw std::invalid_argument("ball radius must be positive");
    } else {
      const auto& tube = std::get<Tube>(obj.shape);
      if (!(tube.radius > 0) || tube.samples.empty()) throw std::invalid_argument("tube needs samples and a radius");
    }
  }
}

}  // namespace solmarch
