// Geodesic flow on Sol, parallel transport of frames and observer navigation.
//
// Geodesics solve the Euler-Lagrange equations of the Sol metric
//
//   x'' =  2 x' z'
//   y'' = -2 y' z'
//   z'' = -e^{-2z} x'^2 + e^{2z} y'^2
//
// integrated with fixed-step classical RK4. Frames are carried in the
// pulled-back form Q(t) = dL_{c(t)}^{-1} T(t), which obeys Q' = -B(u) Q with
// u = dL_{c(t)}^{-1} c'(t).
#ifndef SOLMARCH_GEODESIC_HPP
#define SOLMARCH_GEODESIC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "solmarch/sol.hpp"

namespace solmarch {

template <typename Scalar>
struct TangentState {
  Point<Scalar> pos = Point<Scalar>::Zero();
  Tangent<Scalar> vel = Tangent<Scalar>::Zero();
};

using TangentState3d = TangentState<double>;

template <typename Scalar>
struct FirstIntegrals {
  Scalar px;
  Scalar py;
  Scalar speed2;
};

/// Raised when a state leaves the numerically safe region.
class FlowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMaxAbsHeight = 50.0;
inline constexpr double kMaxAbsComponent = 1e20;
inline constexpr double kDefaultOdeStep = 1e-3;
inline constexpr int kReorthonormalizeEvery = 64;
inline constexpr double kFrameDriftTolerance = 1e-9;

/// Acceleration of the Sol geodesic equations.
struct SolGeodesicField {
  template <typename Scalar>
  Tangent<Scalar> operator()(const Point<Scalar>& p, const Tangent<Scalar>& v) const {
    using std::exp;
    const Scalar e2z = exp(2 * p.z());
    return Tangent<Scalar>(2 * v.x() * v.z(), -2 * v.y() * v.z(),
                           -v.x() * v.x() / e2z + e2z * v.y() * v.y());
  }
};

template <typename Scalar>
inline TangentState<Scalar> geodesic_rhs(const TangentState<Scalar>& s) {
  return {s.vel, SolGeodesicField{}(s.pos, s.vel)};
}

template <typename Scalar>
inline FirstIntegrals<Scalar> first_integrals(const TangentState<Scalar>& s) {
  using std::exp;
  return {exp(-2 * s.pos.z()) * s.vel.x(), exp(2 * s.pos.z()) * s.vel.y(),
          metric_inner(s.pos, s.vel, s.vel)};
}

template <typename Scalar>
inline void check_state(const TangentState<Scalar>& s) {
  using std::abs;
  using std::isfinite;
  bool ok = isfinite(s.pos.z()) && abs(s.pos.z()) <= Scalar(kMaxAbsHeight);
  for (int i = 0; i < 3 && ok; ++i) {
    ok = isfinite(s.pos[i]) && isfinite(s.vel[i]) && abs(s.pos[i]) <= Scalar(kMaxAbsComponent) &&
         abs(s.vel[i]) <= Scalar(kMaxAbsComponent);
  }
  if (!ok) throw FlowError("geodesic state left the safe region (|z| > 50 or overflow)");
}

/// One classical RK4 step of size h, no safety checks.
template <typename Scalar, typename Field = SolGeodesicField>
inline TangentState<Scalar> rk4_step(const TangentState<Scalar>& s, Scalar h, const Field& field = {}) {
  const Tangent<Scalar> a1 = field(s.pos, s.vel);
  const Tangent<Scalar> v1 = s.vel;

  const Point<Scalar> p2 = s.pos + (h / 2) * v1;
  const Tangent<Scalar> v2 = s.vel + (h / 2) * a1;
  const Tangent<Scalar> a2 = field(p2, v2);

  const Point<Scalar> p3 = s.pos + (h / 2) * v2;
  const Tangent<Scalar> v3 = s.vel + (h / 2) * a2;
  const Tangent<Scalar> a3 = field(p3, v3);

  const Point<Scalar> p4 = s.pos + h * v3;
  const Tangent<Scalar> v4 = s.vel + h * a3;
  const Tangent<Scalar> a4 = field(p4, v4);

  return {s.pos + (h / 6) * (v1 + 2 * v2 + 2 * v3 + v4),
          s.vel + (h / 6) * (a1 + 2 * a2 + 2 * a3 + a4)};
}

/// Number of fixed steps used to cover time t; the last one is shortened.
template <typename Scalar>
inline long step_count(Scalar t, Scalar dt) {
  using std::ceil;
  if (!(dt > 0)) throw std::invalid_argument("flow step dt must be positive");
  if (!(t >= 0)) throw std::invalid_argument("flow time must be non-negative");
  const long n = static_cast<long>(ceil(t / dt - Scalar(1e-12)));
  return std::max(n, 0L);
}

/// Integrates the geodesic equations over time t with step dt. The visitor,
/// when given, sees every intermediate state as visit(time, state).
template <typename Scalar, typename Field = SolGeodesicField, typename Visitor>
TangentState<Scalar> flow_visit(TangentState<Scalar> s, Scalar t, Scalar dt, Visitor&& visit,
                                const Field& field = {}) {
  const long n = step_count(t, dt);
  Scalar elapsed = 0;
  for (long i = 0; i < n; ++i) {
    const Scalar h = (i + 1 == n) ? t - elapsed : dt;
    s = rk4_step(s, h, field);
    check_state(s);
    elapsed = (i + 1 == n) ? t : elapsed + dt;
    visit(elapsed, s);
  }
  return s;
}

template <typename Scalar, typename Field = SolGeodesicField>
TangentState<Scalar> flow(const TangentState<Scalar>& s, Scalar t, Scalar dt = Scalar(kDefaultOdeStep),
                          const Field& field = {}) {
  return flow_visit(s, t, dt, [](Scalar, const TangentState<Scalar>&) {}, field);
}

/// Rescales the velocity to unit metric speed.
template <typename Scalar>
inline TangentState<Scalar> unit_speed(const TangentState<Scalar>& s) {
  const Scalar n = metric_norm(s.pos, s.vel);
  if (!(n > 0)) throw std::invalid_argument("zero velocity cannot be normalized");
  return {s.pos, s.vel / n};
}

/// Closed interval of heights an orbit can still visit, read off the first
/// integrals: px^2 e^{2z} + py^2 e^{-2z} + z'^2 = speed^2. Unbounded ends are
/// +-infinity. Monotone orbits (px or py zero) only report the forward range.
template <typename Scalar>
std::array<Scalar, 2> reachable_heights(const TangentState<Scalar>& s) {
  using std::log;
  using std::sqrt;
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  const auto [px, py, speed2] = first_integrals(s);
  const Scalar z = s.pos.z();
  const Scalar vz = s.vel.z();
  const Scalar a = px * px;
  const Scalar b = py * py;
  if (a == 0 && b == 0) {
    if (vz > 0) return {z, inf};
    if (vz < 0) return {-inf, z};
    return {z, z};
  }
  if (a == 0) {
    const Scalar low = Scalar(0.5) * log(b / speed2);
    return {vz >= 0 ? z : std::min(low, z), inf};
  }
  if (b == 0) {
    const Scalar high = Scalar(0.5) * log(speed2 / a);
    return {-inf, vz <= 0 ? z : std::max(high, z)};
  }
  const Scalar disc = std::max(Scalar(0), speed2 * speed2 - 4 * a * b);
  const Scalar w_high = (speed2 + sqrt(disc)) / (2 * a);
  const Scalar w_low = 2 * b / (speed2 + sqrt(disc));
  return {std::min(Scalar(0.5) * log(w_low), z), std::max(Scalar(0.5) * log(w_high), z)};
}

/// Lowest height reached over [0, t]. Brackets each sign change of z' found by
/// the fixed-step flow and refines it by bisection on the sub-step length.
template <typename Scalar>
Scalar min_height_along(const TangentState<Scalar>& s0, Scalar t, Scalar dt = Scalar(kDefaultOdeStep)) {
  Scalar best = s0.pos.z();
  TangentState<Scalar> prev = s0;
  Scalar prev_time = 0;
  flow_visit(s0, t, dt, [&](Scalar now, const TangentState<Scalar>& s) {
    best = std::min(best, s.pos.z());
    if (prev.vel.z() < 0 && s.vel.z() >= 0) {
      Scalar lo = 0;
      Scalar hi = now - prev_time;
      for (int it = 0; it < 60; ++it) {
        const Scalar mid = (lo + hi) / 2;
        (rk4_step(prev, mid).vel.z() < 0 ? lo : hi) = mid;
      }
      best = std::min(best, rk4_step(prev, (lo + hi) / 2).pos.z());
    }
    prev = s;
    prev_time = now;
  });
  return best;
}

// ----------------------------------------------------------------------------
// Parallel transport

template <typename Scalar>
using TransportFrame = Mat3<Scalar>;

/// B(u) of the pulled-back transport equation Q' + B Q = 0.
template <typename Scalar>
inline Mat3<Scalar> transport_rhs(const Tangent<Scalar>& u) {
  Mat3<Scalar> b;
  b << 0, 0, -u.x(),
       0, 0, u.y(),
       u.x(), -u.y(), 0;
  return b;
}

template <typename Scalar>
inline Scalar orthonormality_defect(const Mat3<Scalar>& q) {
  return (q.transpose() * q - Mat3<Scalar>::Identity()).cwiseAbs().maxCoeff();
}

/// Modified Gram-Schmidt on the columns.
template <typename Scalar>
Mat3<Scalar> reorthonormalize(const Mat3<Scalar>& q) {
  Mat3<Scalar> out = q;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < j; ++k) out.col(j) -= out.col(k).dot(out.col(j)) * out.col(k);
    out.col(j).normalize();
  }
  return out;
}

template <typename Scalar>
struct TransportedState {
  TangentState<Scalar> state;
  TransportFrame<Scalar> frame;
};

/// Co-integrates a geodesic and its pulled-back parallel frame.
template <typename Scalar>
TransportedState<Scalar> flow_with_transport(const TangentState<Scalar>& s0, const TransportFrame<Scalar>& q0,
                                             Scalar t, Scalar dt = Scalar(kDefaultOdeStep)) {
  const SolGeodesicField field;
  auto frame_rate = [](const Point<Scalar>& p, const Tangent<Scalar>& v, const Mat3<Scalar>& q) {
    return Mat3<Scalar>(-transport_rhs(pull_tangent(p, v)) * q);
  };

  TangentState<Scalar> s = s0;
  Mat3<Scalar> q = q0;
  const long n = step_count(t, dt);
  Scalar elapsed = 0;
  for (long i = 0; i < n; ++i) {
    const Scalar h = (i + 1 == n) ? t - elapsed : dt;

    const Tangent<Scalar> v1 = s.vel;
    const Tangent<Scalar> a1 = field(s.pos, v1);
    const Mat3<Scalar> k1 = frame_rate(s.pos, v1, q);

    const Point<Scalar> p2 = s.pos + (h / 2) * v1;
    const Tangent<Scalar> v2 = s.vel + (h / 2) * a1;
    const Tangent<Scalar> a2 = field(p2, v2);
    const Mat3<Scalar> k2 = frame_rate(p2, v2, q + (h / 2) * k1);

    const Point<Scalar> p3 = s.pos + (h / 2) * v2;
    const Tangent<Scalar> v3 = s.vel + (h / 2) * a2;
    const Tangent<Scalar> a3 = field(p3, v3);
    const Mat3<Scalar> k3 = frame_rate(p3, v3, q + (h / 2) * k2);

    const Point<Scalar> p4 = s.pos + h * v3;
    const Tangent<Scalar> v4 = s.vel + h * a3;
    const Tangent<Scalar> a4 = field(p4, v4);
    const Mat3<Scalar> k4 = frame_rate(p4, v4, q + h * k3);

    s.pos += (h / 6) * (v1 + 2 * v2 + 2 * v3 + v4);
    s.vel += (h / 6) * (a1 + 2 * a2 + 2 * a3 + a4);
    q += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    check_state(s);

    if ((i + 1) % kReorthonormalizeEvery == 0 || orthonormality_defect(q) > Scalar(kFrameDriftTolerance)) {
      q = reorthonormalize(q);
    }
    elapsed = (i + 1 == n) ? t : elapsed + dt;
  }
  return {s, q};
}

// ----------------------------------------------------------------------------
// Observer navigation

/// Camera state: a group element and an orthonormal frame pulled back to the
/// origin. Column i of the frame is local axis i; the view looks along -z.
template <typename Scalar>
struct Observer {
  Point<Scalar> position = Point<Scalar>::Zero();
  TransportFrame<Scalar> frame = TransportFrame<Scalar>::Identity();
};

using Observer3d = Observer<double>;

/// World tangent at the observer for a direction given in the local frame.
template <typename Scalar>
inline Tangent<Scalar> world_direction(const Observer<Scalar>& obs, const Vec3<Scalar>& local_dir) {
  return push_tangent(obs.position, Tangent<Scalar>(obs.frame * local_dir));
}

/// Moves the observer along the geodesic leaving in local_dir for time dt,
/// carrying the frame by parallel transport.
template <typename Scalar>
Observer<Scalar> observer_step(const Observer<Scalar>& obs, const Vec3<Scalar>& local_dir, Scalar speed, Scalar dt,
                               Scalar ode_dt = Scalar(kDefaultOdeStep)) {
  if (speed < 0) throw std::invalid_argument("observer speed must be non-negative");
  if (speed == 0 || dt == 0) return obs;
  const TangentState<Scalar> s{obs.position, Tangent<Scalar>(world_direction(obs, local_dir) * speed)};
  const auto moved = flow_with_transport(s, obs.frame, dt, ode_dt);
  return {moved.state.pos, moved.frame};
}

/// Frame whose view axis (-z) is `forward` and whose y axis is as close to
/// `up` as possible, both given at the origin.
template <typename Scalar>
TransportFrame<Scalar> look_frame(const Vec3<Scalar>& forward, const Vec3<Scalar>& up) {
  const Vec3<Scalar> back = -forward.normalized();
  const Vec3<Scalar> right = up.cross(back);
  if (!(right.norm() > Scalar(1e-12))) throw std::invalid_argument("look_frame: up is parallel to forward");
  TransportFrame<Scalar> q;
  q.col(0) = right.normalized();
  q.col(2) = back;
  q.col(1) = back.cross(q.col(0));
  return q;
}

template <typename Scalar>
bool is_rotation(const Mat3<Scalar>& r, Scalar tol = Scalar(1e-9)) {
  return orthonormality_defect(r) < tol && r.determinant() > 0;
}

template <typename Scalar>
Observer<Scalar> rotate_observer(const Observer<Scalar>& obs, const Mat3<Scalar>& r) {
  if (!is_rotation(r)) throw std::invalid_argument("rotate_observer expects a proper rotation");
  Observer<Scalar> out{obs.position, obs.frame * r};
  if (orthonormality_defect(out.frame) > Scalar(1e-12)) out.frame = reorthonormalize(out.frame);
  return out;
}

// ----------------------------------------------------------------------------
// Geodesic spheres

template <typename Scalar>
struct SphereMesh {
  std::vector<Point<Scalar>> vertices;
  std::vector<std::array<int, 3>> triangles;
};

/// Initial unit directions at the origin on a latitude/longitude grid:
/// north pole, n_theta rings of n_phi samples, south pole. With n_phi a
/// multiple of 4 the grid is closed under the stabilizer.
template <typename Scalar>
std::vector<Tangent<Scalar>> sphere_directions(int n_theta, int n_phi) {
  using std::cos;
  using std::sin;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  std::vector<Tangent<Scalar>> dirs;
  dirs.reserve(static_cast<std::size_t>(n_theta) * n_phi + 2);
  dirs.emplace_back(0, 0, 1);
  for (int i = 1; i <= n_theta; ++i) {
    const Scalar theta = pi * i / (n_theta + 1);
    for (int j = 0; j < n_phi; ++j) {
      const Scalar ph = 2 * pi * j / n_phi;
      dirs.emplace_back(sin(theta) * cos(ph), sin(theta) * sin(ph), cos(theta));
    }
  }
  dirs.emplace_back(0, 0, -1);
  return dirs;
}

/// Endpoints of unit-speed geodesics from the origin flowed for `radius`,
/// triangulated along the direction grid.
template <typename Scalar>
SphereMesh<Scalar> geodesic_sphere(Scalar radius, int n_theta, int n_phi, Scalar dt = Scalar(kDefaultOdeStep)) {
  if (!(radius > 0)) throw std::invalid_argument("sphere radius must be positive");
  if (n_theta < 2 || n_phi < 2) throw std::invalid_argument("sphere grid needs at least 2x2 samples");

  SphereMesh<Scalar> mesh;
  for (const auto& d : sphere_directions<Scalar>(n_theta, n_phi)) {
    mesh.vertices.push_back(flow(TangentState<Scalar>{Point<Scalar>::Zero(), d}, radius, dt).pos);
  }

  const int south = n_theta * n_phi + 1;
  auto ring = [n_phi](int i, int j) { return 1 + (i - 1) * n_phi + (j % n_phi); };
  for (int j = 0; j < n_phi; ++j) mesh.triangles.push_back({0, ring(1, j), ring(1, j + 1)});
  for (int i = 1; i < n_theta; ++i) {
    for (int j = 0; j < n_phi; ++j) {
      mesh.triangles.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
      mesh.triangles.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
    }
  }
  for (int j = 0; j < n_phi; ++j) mesh.triangles.push_back({south, ring(n_theta, j + 1), ring(n_theta, j)});
  return mesh;
}

}  // namespace solmarch

#endif  // SOLMARCH_GEODESIC_HPP
