// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every line passes. All tolerances are the constants below.
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "solmarch/geodesic.hpp"
#include "solmarch/lattice.hpp"
#include "solmarch/march.hpp"
#include "solmarch/presets.hpp"

using namespace solmarch;

namespace {

constexpr double kConservationTol = 1e-9;
constexpr double kConservationSeconds = 10.0;
constexpr int kConservationGeodesics = 100;
constexpr double kApexTol = 1e-6;
constexpr double kFrameTol = 1e-8;
constexpr double kExpmTol = 1e-8;
constexpr double kConjugationTol = 1e-9;
constexpr double kGoldenTol = 1e-12;
constexpr int kTeleportPoints = 10000;
constexpr double kRoundTripTol = 1e-9;
constexpr double kPlaneHitTol = 1e-3;
constexpr int kDragonSize = 256;
// Lower-half miss fraction of the 256x256 dragon-plane view from h = 2,
// measured by this program with default march parameters.
constexpr double kDragonFractionH2 = 0.84356689453125;  // 27642 of 32768
constexpr double kDragonFractionTol = 2e-3;
constexpr double kSphereTol = 1e-6;
constexpr int kPerfSize = 512;
constexpr double kPerfSeconds = 60.0;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

Outcome conservation() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(-1, 1);
  std::normal_distribution<double> n(0, 1);
  const auto start = std::chrono::steady_clock::now();
  double worst = 0;
  for (int i = 0; i < kConservationGeodesics; ++i) {
    const TangentState3d s =
        unit_speed(TangentState3d{Point3d(u(rng), u(rng), u(rng)), Tangent3d(n(rng), n(rng), n(rng))});
    const auto fi0 = first_integrals(s);
    flow_visit(s, 10.0, 1e-3, [&](double, const TangentState3d& st) {
      const auto fi = first_integrals(st);
      worst = std::max({worst, std::abs(fi.px - fi0.px), std::abs(fi.py - fi0.py),
                        std::abs(fi.speed2 - fi0.speed2)});
    });
  }
  const double secs = seconds_since(start);
  return {worst < kConservationTol && secs < kConservationSeconds,
          format("max drift %.3e (< %.0e), %.2f s (< %.0f s)", worst, kConservationTol, secs, kConservationSeconds)};
}

Outcome apex() {
  const TangentState3d s{origin<double>(), Tangent3d(0, 1, -1) / std::sqrt(2.0)};
  // half-circle through (y, v) = (0, 1) with tangent (1, 1): center (1, 0), radius sqrt2
  const double oracle = -std::log(std::sqrt(2.0));
  const double got = min_height_along(s, 4.0, 1e-3);
  const double err = std::abs(got - oracle);
  return {err < kApexTol, format("min z %.9f, oracle %.9f, error %.2e", got, oracle, err)};
}

Outcome transport() {
  std::mt19937_64 rng(1002);
  std::normal_distribution<double> n(0, 1);
  double defect = 0;
  for (int i = 0; i < 20; ++i) {
    const TangentState3d s = unit_speed(TangentState3d{Point3d(n(rng), n(rng), n(rng)) * 0.5,
                                                       Tangent3d(n(rng), n(rng), n(rng))});
    const auto r = flow_with_transport(s, Matrix3d::Identity().eval(), 10.0, 1e-3);
    defect = std::max(defect, orthonormality_defect(r.frame));
  }
  const TangentState3d diag{origin<double>(), Tangent3d(1, 1, 0) / std::sqrt(2.0)};
  const Matrix3d b = transport_rhs(Tangent3d(Tangent3d(1, 1, 0) / std::sqrt(2.0)));
  const Matrix3d expm = Matrix3d(-b).exp();
  const Matrix3d q = flow_with_transport(diag, Matrix3d::Identity().eval(), 1.0, 1e-3).frame;
  const double err = max_abs(Matrix3d(q - expm));
  return {defect < kFrameTol && err < kExpmTol,
          format("SO(3) defect at t=10 %.2e (< %.0e), expm error at t=1 %.2e (< %.0e)", defect, kFrameTol, err,
                 kExpmTol)};
}

Outcome lattice_algebra() {
  double residual = 1;
  Eigen::Matrix2i a;
  try {
    a = conjugation_action(kConjugationTol, &residual);
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
  Eigen::Matrix2i expect;
  expect << 2, 1, 1, 1;
  const double phi = (1 + std::sqrt(5.0)) / 2;
  const Point3d g3 = lattice::gamma3();
  const Point3d c1 = mul(mul(g3, lattice::gamma1()), inverse(g3));
  const Point3d c2 = mul(mul(g3, lattice::gamma2()), inverse(g3));
  // phi^3 = 2 phi + 1, phi^-2 = 2 - phi, phi^2 = phi + 1, phi^-1 = phi - 1
  const double e1 = max_abs(Eigen::Vector3d(c1 - Point3d(2 * phi + 1, -(2 - phi), 0)));
  const double e2 = max_abs(Eigen::Vector3d(c2 - Point3d(phi + 1, phi - 1, 0)));
  const double s1 = max_abs(Eigen::Vector3d(c1 - (2 * lattice::gamma1() + lattice::gamma2())));
  const double s2 = max_abs(Eigen::Vector3d(c2 - (lattice::gamma1() + lattice::gamma2())));
  const double worst = std::max({e1, e2, s1, s2});
  return {a == expect && residual < kConjugationTol && worst < kGoldenTol,
          format("A = [[%d,%d],[%d,%d]], residual %.1e, golden identities %.1e", a(0, 0), a(0, 1), a(1, 0), a(1, 1),
                 residual, worst)};
}

Outcome teleport_points() {
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> xy(-10, 10), z(-3, 3);
  int outside = 0, not_idempotent = 0;
  double worst = 0;
  for (int i = 0; i < kTeleportPoints; ++i) {
    const Point3d p(xy(rng), xy(rng), z(rng));
    const auto r = teleport(p);
    outside += !in_fundamental_domain(r.point);
    worst = std::max(worst, max_abs(Eigen::Vector3d(apply_word(r.word, r.point) - p)));
    const auto again = teleport(r.point);
    not_idempotent += !(again.word.empty() && again.point == r.point);
  }
  return {outside == 0 && not_idempotent == 0 && worst < kRoundTripTol,
          format("%d points: %d outside D, round trip %.2e, %d not idempotent", kTeleportPoints, outside, worst,
                 not_idempotent)};
}

Outcome plane_march() {
  Scene scene;
  scene.objects.push_back(SceneObject{HorizontalPlane{}, Material{}});
  const HitRecord h = march(TangentState3d{Point3d(0, 0, 2), {0, 0, -1}}, scene, MarchParams{});
  const double err = std::abs(h.t - 2);
  return {h.hit && err < kPlaneHitTol, format("hit=%d t=%.7f", h.hit ? 1 : 0, h.t)};
}

double dragon_fraction(double height) {
  const PresetScene preset = make_preset("dragon-plane", {.height = height});
  const Camera cam = preset_camera(preset, kDragonSize, kDragonSize);
  const MarchParams params;
  long misses = 0, total = 0;
  for (int y = kDragonSize / 2; y < kDragonSize; ++y)
    for (int x = 0; x < kDragonSize; ++x, ++total) misses += !march(generate_ray(cam, x, y), preset.scene, params).hit;
  return static_cast<double>(misses) / total;
}

Outcome dragon() {
  const double f1 = dragon_fraction(1), f2 = dragon_fraction(2), f3 = dragon_fraction(3);
  const bool frozen = std::abs(f2 - kDragonFractionH2) < kDragonFractionTol;
  return {f1 > 0 && f1 < f2 && f2 < f3 && frozen,
          format("lower-half background h=1: %.5f, h=2: %.5f (frozen %.5f +- %.0e), h=3: %.5f", f1, f2,
                 kDragonFractionH2, kDragonFractionTol, f3)};
}

Outcome double_crossing() {
  // Ray from (0,0,1) in the sheet {x = 0} with orthonormal components
  // (0, a, -sqrt(1 - a^2)): lowest height 1 + ln a. Bisect a for apex -0.5.
  double lo = 1e-6, hi = 1;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (1 + std::log(mid) < -0.5 ? lo : hi) = mid;
  }
  const double a = 0.5 * (lo + hi);
  const Point3d start(0, 0, 1);
  const TangentState3d ray{start, push_tangent(start, Tangent3d(0, a, -std::sqrt(1 - a * a)))};
  int changes = 0;
  double prev = sdf_plane(start, 0);
  flow_visit(ray, 12.0, 1e-3, [&](double, const TangentState3d& s) {
    const double now = sdf_plane(s.pos, 0);
    changes += (now < 0) != (prev < 0);
    prev = now;
  });
  const double zmin = min_height_along(ray, 12.0, 1e-3);
  return {changes == 2, format("a = %.12f, min z %.7f, %d sign changes of the plane distance", a, zmin, changes)};
}

Outcome sphere() {
  const auto mesh = geodesic_sphere(3.0, 9, 16);
  double worst = 0;
  for (int k = 0; k < 8; ++k)
    for (const Point3d& p : mesh.vertices) {
      const Point3d img = apply_d8(D8Element(k), p);
      double nearest = INFINITY;
      for (const Point3d& q : mesh.vertices) nearest = std::min(nearest, max_abs(Eigen::Vector3d(img - q)));
      worst = std::max(worst, nearest);
    }
  double x_ext = 0, y_ext = 0;
  for (const Point3d& p : mesh.vertices) {
    if (p.z() <= 0) continue;
    x_ext = std::max(x_ext, std::abs(p.x()));
    y_ext = std::max(y_ext, std::abs(p.y()));
  }
  return {worst < kSphereTol && y_ext > x_ext,
          format("D8 mismatch %.2e (< %.0e); upper hemisphere y-extent %.4f vs x-extent %.4f", worst, kSphereTol,
                 y_ext, x_ext)};
}

Outcome performance() {
  const PresetScene preset = make_preset("dragon-plane");
  const Camera cam = preset_camera(preset, kPerfSize, kPerfSize);
  const int threads = default_thread_count();
  const auto start = std::chrono::steady_clock::now();
  const RenderResult a = render(cam, preset.scene, MarchParams{}, threads);
  const double secs = seconds_since(start);
  const RenderResult one = render(cam, preset.scene, MarchParams{}, 1);
  const RenderResult eight = render(cam, preset.scene, MarchParams{}, 8);
  const bool same = one.image.rgb == eight.image.rgb && a.image.rgb == one.image.rgb;
  return {secs < kPerfSeconds && same,
          format("%dx%d in %.2f s on %d thread(s) (< %.0f s); 1 vs 8 threads %s", kPerfSize, kPerfSize, secs, threads,
                 kPerfSeconds, same ? "byte-identical" : "DIFFER")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"conservation", conservation},
      {"analytic-apex", apex},
      {"transport", transport},
      {"lattice-algebra", lattice_algebra},
      {"teleport", teleport_points},
      {"plane-march", plane_march},
      {"dragon-plane", dragon},
      {"double-crossing", double_crossing},
      {"sphere-symmetry", sphere},
      {"performance", performance},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %-16s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
