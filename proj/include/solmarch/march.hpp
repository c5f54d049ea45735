// Camera model, sphere tracing along Sol geodesics and image synthesis.
#ifndef SOLMARCH_MARCH_HPP
#define SOLMARCH_MARCH_HPP

#include <numbers>
#include <vector>

#include "solmarch/geodesic.hpp"
#include "solmarch/image.hpp"
#include "solmarch/scene.hpp"

namespace solmarch {

struct Camera {
  Observer3d observer;
  double fov = std::numbers::pi / 2;  // vertical, radians
  int width = 256;
  int height = 256;
};

struct MarchParams {
  double epsilon = 1e-4;
  double t_max = 50.0;
  int max_steps = 512;
  double ode_dt = 1e-2;
  double safety = 0.9;
  // Longest single step in quotient mode, where only the neighbouring lattice
  // translates of each object are consulted.
  double quotient_max_step = 0.5;
  bool hole_test = true;
  // Skip rays whose first integrals keep them out of every object's height band.
  bool orbit_cull = true;
  int supersample = 1;
};

struct HitRecord {
  bool hit = false;
  int object = -1;
  double t = 0.0;
  Point3d position = Point3d::Zero();
  Tangent3d velocity = Tangent3d::Zero();  // at `position`, after any teleports
  int steps = 0;
  int wrap_count = 0;
  bool back_side = false;
  bool blowup = false;
};

void validate(const Camera& cam);
void validate(const MarchParams& params);

/// Unit-speed ray through the continuous image position (u, v), measured in
/// pixels from the top-left corner. Pixel (i, j) has its center at (i + 1/2, j + 1/2).
TangentState3d generate_ray(const Camera& cam, double u, double v);

inline TangentState3d generate_ray(const Camera& cam, int px, int py) {
  return generate_ray(cam, px + 0.5, py + 0.5);
}

/// Sphere-traces one ray. When `trace` is given, every distance estimate the
/// loop acts on is appended to it.
HitRecord march(const TangentState3d& ray, const Scene& scene, const MarchParams& params,
                std::vector<double>* trace = nullptr);

Color shade(const HitRecord& hit, const TangentState3d& ray, const Scene& scene);

struct RenderStats {
  long rays = 0;
  long misses = 0;
  long blowups = 0;
  long wrapped_rays = 0;
  long total_steps = 0;

  double mean_steps() const { return rays ? static_cast<double>(total_steps) / rays : 0.0; }
};

struct RenderResult {
  Image image;
  RenderStats stats;
};

/// Thread count from SOLMARCH_THREADS, else the hardware concurrency.
int default_thread_count();

/// Renders every pixel; rows are split across `threads` workers (0 picks the
/// default). The bytes do not depend on the thread count.
RenderResult render(const Camera& cam, const Scene& scene, const MarchParams& params, int threads = 0);

Color pixel_color(const Camera& cam, const Scene& scene, const MarchParams& params, int px, int py,
                  RenderStats* stats = nullptr);

std::uint8_t to_byte(double channel);

}  // namespace solmarch

#endif  // SOLMARCH_MARCH_HPP
