#include "solmarch/march.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace solmarch {

namespace {

bool orbit_misses_everything(const TangentState3d& ray, const Scene& scene, const MarchParams& params) {
  const auto [lo, hi] = reachable_heights(ray);
  const double pad = 1e-6 + 2 * params.epsilon;
  for (int i = 0; i < static_cast<int>(scene.objects.size()); ++i) {
    const auto [blo, bhi] = height_band(scene, i, pad);
    if (hi >= blo && lo <= bhi) return false;
  }
  return true;
}

const HorizontalPlane* as_plane(const Scene& scene, int object) {
  if (object < 0) return nullptr;
  return std::get_if<HorizontalPlane>(&scene.objects[static_cast<std::size_t>(object)].shape);
}

}  // namespace

void validate(const Camera& cam) {
  if (!(cam.fov > 0 && cam.fov < std::numbers::pi)) throw std::invalid_argument("camera fov must lie in (0, pi)");
  if (cam.width < 1 || cam.height < 1) throw std::invalid_argument("camera resolution must be at least 1x1");
  if (!is_rotation(cam.observer.frame, 1e-6)) throw std::invalid_argument("camera frame must be a rotation");
}

void validate(const MarchParams& p) {
  if (!(p.epsilon > 0 && p.t_max > 0 && p.max_steps > 0 && p.ode_dt > 0 && p.quotient_max_step > 0)) {
    throw std::invalid_argument("march parameters must be positive");
  }
  if (!(p.safety > 0 && p.safety <= 1)) throw std::invalid_argument("march safety factor must lie in (0, 1]");
  if (p.supersample < 1) throw std::invalid_argument("supersample must be at least 1");
}

TangentState3d generate_ray(const Camera& cam, double u, double v) {
  const double tan_half = std::tan(cam.fov / 2);
  const double aspect = static_cast<double>(cam.width) / cam.height;
  const double sx = (2 * u / cam.width - 1) * tan_half * aspect;
  const double sy = (1 - 2 * v / cam.height) * tan_half;
  const Eigen::Vector3d local = Eigen::Vector3d(sx, sy, -1).normalized();
  return {cam.observer.position, world_direction(cam.observer, local)};
}

HitRecord march(const TangentState3d& ray, const Scene& scene, const MarchParams& params,
                std::vector<double>* trace) {
  HitRecord rec;
  TangentState3d s = ray;
  if (!scene.quotient && params.orbit_cull && orbit_misses_everything(s, scene, params)) {
    rec.t = params.t_max;
    rec.position = s.pos;
    rec.velocity = s.vel;
    return rec;
  }

  const double eps = params.epsilon;
  const double pass_bias = 4 * eps;
  int passing = -1;  // plane currently being crossed through a hole
  double t = 0;

  auto finish_hit = [&](int object) {
    rec.hit = true;
    rec.object = object;
    rec.back_side = as_plane(scene, object) && s.vel.z() > 0;
  };

  for (rec.steps = 0; rec.steps < params.max_steps; ++rec.steps) {
    if (scene.quotient) {
      try {
        const auto reduced = teleport(s.pos);
        if (!reduced.word.empty()) {
          s.vel = push_tangent(reduced.point, pull_tangent(s.pos, s.vel));
          s.pos = reduced.point;
          ++rec.wrap_count;
        }
      } catch (const std::domain_error&) {
        rec.blowup = true;
        break;
      }
    }

    DistanceEstimate d = scene_distance(s.pos, scene, passing);
    if (passing >= 0) {
      const double gap = object_distance(s.pos, scene, passing);
      if (gap < eps && !plane_hole_test(s.pos, *as_plane(scene, passing))) {
        finish_hit(passing);
        break;
      }
      if (gap >= pass_bias) {
        if (gap < d.value) d = {gap, passing};
        passing = -1;
      }
    }

    if (trace) trace->push_back(d.value);
    if (d.value < eps) {
      const HorizontalPlane* plane = as_plane(scene, d.object);
      if (plane && params.hole_test && plane_hole_test(s.pos, *plane)) {
        passing = d.object;
        d = scene_distance(s.pos, scene, passing);
      } else {
        finish_hit(d.object);
        break;
      }
    }

    double step = params.safety * std::max(d.value, eps);
    if (passing >= 0) step = std::min(step, pass_bias);
    if (scene.quotient) step = std::min(step, params.quotient_max_step);
    step = std::min(step, params.t_max - t);
    try {
      s = flow(s, step, params.ode_dt);
    } catch (const FlowError&) {
      rec.blowup = true;
      break;
    }
    t += step;
    if (t >= params.t_max) break;
  }

  rec.t = t;
  rec.position = s.pos;
  rec.velocity = s.vel;
  return rec;
}

Color shade(const HitRecord& hit, const TangentState3d& /*ray*/, const Scene& scene) {
  if (!hit.hit) return scene.background;
  const SceneObject& obj = scene.objects.at(static_cast<std::size_t>(hit.object));
  const Point3d& p = hit.position;

  const Tangent3d toward_eye = -hit.velocity / metric_norm(p, hit.velocity);
  Tangent3d n;
  try {
    n = surface_normal(p, scene, hit.object);
  } catch (const std::runtime_error&) {
    n = toward_eye;
  }
  if (obj.material.two_sided && metric_inner(p, n, toward_eye) < 0) n = -n;

  double light = 0;
  for (const Light& l : scene.lights) {
    switch (l.kind) {
      case Light::Kind::Headlamp:
        light += l.intensity * std::max(0.0, metric_inner(p, n, toward_eye));
        break;
      case Light::Kind::Directional: {
        const Tangent3d dir = push_tangent(p, Tangent3d(l.direction.normalized()));
        light += l.intensity * std::max(0.0, metric_inner(p, n, dir));
        break;
      }
      case Light::Kind::Ambient:
        light += l.intensity;
        break;
    }
  }
  const Color& base = hit.back_side ? obj.material.back_color : obj.material.color;
  return base * light * std::exp(-scene.fog * hit.t);
}

std::uint8_t to_byte(double channel) {
  const double c = std::clamp(std::isfinite(channel) ? channel : 0.0, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(c * 255.0));
}

Color pixel_color(const Camera& cam, const Scene& scene, const MarchParams& params, int px, int py,
                  RenderStats* stats) {
  const int n = params.supersample;
  Color sum = Color::Zero();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const TangentState3d ray = generate_ray(cam, px + (b + 0.5) / n, py + (a + 0.5) / n);
      const HitRecord hit = march(ray, scene, params);
      sum += shade(hit, ray, scene);
      if (stats) {
        ++stats->rays;
        stats->total_steps += hit.steps;
        stats->misses += hit.hit ? 0 : 1;
        stats->blowups += hit.blowup ? 1 : 0;
        stats->wrapped_rays += hit.wrap_count > 0 ? 1 : 0;
      }
    }
  }
  return sum / (n * n);
}

int default_thread_count() {
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("SOLMARCH_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) threads = std::min(threads, cap);
  }
  return threads;
}

RenderResult render(const Camera& cam, const Scene& scene, const MarchParams& params, int threads) {
  validate(cam);
  validate(params);
  validate(scene);
  if (threads <= 0) threads = default_thread_count();
  threads = std::clamp(threads, 1, cam.height);

  RenderResult result{Image(cam.width, cam.height), {}};
  std::vector<RenderStats> partial(static_cast<std::size_t>(threads));
  auto work = [&](int worker) {
    RenderStats& stats = partial[static_cast<std::size_t>(worker)];
    for (int y = worker; y < cam.height; y += threads) {
      for (int x = 0; x < cam.width; ++x) {
        const Color c = pixel_color(cam, scene, params, x, y, &stats);
        std::uint8_t* out = result.image.pixel(x, y);
        for (int k = 0; k < 3; ++k) out[k] = to_byte(c[k]);
      }
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  for (const RenderStats& s : partial) {
    result.stats.rays += s.rays;
    result.stats.misses += s.misses;
    result.stats.blowups += s.blowups;
    result.stats.wrapped_rays += s.wrapped_rays;
    result.stats.total_steps += s.total_steps;
  }
  return result;
}

}  // namespace solmarch
