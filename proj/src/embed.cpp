#include "solmarch/embed.h"

#include <algorithm>
#include <exception>
#include <string>

#include "solmarch/march.hpp"
#include "solmarch/presets.hpp"
#include "solmarch/scene_io.hpp"

struct solmarch_scene {
  solmarch::Scene scene;
};

namespace {

thread_local std::string last_error;

solmarch::Observer3d load_observer(const double* o) {
  solmarch::Observer3d obs;
  obs.position = solmarch::Point3d(o[0], o[1], o[2]);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) obs.frame(r, c) = o[3 + 3 * r + c];
  return obs;
}

void store_observer(const solmarch::Observer3d& obs, double* o) {
  for (int i = 0; i < 3; ++i) o[i] = obs.position[i];
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) o[3 + 3 * r + c] = obs.frame(r, c);
}

int null_argument() {
  last_error = "null pointer argument";
  return SOLMARCH_INVALID_ARGUMENT;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return SOLMARCH_OK;
  } catch (const solmarch::FlowError& e) {
    last_error = e.what();
    return SOLMARCH_FLOW_ERROR;
  } catch (const std::invalid_argument& e) {
    last_error = e.what();
    return SOLMARCH_INVALID_ARGUMENT;
  } catch (const std::domain_error& e) {
    last_error = e.what();
    return SOLMARCH_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SOLMARCH_INTERNAL_ERROR;
  }
}

}  // namespace

extern "C" {

int solmarch_abi_version(void) { return SOLMARCH_ABI_VERSION; }

const char* solmarch_last_error(void) { return last_error.c_str(); }

int solmarch_observer_step(double* observer, const double* local_dir, double speed, double dt) {
  if (!observer || !local_dir) return null_argument();
  return guarded([&] {
    const auto moved = solmarch::observer_step(load_observer(observer),
                                               Eigen::Vector3d(local_dir[0], local_dir[1], local_dir[2]), speed, dt);
    store_observer(moved, observer);
  });
}

int solmarch_rotate_observer(double* observer, const double* rotation) {
  if (!observer || !rotation) return null_argument();
  return guarded([&] {
    solmarch::Matrix3d r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = rotation[3 * i + j];
    store_observer(solmarch::rotate_observer(load_observer(observer), r), observer);
  });
}

int solmarch_teleport(double* observer, long long* word) {
  if (!observer) return null_argument();
  return guarded([&] {
    solmarch::Observer3d obs = load_observer(observer);
    const auto reduced = solmarch::teleport(obs.position);
    obs.position = reduced.point;
    store_observer(obs, observer);
    if (word) {
      word[0] = reduced.word.n1;
      word[1] = reduced.word.n2;
      word[2] = reduced.word.n3;
    }
  });
}

solmarch_scene* solmarch_scene_preset(const char* name, double height) {
  solmarch_scene* out = nullptr;
  guarded([&] {
    solmarch::PresetOptions opt;
    opt.height = height;
    out = new solmarch_scene{solmarch::make_preset(name ? name : "", opt).scene};
  });
  return out;
}

solmarch_scene* solmarch_scene_json(const char* json_text) {
  solmarch_scene* out = nullptr;
  guarded([&] { out = new solmarch_scene{solmarch::parse_scene(json_text ? json_text : "").scene}; });
  return out;
}

void solmarch_scene_free(solmarch_scene* scene) { delete scene; }

int solmarch_camera_rays(const double* observer, double fov, int width, int height, double* out_rays) {
  if (!observer || !out_rays) return null_argument();
  return guarded([&] {
    const solmarch::Camera cam{load_observer(observer), fov, width, height};
    solmarch::validate(cam);
    double* out = out_rays;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const auto ray = solmarch::generate_ray(cam, x, y);
        for (int i = 0; i < 3; ++i) out[i] = ray.pos[i];
        for (int i = 0; i < 3; ++i) out[3 + i] = ray.vel[i];
        out += SOLMARCH_RAY_DOUBLES;
      }
    }
  });
}

int solmarch_march_batch(const solmarch_scene* scene, const double* rays, size_t n, double* out) {
  if (!scene || (n > 0 && (!rays || !out))) return null_argument();
  return guarded([&] {
    const solmarch::MarchParams params;
    for (size_t i = 0; i < n; ++i) {
      const double* r = rays + i * SOLMARCH_RAY_DOUBLES;
      const solmarch::TangentState3d ray{{r[0], r[1], r[2]}, {r[3], r[4], r[5]}};
      const auto hit = solmarch::march(ray, scene->scene, params);
      double* h = out + i * SOLMARCH_HIT_DOUBLES;
      h[0] = hit.hit ? 1 : 0;
      h[1] = hit.object;
      h[2] = hit.t;
      for (int k = 0; k < 3; ++k) h[3 + k] = hit.position[k];
      h[6] = hit.steps;
      h[7] = hit.wrap_count;
      h[8] = hit.back_side ? 1 : 0;
      h[9] = hit.blowup ? 1 : 0;
    }
  });
}

int solmarch_render_rgb(const solmarch_scene* scene, const double* observer, double fov, int width, int height,
                        unsigned char* rgb) {
  if (!scene || !observer || !rgb) return null_argument();
  return guarded([&] {
    const solmarch::Camera cam{load_observer(observer), fov, width, height};
    const auto result = solmarch::render(cam, scene->scene, solmarch::MarchParams{});
    std::copy(result.image.rgb.begin(), result.image.rgb.end(), rgb);
  });
}

}  // extern "C"
