// solmarch: render Sol scenes, export geodesics and geodesic spheres, run
// numerical self-checks and replay navigation tapes.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solmarch/geodesic.hpp"
#include "solmarch/march.hpp"
#include "solmarch/presets.hpp"
#include "solmarch/replay.hpp"
#include "solmarch/scene_io.hpp"
#include "solmarch/selftest.hpp"

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitIo = 3;

struct RenderArgs {
  std::string preset;
  std::string scene_file;
  double h = 2.0;
  int width = 256;
  int height = 256;
  std::string output = "out.ppm";
  double fov = 0;
  solmarch::MarchParams params;
  bool no_holes = false;
  int threads = 0;
};

struct GeodesicArgs {
  std::vector<double> origin{0, 0, 0};
  std::vector<double> direction{0, 0, 1};
  double t_max = 2.0;
  double dt = 1e-3;
  int every = 1;
  std::string output = "geodesic.csv";
};

struct SphereArgs {
  double radius = 1.0;
  int n_theta = 32;
  int n_phi = 64;
  double dt = 1e-3;
  std::string output = "sphere.obj";
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

int run_render(const RenderArgs& a) {
  if (a.preset.empty() == a.scene_file.empty()) {
    std::cerr << "render: give exactly one of --preset or --scene\n";
    return kExitBadInput;
  }
  if (a.output.size() >= 4 && a.output.substr(a.output.size() - 4) == ".png") {
    std::cerr << "render: only binary PPM output is built in; use a .ppm path\n";
    return kExitBadInput;
  }

  solmarch::Scene scene;
  solmarch::Camera cam;
  try {
    if (!a.preset.empty()) {
      solmarch::PresetOptions opt;
      opt.height = a.h;
      const auto p = solmarch::make_preset(a.preset, opt);
      scene = p.scene;
      cam = solmarch::preset_camera(p, a.width, a.height);
    } else {
      const auto f = solmarch::load_scene(a.scene_file);
      scene = f.scene;
      cam = solmarch::Camera{f.observer, f.fov, a.width, a.height};
    }
    if (a.fov > 0) cam.fov = a.fov;
    solmarch::validate(cam);
    solmarch::validate(a.params);
    solmarch::validate(scene);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "render: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "render: bad scene: " << e.what() << "\n";
    return kExitBadInput;
  }

  solmarch::MarchParams params = a.params;
  params.hole_test = !a.no_holes;
  const auto start = std::chrono::steady_clock::now();
  const auto result = solmarch::render(cam, scene, params, a.threads);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    solmarch::write_ppm(result.image, a.output);
  } catch (const std::exception& e) {
    std::cerr << "render: " << e.what() << "\n";
    return kExitIo;
  }
  const auto& s = result.stats;
  std::fprintf(stderr, "rays=%ld mean_steps=%.2f misses=%ld wrapped_rays=%ld blowups=%ld wall=%.2fs\n", s.rays,
               s.mean_steps(), s.misses, s.wrapped_rays, s.blowups, seconds);
  return 0;
}

int run_geodesic(const GeodesicArgs& a) {
  const solmarch::Point3d p(a.origin[0], a.origin[1], a.origin[2]);
  const solmarch::Tangent3d v(a.direction[0], a.direction[1], a.direction[2]);
  if (!(v.norm() > 0)) {
    std::cerr << "geodesic: direction must be nonzero\n";
    return kExitBadInput;
  }
  if (!(a.dt > 0) || !(a.t_max >= 0) || a.every < 1) {
    std::cerr << "geodesic: need dt > 0, t-max >= 0 and every >= 1\n";
    return kExitBadInput;
  }
  const solmarch::TangentState3d s0 = solmarch::unit_speed(solmarch::TangentState3d{p, v});

  std::ostringstream csv;
  csv << "t,x,y,z,px,py,speed2\n";
  auto row = [&](double t, const solmarch::TangentState3d& s) {
    const auto fi = solmarch::first_integrals(s);
    csv << fmt(t) << ',' << fmt(s.pos.x()) << ',' << fmt(s.pos.y()) << ',' << fmt(s.pos.z()) << ',' << fmt(fi.px)
        << ',' << fmt(fi.py) << ',' << fmt(fi.speed2) << '\n';
  };
  row(0.0, s0);
  const long n = solmarch::step_count(a.t_max, a.dt);
  long i = 0;
  try {
    solmarch::flow_visit(s0, a.t_max, a.dt, [&](double t, const solmarch::TangentState3d& s) {
      ++i;
      if (i % a.every == 0 || i == n) row(t, s);
    });
  } catch (const solmarch::FlowError& e) {
    std::cerr << "geodesic: " << e.what() << " (output truncated)\n";
  }

  std::ofstream out(a.output, std::ios::binary);
  out << csv.str();
  if (!out) {
    std::cerr << "geodesic: cannot write " << a.output << "\n";
    return kExitIo;
  }
  return 0;
}

int run_sphere(const SphereArgs& a) {
  solmarch::SphereMesh<double> mesh;
  try {
    mesh = solmarch::geodesic_sphere(a.radius, a.n_theta, a.n_phi, a.dt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "sphere: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const solmarch::FlowError& e) {
    std::cerr << "sphere: " << e.what() << "\n";
    return kExitBadInput;
  }
  std::ofstream out(a.output, std::ios::binary);
  out << "# geodesic sphere in Sol, radius " << fmt(a.radius) << ", " << a.n_theta << "x" << a.n_phi << " grid\n";
  for (const auto& v : mesh.vertices) out << "v " << fmt(v.x()) << ' ' << fmt(v.y()) << ' ' << fmt(v.z()) << '\n';
  for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  if (!out) {
    std::cerr << "sphere: cannot write " << a.output << "\n";
    return kExitIo;
  }
  return 0;
}

int run_replay(const std::string& tape_path, const std::string& output) {
  std::ifstream in(tape_path);
  if (!in) {
    std::cerr << "replay: cannot open " << tape_path << "\n";
    return kExitBadInput;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  std::vector<solmarch::ReplayState> states;
  try {
    states = solmarch::replay_tape(buf.str());
  } catch (const std::exception& e) {
    std::cerr << "replay: " << e.what() << "\n";
    return kExitBadInput;
  }
  if (output.empty() || output == "-") {
    solmarch::write_replay_csv(states, std::cout);
    return 0;
  }
  std::ofstream out(output, std::ios::binary);
  solmarch::write_replay_csv(states, out);
  if (!out) {
    std::cerr << "replay: cannot write " << output << "\n";
    return kExitIo;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ray-marched views and numerical tools for Sol geometry", "solmarch"};
  app.require_subcommand(1);

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "Render a preset or a JSON scene to a binary PPM");
  render->set_help_flag("--help", "Print this help message and exit");
  render->add_option("--preset", ra.preset, "Preset scene name (see `scenes list`)");
  render->add_option("--scene", ra.scene_file, "JSON scene file");
  render->add_option("--observer-height", ra.h, "Observer height for dragon-plane (alias: --h)")->capture_default_str();
  render->add_option("-w,--width", ra.width, "Image width in pixels")->capture_default_str();
  render->add_option("-h,--height", ra.height, "Image height in pixels")->capture_default_str();
  render->add_option("-o,--output", ra.output, "Output PPM path")->capture_default_str();
  render->add_option("--fov", ra.fov, "Vertical field of view in radians (overrides the scene)");
  render->add_option("--eps", ra.params.epsilon, "Hit tolerance")->capture_default_str();
  render->add_option("--t-max", ra.params.t_max, "Maximum arc length per ray")->capture_default_str();
  render->add_option("--max-steps", ra.params.max_steps, "Maximum march steps per ray")->capture_default_str();
  render->add_option("--dt", ra.params.ode_dt, "RK4 step for ray integration")->capture_default_str();
  render->add_option("--safety", ra.params.safety, "Fraction of the distance bound taken per step")
      ->capture_default_str();
  render->add_option("--supersample", ra.params.supersample, "Samples per pixel edge (1 or 2)")
      ->capture_default_str();
  render->add_flag("--no-holes", ra.no_holes, "Treat perforated planes as solid");
  render->add_option("--threads", ra.threads, "Worker threads (0: SOLMARCH_THREADS or all cores)")
      ->capture_default_str();

  GeodesicArgs ga;
  auto* geodesic = app.add_subcommand("geodesic", "Integrate one geodesic and write it as CSV");
  geodesic->add_option("--origin", ga.origin, "Start point x y z")->expected(3)->capture_default_str();
  geodesic->add_option("--direction", ga.direction, "Initial direction x y z (model coordinates)")
      ->expected(3)
      ->capture_default_str();
  geodesic->add_option("--t-max", ga.t_max, "Arc length to integrate")->capture_default_str();
  geodesic->add_option("--dt", ga.dt, "RK4 step")->capture_default_str();
  geodesic->add_option("--every", ga.every, "Write every n-th step")->capture_default_str();
  geodesic->add_option("-o,--output", ga.output, "Output CSV path")->capture_default_str();

  SphereArgs sa;
  auto* sphere = app.add_subcommand("sphere", "Export a geodesic sphere as an OBJ mesh");
  sphere->add_option("--radius", sa.radius, "Sphere radius")->capture_default_str();
  sphere->add_option("--n-theta", sa.n_theta, "Latitude rings")->capture_default_str();
  sphere->add_option("--n-phi", sa.n_phi, "Samples per ring (multiples of 4 keep the D8 symmetry)")
      ->capture_default_str();
  sphere->add_option("--dt", sa.dt, "RK4 step")->capture_default_str();
  sphere->add_option("-o,--output", sa.output, "Output OBJ path")->capture_default_str();

  bool mutate_ode = false;
  auto* selftest = app.add_subcommand("selftest", "Run the numerical self-checks");
  selftest->add_flag("--mutate-ode", mutate_ode, "Debug hook: integrate a deliberately wrong geodesic equation");

  auto* scenes = app.add_subcommand("scenes", "Scene utilities");
  scenes->require_subcommand(1);
  auto* scenes_list = scenes->add_subcommand("list", "List built-in preset scenes");

  std::string tape;
  std::string replay_out;
  auto* replay = app.add_subcommand("replay", "Replay a navigation input tape and print observer states as CSV");
  replay->add_option("--tape", tape, "Tape JSON file")->required();
  replay->add_option("-o,--output", replay_out, "Output CSV path (default: standard output)");

  // `--h` names the observer height while `-h` is the image height; CLI11
  // cannot register both spellings, so the long alias is rewritten here.
  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) {
    const std::string arg = argv[i];
    if (arg == "--h") {
      args.emplace_back("--observer-height");
    } else if (arg.rfind("--h=", 0) == 0) {
      args.push_back("--observer-height=" + arg.substr(4));
    } else {
      args.push_back(arg);
    }
  }

  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  if (*render) {
    try {
      return run_render(ra);
    } catch (const solmarch::UnknownPreset& e) {
      std::cerr << "render: " << e.what() << "\n";
      return kExitBadInput;
    }
  }
  if (*geodesic) return run_geodesic(ga);
  if (*sphere) return run_sphere(sa);
  if (*selftest) {
    solmarch::SelfTestOptions opt;
    opt.mutate_ode = mutate_ode;
    return solmarch::print_selftest(solmarch::run_selftest(opt), std::cout) ? 0 : 1;
  }
  if (*scenes_list) {
    for (const auto& p : solmarch::preset_list()) std::cout << p.name << "\t" << p.description << "\n";
    return 0;
  }
  if (*replay) return run_replay(tape, replay_out);
  return kExitBadInput;
}
