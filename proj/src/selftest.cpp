#include "solmarch/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "solmarch/geodesic.hpp"
#include "solmarch/lattice.hpp"

namespace solmarch {

namespace {

struct MutatedField {
  template <typename Scalar>
  Tangent<Scalar> operator()(const Point<Scalar>& p, const Tangent<Scalar>& v) const {
    using std::exp;
    const Scalar em2z = exp(-2 * p.z());
    return Tangent<Scalar>(2 * v.x() * v.z(), -2 * v.y() * v.z(), -em2z * v.x() * v.x() + em2z * v.y() * v.y());
  }
};

TangentState3d random_unit_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::normal_distribution<double> gauss;
  const Point3d p(coord(rng), coord(rng), coord(rng));
  Eigen::Vector3d d(gauss(rng), gauss(rng), gauss(rng));
  d.normalize();
  return {p, push_tangent(p, Tangent3d(d))};
}

template <typename Field>
double conservation_drift(const TangentState3d& s0, const Field& field) {
  const auto i0 = first_integrals(s0);
  double worst = 0;
  flow_visit(s0, 10.0, 1e-3, [&](double, const TangentState3d& s) {
    const auto i = first_integrals(s);
    worst = std::max({worst, std::abs(i.px - i0.px), std::abs(i.py - i0.py), std::abs(i.speed2 - i0.speed2)});
  }, field);
  return worst;
}

}  // namespace

std::vector<SelfTestCheck> run_selftest(const SelfTestOptions& options) {
  std::vector<SelfTestCheck> checks;
  std::mt19937_64 rng(20200131);

  {
    double worst = 0;
    for (int i = 0; i < options.geodesics; ++i) {
      const TangentState3d s = random_unit_state(rng);
      try {
        worst = std::max(worst, options.mutate_ode ? conservation_drift(s, MutatedField{})
                                                   : conservation_drift(s, SolGeodesicField{}));
      } catch (const FlowError&) {
        worst = INFINITY;
      }
    }
    checks.push_back({"conservation of px, py, speed^2 over t=10", worst < 1e-9, worst, 1e-9,
                      options.mutate_ode ? "mutated ODE" : "RK4 dt=1e-3"});
  }

  {
    double worst = 0;
    for (int i = 0; i < 3; ++i) {
      const auto moved = flow_with_transport(random_unit_state(rng), Matrix3d::Identity().eval(), 10.0, 1e-3);
      worst = std::max(worst, orthonormality_defect(moved.frame));
    }
    checks.push_back({"transported frame stays orthonormal over t=10", worst < 1e-8, worst, 1e-8, "|Q^T Q - I|_inf"});
  }

  {
    std::uniform_real_distribution<double> xy(-5.0, 5.0);
    std::uniform_real_distribution<double> zs(-3.0, 3.0);
    double worst = 0;
    bool inside = true;
    for (int i = 0; i < 1000; ++i) {
      const Point3d p(xy(rng), xy(rng), zs(rng));
      const auto r = teleport(p);
      inside = inside && in_fundamental_domain(r.point);
      worst = std::max(worst, (apply_word(r.word, r.point) - p).cwiseAbs().maxCoeff());
    }
    checks.push_back({"teleport lands in D and round-trips", inside && worst < 1e-9, worst, 1e-9,
                      inside ? "1000 points" : "point left outside D"});
  }

  {
    double residual = 0;
    Eigen::Matrix2i m = Eigen::Matrix2i::Zero();
    std::string detail;
    bool ok = false;
    try {
      m = conjugation_action<double>(1e-9, &residual);
      ok = m == lattice::anosov_matrix();
    } catch (const std::logic_error& e) {
      detail = e.what();
    }
    std::ostringstream table;
    table << "[[" << m(0, 0) << "," << m(0, 1) << "],[" << m(1, 0) << "," << m(1, 1) << "]]";
    checks.push_back({"conjugation by gamma3 acts as the Anosov matrix", ok && residual < 1e-9, residual, 1e-9,
                      detail.empty() ? table.str() : detail});
  }
  return checks;
}

bool print_selftest(const std::vector<SelfTestCheck>& checks, std::ostream& out) {
  bool all = true;
  for (const auto& c : checks) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s  %-50s  value=%.3e  limit=%.1e  %s", c.pass ? "PASS" : "FAIL",
                  c.name.c_str(), c.value, c.threshold, c.detail.c_str());
    out << line << "\n";
    all = all && c.pass;
  }
  return all;
}

}  // namespace solmarch
