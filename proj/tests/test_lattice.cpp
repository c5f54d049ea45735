#include <doctest.h>

#include <cmath>
#include <random>

#include "solmarch/lattice.hpp"

using namespace solmarch;

namespace {

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

// golden-ratio values written out independently of the library
const double kPhi = (1 + std::sqrt(5.0)) / 2;

Point3d random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> xy(-10, 10), z(-3, 3);
  return {xy(rng), xy(rng), z(rng)};
}

}  // namespace

TEST_CASE("generators") {
  CHECK(lattice::phi() == kPhi);
  CHECK(lattice::gamma1() == Point3d(kPhi, -1, 0));
  CHECK(lattice::gamma2() == Point3d(1, kPhi, 0));
  CHECK(lattice::gamma3().z() == doctest::Approx(2 * std::log(kPhi)).epsilon(1e-15));
  CHECK(kPhi * 1 + (-1) * kPhi == 0.0);
  CHECK(mul(lattice::gamma1(), lattice::gamma2()) == mul(lattice::gamma2(), lattice::gamma1()));

  const Eigen::Matrix2i a = lattice::anosov_matrix();
  CHECK(a(0, 0) == 2);
  CHECK(a(0, 1) == 1);
  CHECK(a(1, 0) == 1);
  CHECK(a(1, 1) == 1);
  CHECK(a.cast<double>().determinant() == 1.0);
  const Eigen::Vector2d ev = lattice::anosov_eigenvalues();
  CHECK(ev.x() == doctest::Approx(kPhi * kPhi).epsilon(1e-15));
  CHECK(ev.y() == doctest::Approx(1 / (kPhi * kPhi)).epsilon(1e-15));
  const Eigen::Vector2d eigvec(kPhi, 1);
  CHECK(max_abs(Eigen::Vector2d(a.cast<double>() * eigvec - ev.x() * eigvec)) < 1e-14);
}

TEST_CASE("planar generators translate horizontal planes") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const Point3d p = random_point(rng);
    const Point3d q(p.x(), p.y(), 0);
    CHECK(mul(lattice::gamma1(), q) == Point3d(q.x() + kPhi, q.y() - 1, 0));
    CHECK(mul(lattice::gamma2(), q) == Point3d(q.x() + 1, q.y() + kPhi, 0));
  }
}

TEST_CASE("fundamental domain membership") {
  CHECK(in_fundamental_domain(origin<double>()));
  CHECK_FALSE(in_fundamental_domain(Point3d(0, 0, 2 * std::log(kPhi))));
  CHECK_FALSE(in_fundamental_domain(Point3d(kPhi, -1, 0)));
  CHECK_FALSE(in_fundamental_domain(Point3d(0, 0, -1e-12)));
  // the half-open planar square: a = -1/2 is in, a = +1/2 is out
  CHECK(lattice::planar_coords(-0.5 * kPhi, 0.5).x() == doctest::Approx(-0.5));
  CHECK(in_fundamental_domain(Point3d(-0.5 * kPhi + 1e-12, 0.5, 0.1)));
  CHECK_FALSE(in_fundamental_domain(Point3d(0.5 * kPhi + 1e-12, -0.5, 0.1)));
}

TEST_CASE("teleport examples") {
  const auto top = teleport(Point3d(0, 0, 2 * std::log(kPhi)));
  CHECK(max_abs(top.point) < 1e-15);
  CHECK(top.word == GammaWord{0, 0, 1});

  // gamma3 gamma1 = (phi^3, -phi^-2, 2 ln phi), with phi^3 = 2 phi + 1 and phi^-2 = 2 - phi
  const Point3d g31 = mul(lattice::gamma3(), lattice::gamma1());
  CHECK(max_abs(g31 - Point3d(2 * kPhi + 1, -(2 - kPhi), 2 * std::log(kPhi))) < 1e-14);
  const auto r = teleport(g31);
  CHECK(max_abs(r.point) < 1e-14);
  // gamma3^n3 is taken outermost, so gamma3 gamma1 itself is the word (1, 0, 1)
  CHECK(r.word == GammaWord{1, 0, 1});
  // the same element, written with gamma3 on the right: (gamma1^2 gamma2) gamma3
  CHECK(max_abs(g31 - mul(lattice::planar_element<double>(2, 1), lattice::gamma3())) < 1e-14);

  CHECK(apply_word(GammaWord{}, Point3d(1, 2, 3)) == Point3d(1, 2, 3));
  CHECK(max_abs(apply_word(GammaWord{1, 0, 0}, origin<double>()) - Point3d(kPhi, -1, 0)) < 1e-15);
}

TEST_CASE("teleport round trip and idempotence") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 1000; ++i) {
    const Point3d p = random_point(rng);
    const auto r = teleport(p);
    CHECK(in_fundamental_domain(r.point));
    CHECK(max_abs(apply_word(r.word, r.point) - p) < 1e-9);
    const auto again = teleport(r.point);
    CHECK(again.word.empty());
    CHECK(again.point == r.point);
  }
}

TEST_CASE("teleport is invariant under the generators") {
  std::mt19937_64 rng(33);
  const Point3d gens[] = {lattice::gamma1(), lattice::gamma2(), lattice::gamma3()};
  for (int i = 0; i < 300; ++i) {
    const Point3d p = random_point(rng);
    const Point3d base = teleport(p).point;
    for (const Point3d& g : gens) {
      for (const Point3d& h : {g, inverse(g)}) {
        const Point3d moved = teleport(mul(h, p)).point;
        CHECK(max_abs(moved - base) < 1e-9);
      }
    }
  }
}

TEST_CASE("observer frame survives teleport") {
  std::mt19937_64 rng(34);
  std::normal_distribution<double> n(0, 1);
  for (int i = 0; i < 100; ++i) {
    const Point3d p = random_point(rng);
    const Tangent3d local(n(rng), n(rng), n(rng));
    const Tangent3d world = push_tangent(p, local);
    const auto r = teleport(p);
    // move the world vector by the inverse lattice element, then pull back at p'
    const Point3d g_inv = inverse(word_element(r.word));
    const Tangent3d moved = push_tangent(g_inv, world);
    CHECK(max_abs(pull_tangent(r.point, moved) - local) < 1e-12 * std::max(1.0, max_abs(local)));
  }
}

TEST_CASE("conjugation by gamma3") {
  double residual = 1;
  const Eigen::Matrix2i m = conjugation_action(1e-9, &residual);
  CHECK(m == lattice::anosov_matrix());
  CHECK(residual < 1e-9);

  const Point3d g3 = lattice::gamma3();
  const Point3d c1 = mul(mul(g3, lattice::gamma1()), inverse(g3));
  const Point3d c2 = mul(mul(g3, lattice::gamma2()), inverse(g3));
  CHECK(max_abs(c1 - Point3d(std::pow(kPhi, 3), -std::pow(kPhi, -2), 0)) < 1e-14);
  CHECK(max_abs(c2 - Point3d(std::pow(kPhi, 2), 1 / kPhi, 0)) < 1e-14);
  const Point3d g1 = lattice::gamma1(), g2 = lattice::gamma2();
  CHECK(max_abs(c1 - (2 * g1 + g2)) < 1e-14);
  CHECK(max_abs(c2 - (g1 + g2)) < 1e-14);
}

TEST_CASE("teleport rejects bad input") {
  CHECK_THROWS_AS(teleport(Point3d(std::nan(""), 0, 0)), std::domain_error);
  CHECK_THROWS_AS(teleport(Point3d(0, INFINITY, 0)), std::domain_error);
  CHECK_THROWS_AS(teleport(Point3d(0, 0, 50)), std::domain_error);
  CHECK_THROWS_AS(teleport(Point3d(0, 0, -50)), std::domain_error);
  CHECK_NOTHROW(teleport(Point3d(0, 0, 49)));
}
