// The golden-ratio lattice in Sol and reduction into its fundamental domain.
//
// Gamma is generated by
//   gamma1 = (phi, -1, 0),  gamma2 = (1, phi, 0),  gamma3 = (0, 0, 2 ln phi).
// gamma1 and gamma2 translate every horizontal plane by (phi, -1) and (1, phi);
// conjugating them by gamma3 acts on the planar lattice through the Anosov
// matrix [[2, 1], [1, 1]], so Gamma\Sol is the mapping torus of that map.
//
// The fundamental domain is D0 x [0, 2 ln phi), with D0 the half-open square
// {a g1 + b g2 : a, b in [-1/2, 1/2)} spanned by the planar generators.
#ifndef SOLMARCH_LATTICE_HPP
#define SOLMARCH_LATTICE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "solmarch/sol.hpp"

namespace solmarch {

namespace lattice {

template <typename Scalar = double>
inline Scalar phi() {
  using std::sqrt;
  return (1 + sqrt(Scalar(5))) / 2;
}

/// Height of one gamma3 translation, 2 ln phi.
template <typename Scalar = double>
inline Scalar height_period() {
  using std::log;
  return 2 * log(phi<Scalar>());
}

template <typename Scalar = double>
inline Point<Scalar> gamma1() {
  return Point<Scalar>(phi<Scalar>(), -1, 0);
}

template <typename Scalar = double>
inline Point<Scalar> gamma2() {
  return Point<Scalar>(1, phi<Scalar>(), 0);
}

template <typename Scalar = double>
inline Point<Scalar> gamma3() {
  return Point<Scalar>(0, 0, height_period<Scalar>());
}

inline Eigen::Matrix2i anosov_matrix() {
  Eigen::Matrix2i a;
  a << 2, 1,
       1, 1;
  return a;
}

/// Eigenvalues (phi^2, phi^-2) of the Anosov matrix.
template <typename Scalar = double>
inline Eigen::Matrix<Scalar, 2, 1> anosov_eigenvalues() {
  const Scalar p2 = phi<Scalar>() * phi<Scalar>();
  return {p2, 1 / p2};
}

/// Coordinates (a, b) of (x, y) in the basis {(phi, -1), (1, phi)}. The basis
/// is orthogonal with both vectors of squared length phi^2 + 1.
template <typename Scalar>
inline Eigen::Matrix<Scalar, 2, 1> planar_coords(Scalar x, Scalar y) {
  const Scalar f = phi<Scalar>();
  const Scalar norm2 = f * f + 1;
  return {(f * x - y) / norm2, (x + f * y) / norm2};
}

/// gamma1^n1 gamma2^n2 as a point (a pure horizontal translation).
template <typename Scalar>
inline Point<Scalar> planar_element(long n1, long n2) {
  const Scalar f = phi<Scalar>();
  return Point<Scalar>(Scalar(n1) * f + Scalar(n2), -Scalar(n1) + Scalar(n2) * f, 0);
}

/// gamma3^n.
template <typename Scalar>
inline Point<Scalar> vertical_element(long n) {
  return Point<Scalar>(0, 0, Scalar(n) * height_period<Scalar>());
}

}  // namespace lattice

/// Exponents of a lattice element gamma3^n3 * gamma1^n1 * gamma2^n2.
struct GammaWord {
  long n1 = 0;
  long n2 = 0;
  long n3 = 0;

  bool empty() const { return n1 == 0 && n2 == 0 && n3 == 0; }
  friend bool operator==(const GammaWord&, const GammaWord&) = default;
};

inline constexpr long kMaxHeightWraps = 64;

/// The lattice element named by w.
template <typename Scalar = double>
inline Point<Scalar> word_element(const GammaWord& w) {
  return mul(lattice::vertical_element<Scalar>(w.n3), lattice::planar_element<Scalar>(w.n1, w.n2));
}

/// Left-multiplies p by the word: the planar part first, then gamma3^n3.
template <typename Scalar>
inline Point<Scalar> apply_word(const GammaWord& w, const Point<Scalar>& p) {
  return mul(lattice::vertical_element<Scalar>(w.n3), mul(lattice::planar_element<Scalar>(w.n1, w.n2), p));
}

template <typename Scalar>
inline bool in_fundamental_domain(const Point<Scalar>& p) {
  if (!(p.z() >= 0 && p.z() < lattice::height_period<Scalar>())) return false;
  const auto ab = lattice::planar_coords(p.x(), p.y());
  const Scalar half(0.5);
  return ab.x() >= -half && ab.x() < half && ab.y() >= -half && ab.y() < half;
}

template <typename Scalar>
struct Teleported {
  Point<Scalar> point;
  GammaWord word;
};

/// Maps p into the fundamental domain. Returns the reduced point p' and the
/// word w with apply_word(w, p') == p.
template <typename Scalar>
Teleported<Scalar> teleport(const Point<Scalar>& p) {
  using std::abs;
  using std::exp;
  using std::floor;
  using std::isfinite;
  if (!(isfinite(p.x()) && isfinite(p.y()) && isfinite(p.z()))) {
    throw std::domain_error("teleport: non-finite point");
  }
  if (!(abs(p.z()) < Scalar(50))) throw std::domain_error("teleport: |z| must be below 50");

  const Scalar period = lattice::height_period<Scalar>();
  GammaWord w;
  w.n3 = static_cast<long>(floor(p.z() / period));
  auto lowered = [&](long n3) {
    return Point<Scalar>(exp(-Scalar(n3) * period) * p.x(), exp(Scalar(n3) * period) * p.y(),
                         p.z() - Scalar(n3) * period);
  };
  Point<Scalar> level = lowered(w.n3);
  for (int it = 0; it < 4 && !(level.z() >= 0 && level.z() < period); ++it) {
    w.n3 += level.z() < 0 ? -1 : 1;
    level = lowered(w.n3);
  }
  if (abs(w.n3) > kMaxHeightWraps) throw std::domain_error("teleport: height reduction exceeds 64 wraps");

  auto shifted = [&](long n1, long n2) {
    if (n1 == 0 && n2 == 0) return level;
    const Point<Scalar> t = lattice::planar_element<Scalar>(n1, n2);
    return Point<Scalar>(level.x() - t.x(), level.y() - t.y(), level.z());
  };
  const auto ab = lattice::planar_coords(level.x(), level.y());
  w.n1 = static_cast<long>(floor(ab.x() + Scalar(0.5)));
  w.n2 = static_cast<long>(floor(ab.y() + Scalar(0.5)));
  Point<Scalar> reduced = shifted(w.n1, w.n2);
  for (int it = 0; it < 4; ++it) {
    const auto c = lattice::planar_coords(reduced.x(), reduced.y());
    const long d1 = c.x() < -0.5 ? -1 : (c.x() >= 0.5 ? 1 : 0);
    const long d2 = c.y() < -0.5 ? -1 : (c.y() >= 0.5 ? 1 : 0);
    if (d1 == 0 && d2 == 0) break;
    w.n1 += d1;
    w.n2 += d2;
    reduced = shifted(w.n1, w.n2);
  }
  return {reduced, w};
}

/// Integer matrix M with gamma3 gamma_j gamma3^{-1} = sum_i M(i, j) gamma_i,
/// computed from the group law. Equals the Anosov matrix.
template <typename Scalar = double>
Eigen::Matrix2i conjugation_action(Scalar tol = Scalar(1e-9), Scalar* residual = nullptr) {
  using std::abs;
  using std::round;
  const Point<Scalar> g3 = lattice::gamma3<Scalar>();
  const Point<Scalar> g3inv = inverse(g3);
  const Point<Scalar> gens[2] = {lattice::gamma1<Scalar>(), lattice::gamma2<Scalar>()};
  Eigen::Matrix2i m;
  Scalar worst = 0;
  for (int j = 0; j < 2; ++j) {
    const Point<Scalar> c = mul(mul(g3, gens[j]), g3inv);
    if (abs(c.z()) > tol) throw std::logic_error("conjugate of a planar generator is not planar");
    const auto ab = lattice::planar_coords(c.x(), c.y());
    for (int i = 0; i < 2; ++i) {
      const Scalar r = round(ab[i]);
      worst = std::max(worst, abs(ab[i] - r));
      m(i, j) = static_cast<int>(r);
    }
  }
  if (residual) *residual = worst;
  if (worst > tol) throw std::logic_error("conjugation action has non-integer coefficients");
  return m;
}

}  // namespace solmarch

#endif  // SOLMARCH_LATTICE_HPP
