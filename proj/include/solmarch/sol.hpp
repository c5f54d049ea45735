// Sol group arithmetic, left-invariant metric and the order-8 stabilizer.
//
// Points of Sol are triples (x, y, z) in the R^3 model; every point doubles as
// the isometry "left multiplication by that point". Tangent vectors are stored
// in model coordinates at their base point.
#ifndef SOLMARCH_SOL_HPP
#define SOLMARCH_SOL_HPP

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace solmarch {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

template <typename Scalar>
using Point = Vec3<Scalar>;
template <typename Scalar>
using Tangent = Vec3<Scalar>;

using Point3d = Point<double>;
using Tangent3d = Tangent<double>;
using Matrix3d = Mat3<double>;

template <typename Scalar>
inline Point<Scalar> origin() {
  return Point<Scalar>::Zero();
}

// Group law. Large |z| overflows to infinity; callers reduce z first when
// that matters (see lattice.hpp).
template <typename Scalar>
inline Point<Scalar> mul(const Point<Scalar>& p, const Point<Scalar>& q) {
  using std::exp;
  return Point<Scalar>(exp(p.z()) * q.x() + p.x(), exp(-p.z()) * q.y() + p.y(),
                       p.z() + q.z());
}

template <typename Scalar>
inline Point<Scalar> inverse(const Point<Scalar>& p) {
  using std::exp;
  return Point<Scalar>(-exp(-p.z()) * p.x(), -exp(p.z()) * p.y(), -p.z());
}

/// Jacobian of left translation by p (the same at every base point).
template <typename Scalar>
inline Vec3<Scalar> left_jacobian(const Point<Scalar>& p) {
  using std::exp;
  return Vec3<Scalar>(exp(p.z()), exp(-p.z()), Scalar(1));
}

/// dL_p: carries a tangent at the origin to a tangent at p.
template <typename Scalar>
inline Tangent<Scalar> push_tangent(const Point<Scalar>& p, const Tangent<Scalar>& v) {
  return left_jacobian(p).cwiseProduct(v);
}

/// dL_p^{-1}: carries a tangent at p back to the origin.
template <typename Scalar>
inline Tangent<Scalar> pull_tangent(const Point<Scalar>& p, const Tangent<Scalar>& v) {
  return left_jacobian(p).cwiseInverse().cwiseProduct(v);
}

/// ds^2 = e^{-2z} dx^2 + e^{2z} dy^2 + dz^2 evaluated at p.
template <typename Scalar>
inline Scalar metric_inner(const Point<Scalar>& p, const Tangent<Scalar>& v,
                           const Tangent<Scalar>& w) {
  using std::exp;
  return exp(-2 * p.z()) * v.x() * w.x() + exp(2 * p.z()) * v.y() * w.y() + v.z() * w.z();
}

template <typename Scalar>
inline Scalar metric_norm(const Point<Scalar>& p, const Tangent<Scalar>& v) {
  using std::sqrt;
  return sqrt(metric_inner(p, v, v));
}

/// One of the eight isometries fixing the origin.
///
/// Bit 2 selects the swap (x, y, z) -> (y, x, -z), applied first; bits 0 and 1
/// then negate x and y. Every element is a linear group automorphism, so the
/// same matrix acts on points and on tangents.
class D8Element {
 public:
  static constexpr int kOrder = 8;

  explicit D8Element(int index) : index_(index) {
    if (index < 0 || index >= kOrder) throw std::out_of_range("D8 element index must be in [0, 8)");
  }

  static D8Element identity() { return D8Element(0); }
  static D8Element swap() { return D8Element(4); }

  int index() const { return index_; }
  bool flips_x() const { return index_ & 1; }
  bool flips_y() const { return index_ & 2; }
  bool swaps() const { return index_ & 4; }

  template <typename Scalar = double>
  Mat3<Scalar> matrix() const {
    Mat3<Scalar> m = Mat3<Scalar>::Zero();
    const Scalar sx = flips_x() ? -1 : 1;
    const Scalar sy = flips_y() ? -1 : 1;
    if (swaps()) {
      m(0, 1) = sx;
      m(1, 0) = sy;
      m(2, 2) = -1;
    } else {
      m(0, 0) = sx;
      m(1, 1) = sy;
      m(2, 2) = 1;
    }
    return m;
  }

  friend bool operator==(D8Element a, D8Element b) { return a.index_ == b.index_; }

 private:
  int index_;
};

/// Composition a∘b (apply b first).
inline D8Element compose(D8Element a, D8Element b) {
  const Matrix3d m = a.matrix() * b.matrix();
  for (int i = 0; i < D8Element::kOrder; ++i) {
    if (D8Element(i).matrix() == m) return D8Element(i);
  }
  throw std::logic_error("D8 composition left the group");
}

template <typename Scalar>
inline Point<Scalar> apply_d8(D8Element s, const Point<Scalar>& p) {
  Point<Scalar> out = p;
  if (s.swaps()) out = Point<Scalar>(p.y(), p.x(), -p.z());
  if (s.flips_x()) out.x() = -out.x();
  if (s.flips_y()) out.y() = -out.y();
  return out;
}

/// Induced action on tangents (the maps are linear, so this is the same formula).
template <typename Scalar>
inline Tangent<Scalar> apply_d8_tangent(D8Element s, const Tangent<Scalar>& v) {
  return apply_d8(s, v);
}

}  // namespace solmarch

#endif  // SOLMARCH_SOL_HPP
