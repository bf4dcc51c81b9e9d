#pragma once

// Projective-plane primitives around a smooth conic carried as a frame: an
// invertible T mapping the reference conic {xz = y^2} onto the conic, with
// the induced parametrization t = (u : v) -> T (u^2, uv, v^2).

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "poncelet/field.hpp"
#include "poncelet/forms.hpp"
#include "poncelet/linalg.hpp"

namespace poncelet {

enum class VecKind { point, line };

/// Homogeneous coordinates of a point or line, kept in canonical scale:
/// exact mode divides by the last nonzero coordinate, float mode by the
/// coordinate of largest magnitude.
template <Field K>
class ProjVec {
 public:
  ProjVec(Vec3<K> coords, VecKind kind, Chart chart = Chart::primal) : coords_(std::move(coords)), kind_(kind), chart_(chart) {
    canonicalize();
  }

  const Vec3<K>& coords() const { return coords_; }
  const K& operator[](int i) const { return coords_[i]; }
  VecKind kind() const { return kind_; }
  Chart chart() const { return chart_; }

  friend bool operator==(const ProjVec& a, const ProjVec& b) {
    return a.kind_ == b.kind_ && a.chart_ == b.chart_ && a.coords_ == b.coords_;
  }

 private:
  void canonicalize() {
    if constexpr (is_exact_v<K>) {
      for (int i = 2; i >= 0; --i)
        if (!is_zero(coords_[i])) {
          K pivot = coords_[i];
          for (auto& x : coords_) x /= pivot;
          return;
        }
    } else {
      int best = -1;
      double best_mag = 0.0;
      for (int i = 0; i < 3; ++i)
        if (magnitude(coords_[i]) > best_mag) best_mag = magnitude(coords_[i]), best = i;
      if (best >= 0) {
        K pivot = coords_[best];
        for (auto& x : coords_) x /= pivot;
        return;
      }
    }
    throw std::invalid_argument("projective vector with all coordinates zero");
  }

  Vec3<K> coords_;
  VecKind kind_;
  Chart chart_;
};

/// A point (u : v) of the parameter line; canonical form has v = 1 unless v = 0.
template <Field K>
class ParamPoint {
 public:
  ParamPoint(K u, K v) : u_(std::move(u)), v_(std::move(v)) {
    if (is_zero(v_)) {
      if (is_zero(u_)) throw std::invalid_argument("parameter (0 : 0)");
      u_ = K(1);
    } else {
      u_ /= v_;
      v_ = K(1);
    }
  }
  /// Affine parameter t, i.e. (t : 1).
  explicit ParamPoint(K t) : ParamPoint(std::move(t), K(1)) {}

  static ParamPoint infinity() { return ParamPoint(K(1), K(0)); }

  const K& u() const { return u_; }
  const K& v() const { return v_; }
  bool is_infinite() const { return is_zero(v_); }

  friend bool operator==(const ParamPoint& a, const ParamPoint& b) { return a.u_ == b.u_ && a.v_ == b.v_; }

 private:
  K u_, v_;
};

/// Chordal distance on P^1: |u1 v2 - u2 v1| / (|(u1,v1)| |(u2,v2)|).
template <Field K>
double chordal_distance(const ParamPoint<K>& a, const ParamPoint<K>& b) {
  auto norm = [](const ParamPoint<K>& t) { return std::hypot(magnitude(t.u()), magnitude(t.v())); };
  return magnitude(K(a.u() * b.v() - b.u() * a.v())) / (norm(a) * norm(b));
}

/// A smooth conic given as the image of the reference conic xz - y^2 = 0.
template <Field K>
class ConicFrame {
 public:
  explicit ConicFrame(Mat3<K> t, Chart chart = Chart::primal) : t_(std::move(t)), chart_(chart) {
    const K d = det3(t_);
    if constexpr (is_exact_v<K>) {
      if (is_zero(d)) throw std::invalid_argument("conic frame: singular transform");
    } else {
      double norm = 0.0;
      for (const auto& row : t_)
        for (const auto& x : row) norm = std::max(norm, magnitude(x));
      if (!(magnitude(d) > 1e-13 * norm * norm * norm)) throw std::invalid_argument("conic frame: singular transform");
    }
    t_inv_ = inverse3(t_);
  }

  static ConicFrame identity(Chart chart = Chart::primal) { return ConicFrame(identity3<K>(), chart); }

  const Mat3<K>& transform() const { return t_; }
  const Mat3<K>& inverse() const { return t_inv_; }
  Chart chart() const { return chart_; }

 private:
  Mat3<K> t_;
  Mat3<K> t_inv_;
  Chart chart_;
};

template <Field To, Field From>
ConicFrame<To> convert_frame(const ConicFrame<From>& f) {
  Mat3<To> t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = convert<To>(f.transform()[i][j]);
  return ConicFrame<To>(t, f.chart());
}

/// Symmetric matrix M of the conic, X^T M X = 0, equal to T^-T M0 T^-1 with
/// M0 the matrix of xz - y^2.
template <Field K>
Mat3<K> conic_matrix(const ConicFrame<K>& frame) {
  Mat3<K> m0{};
  for (auto& row : m0)
    for (auto& x : row) x = K(0);
  m0[0][2] = m0[2][0] = K(1) / K(2);
  m0[1][1] = K(-1);
  const Mat3<K>& s = frame.inverse();
  return mul(transpose(s), mul(m0, s));
}

/// Evaluates the quadratic form X^T M X.
template <Field K>
K quadratic_form(const Mat3<K>& m, const Vec3<K>& x) {
  return dot(x, mul(m, x));
}

template <Field K>
K bilinear_form(const Mat3<K>& m, const Vec3<K>& x, const Vec3<K>& y) {
  return dot(x, mul(m, y));
}

template <Field K>
ProjVec<K> conic_point(const ConicFrame<K>& frame, const ParamPoint<K>& t) {
  const Vec3<K> ref{t.u() * t.u(), t.u() * t.v(), t.v() * t.v()};
  return ProjVec<K>(mul(frame.transform(), ref), VecKind::point, frame.chart());
}

inline Chart other_chart(Chart c) { return c == Chart::primal ? Chart::dual : Chart::primal; }

/// Tangent line at the parameter t: T^-T (v^2, -2uv, u^2).
template <Field K>
ProjVec<K> tangent_line(const ConicFrame<K>& frame, const ParamPoint<K>& t) {
  const Vec3<K> ref{t.v() * t.v(), K(-2) * t.u() * t.v(), t.u() * t.u()};
  return ProjVec<K>(mul(transpose(frame.inverse()), ref), VecKind::line, frame.chart());
}

/// Raw (uncanonicalized) tangent intersection T (2 u1 u2, u1 v2 + u2 v1, 2 v1 v2).
template <Field K>
Vec3<K> tangent_meet_coords(const ConicFrame<K>& frame, const K& u1, const K& v1, const K& u2, const K& v2) {
  const Vec3<K> ref{K(2) * u1 * u2, u1 * v2 + u2 * v1, K(2) * v1 * v2};
  return mul(frame.transform(), ref);
}

/// Intersection of the tangents at t1 and t2. Equal parameters are an
/// error: the limit is the conic point and its meaning is left to the caller.
template <Field K>
ProjVec<K> tangent_meet(const ConicFrame<K>& frame, const ParamPoint<K>& t1, const ParamPoint<K>& t2) {
  if (t1 == t2) throw std::invalid_argument("coincident parameters");
  return ProjVec<K>(tangent_meet_coords(frame, t1.u(), t1.v(), t2.u(), t2.v()), VecKind::point, frame.chart());
}

template <Field K>
struct TangencyParams {
  /// z' tau^2 - 2 y' tau sigma + x' sigma^2 with (x', y', z') = T^-1 P,
  /// stored as a BinaryForm in (tau, sigma).
  BinaryForm<K> quadratic;
  /// P lies on the conic: the quadratic has a double root.
  bool on_conic = false;
  /// Both roots when they lie in K (always for complex floats, when the
  /// discriminant is a rational square in exact mode).
  std::optional<std::pair<ParamPoint<K>, ParamPoint<K>>> roots;
};

namespace detail {

inline std::optional<Rational> rational_sqrt(const Rational& x) {
  if (sgn(x) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(x.get_num_mpz_t()) || !mpz_perfect_square_p(x.get_den_mpz_t())) return std::nullopt;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
  return Rational(n, d);
}

// Roots of a u^2 + b uv + c v^2 (given as BinaryForm coeffs {c, b, a}).
template <Field K>
std::optional<std::pair<ParamPoint<K>, ParamPoint<K>>> quadratic_roots(const BinaryForm<K>& q) {
  const K& c = q.coeffs[0];
  const K& b = q.coeffs[1];
  const K& a = q.coeffs[2];
  const K disc = b * b - K(4) * a * c;
  K root;
  if constexpr (is_exact_v<K>) {
    auto s = rational_sqrt(disc);
    if (!s) return std::nullopt;
    root = *s;
  } else if constexpr (std::is_same_v<K, Complex>) {
    root = std::sqrt(disc);
  } else {
    if (disc < 0) return std::nullopt;
    root = std::sqrt(disc);
  }
  if (is_zero(a)) {
    // Root at infinity plus the root of b u + c v.
    if (is_zero(b)) return std::make_pair(ParamPoint<K>::infinity(), ParamPoint<K>::infinity());
    return std::make_pair(ParamPoint<K>::infinity(), ParamPoint<K>(K(-c), b));
  }
  // Numerically stable pairing for floats: compute the larger root first.
  if constexpr (!is_exact_v<K>) {
    K sign_root = root;
    if (magnitude(K(-b - root)) > magnitude(K(-b + root))) sign_root = -root;
    K big = (-b + sign_root);
    if (is_zero(big)) return std::make_pair(ParamPoint<K>(K(0), K(1)), ParamPoint<K>(K(0), K(1)));
    // roots: big / (2a) and 2c / big
    return std::make_pair(ParamPoint<K>(big, K(2) * a), ParamPoint<K>(K(2) * c, big));
  } else {
    return std::make_pair(ParamPoint<K>(K(-b + root), K(2) * a), ParamPoint<K>(K(-b - root), K(2) * a));
  }
}

}  // namespace detail

/// Parameters of the two tangents to the conic through P.
template <Field K>
TangencyParams<K> tangency_params(const ConicFrame<K>& frame, const ProjVec<K>& p) {
  const Vec3<K> x = mul(frame.inverse(), p.coords());
  TangencyParams<K> out{BinaryForm<K>(std::vector<K>{x[0], K(-2) * x[1], x[2]})};
  const K disc = K(4) * x[1] * x[1] - K(4) * x[0] * x[2];
  if constexpr (is_exact_v<K>) {
    out.on_conic = is_zero(disc);
  } else {
    double scale = std::max({magnitude(x[0]), magnitude(x[1]), magnitude(x[2])});
    out.on_conic = magnitude(disc) <= 1e-14 * scale * scale;
  }
  out.roots = detail::quadratic_roots(out.quadratic);
  return out;
}

/// Restriction of a line to the conic: (alpha, beta, gamma) with
/// alpha u^2 + beta uv + gamma v^2 = l^T T (u^2, uv, v^2).
template <Field K>
std::array<K, 3> restrict_line(const ConicFrame<K>& frame, const ProjVec<K>& line) {
  const Vec3<K> r = mul(transpose(frame.transform()), line.coords());
  if constexpr (is_exact_v<K>) {
    if (is_zero(r[0]) && is_zero(r[1]) && is_zero(r[2])) throw std::logic_error("line restricts to zero on a smooth conic");
  }
  return {r[0], r[1], r[2]};
}

template <Field K>
K discriminant(const std::array<K, 3>& abc) {
  return abc[1] * abc[1] - K(4) * abc[0] * abc[2];
}

/// Builds a frame for the conic X^T A X = 0 from one rational point P on it.
/// The second point comes from a rational chord through P, the third frame
/// column from the pole of the chord.
inline ConicFrame<Rational> frame_through_point(const Mat3<Rational>& a, const Vec3<Rational>& p, Chart chart = Chart::primal) {
  if (is_zero(det3(a))) throw std::invalid_argument("frame_through_point: singular conic");
  if (!is_zero(quadratic_form(a, p))) throw std::invalid_argument("frame_through_point: point is not on the conic");
  const Vec3<Rational> ap = mul(a, p);
  std::optional<Vec3<Rational>> q;
  for (int k = 0; k < 3 && !q; ++k) {
    Vec3<Rational> d{Rational(0), Rational(0), Rational(0)};
    d[k] = 1;
    const Rational dad = quadratic_form(a, d);
    const Rational pad = dot(ap, d);
    if (is_zero(dad) || is_zero(pad)) continue;
    const Rational s = Rational(-2) * pad / dad;
    q = Vec3<Rational>{p[0] + s * d[0], p[1] + s * d[1], p[2] + s * d[2]};
  }
  if (!q) {
    // Every coordinate direction is tangent or isotropic; use a mixed chord.
    for (int k = 1; k < 8 && !q; ++k) {
      Vec3<Rational> d{Rational(1), Rational(k), Rational(k * k + 1)};
      const Rational dad = quadratic_form(a, d);
      const Rational pad = dot(ap, d);
      if (is_zero(dad) || is_zero(pad)) continue;
      const Rational s = Rational(-2) * pad / dad;
      q = Vec3<Rational>{p[0] + s * d[0], p[1] + s * d[1], p[2] + s * d[2]};
    }
  }
  if (!q) throw std::logic_error("frame_through_point: no admissible chord");
  const Vec3<Rational> pole = mul(inverse3(a), cross(p, *q));
  // Columns P, R, gamma Q with gamma chosen so (1,1,1) maps onto the conic.
  const Rational gamma = -quadratic_form(a, pole) / (Rational(2) * bilinear_form(a, p, *q));
  Mat3<Rational> t;
  for (int i = 0; i < 3; ++i) {
    t[i][0] = p[i];
    t[i][1] = pole[i];
    t[i][2] = gamma * (*q)[i];
  }
  return ConicFrame<Rational>(t, chart);
}

}  // namespace poncelet
