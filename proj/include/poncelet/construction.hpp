#pragma once

// The construction pencil -> Poncelet curve.
//
// For a pencil (f, g) of binary forms of degree c+1, the Bezout form
//   B(t1, t2) = (f(t1) g(t2) - f(t2) g(t1)) / (u1 v2 - u2 v1)
// is symmetric of bidegree (c, c). Rewritten in q = u1 u2, p = u1 v2 + u2 v1,
// r = v1 v2 it becomes a ternary form of degree c, and the tangents at t1, t2
// meet at T (2q, p, 2r); substituting q = x'/2, p = y', r = z'/2 with
// (x', y', z') = T^-1 (x, y, z) yields the curve.

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "poncelet/field.hpp"
#include "poncelet/forms.hpp"
#include "poncelet/geometry.hpp"
#include "poncelet/linalg.hpp"

namespace poncelet {

/// A plane curve of degree c, coefficients over x^i y^j z^k in ternary order.
template <Field K>
struct PlaneCurve {
  TernaryForm<K> form;
  Chart chart = Chart::primal;

  PlaneCurve() = default;
  PlaneCurve(TernaryForm<K> f, Chart ch) : form(std::move(f)), chart(ch) {
    if (form.is_zero()) throw std::invalid_argument("plane curve with all coefficients zero");
  }

  int degree() const { return form.degree; }
  const std::vector<K>& coeffs() const { return form.coeffs; }
  K operator()(const Vec3<K>& p) const { return form(p); }

  /// Same curve in canonical scale (see canonicalize_scale).
  PlaneCurve canonical() const {
    PlaneCurve out = *this;
    canonicalize_scale(out.form.coeffs);
    return out;
  }

  friend bool operator==(const PlaneCurve& a, const PlaneCurve& b) { return a.chart == b.chart && a.form == b.form; }
};

template <Field To, Field From>
PlaneCurve<To> convert_curve(const PlaneCurve<From>& c) {
  std::vector<To> coeffs;
  coeffs.reserve(c.coeffs().size());
  for (const auto& x : c.coeffs()) coeffs.push_back(convert<To>(x));
  return PlaneCurve<To>(TernaryForm<To>(c.degree(), std::move(coeffs)), c.chart);
}

/// Two independent binary forms of degree c+1.
template <Field K>
struct Pencil {
  int c = 0;
  BinaryForm<K> f, g;

  Pencil() = default;
  Pencil(BinaryForm<K> f_, BinaryForm<K> g_) : f(std::move(f_)), g(std::move(g_)) {
    if (f.degree() != g.degree()) throw std::invalid_argument("pencil: members of different degree");
    if (f.degree() < 1) throw std::invalid_argument("pencil: members must have degree at least 1");
    c = f.degree() - 1;
    if (!independent(f, g)) throw std::invalid_argument("degenerate pencil");
  }

  static bool independent(const BinaryForm<K>& a, const BinaryForm<K>& b) {
    double biggest = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
      for (std::size_t j = i + 1; j < a.coeffs.size(); ++j) {
        K m = a.coeffs[i] * b.coeffs[j] - a.coeffs[j] * b.coeffs[i];
        if constexpr (is_exact_v<K>) {
          if (!is_zero(m)) return true;
        } else {
          biggest = std::max(biggest, magnitude(m));
        }
      }
    if constexpr (is_exact_v<K>) {
      return false;
    } else {
      return biggest > 1e-12 * max_magnitude(a.coeffs) * max_magnitude(b.coeffs);
    }
  }
};

template <Field To, Field From>
Pencil<To> convert_pencil(const Pencil<From>& p) {
  auto conv = [](const BinaryForm<From>& b) {
    std::vector<To> c;
    for (const auto& x : b.coeffs) c.push_back(convert<To>(x));
    return BinaryForm<To>(std::move(c));
  };
  return Pencil<To>(conv(p.f), conv(p.g));
}

/// Bezout form of an arbitrary pair, without the independence check. It is
/// bilinear and alternating in (f, g).
template <Field K>
SymBiForm<K> bezout_raw(const BinaryForm<K>& f, const BinaryForm<K>& g) {
  const int n = f.degree();  // c + 1
  if (g.degree() != n || n < 1) throw std::invalid_argument("bezout: forms must share a positive degree");
  const int c = n - 1;
  auto minor = [&](int i, int j) -> K { return f.coeffs[i] * g.coeffs[j] - f.coeffs[j] * g.coeffs[i]; };
  // (u1 v2 - u2 v1) B = N gives N(i, j) = B(i-1, j) - B(i, j-1); solve
  // column by column starting from B(i-1, 0) = N(i, 0).
  SymBiForm<K> out(c);
  for (int j = 0; j <= c; ++j)
    for (int i = c + 1; i >= 1; --i) {
      K value = minor(i, j);
      if (j > 0 && i <= c) value += out.b(i, j - 1);
      out.b(i - 1, j) = value;
    }
  // Remaining equations N(0, j) = -B(0, j-1) hold identically for alternating N.
  return out;
}

template <Field K>
SymBiForm<K> bezout_form(const Pencil<K>& pencil) {
  if (!Pencil<K>::independent(pencil.f, pencil.g)) throw std::invalid_argument("degenerate pencil");
  return bezout_raw(pencil.f, pencil.g);
}

/// Substitutes (q, p, r) = (x'/2, y', z'/2), (x', y', z') = T^-1 (x, y, z).
template <Field K>
TernaryForm<K> reduced_to_plane(const ConicFrame<K>& frame, const SymReduced<K>& s) {
  const Mat3<K>& inv = frame.inverse();
  const K half = K(1) / K(2);
  Vec3<K> lq{inv[0][0] * half, inv[0][1] * half, inv[0][2] * half};
  Vec3<K> lp{inv[1][0], inv[1][1], inv[1][2]};
  Vec3<K> lr{inv[2][0] * half, inv[2][1] * half, inv[2][2] * half};
  return substitute_linear(s.form, lq, lp, lr);
}

/// Curve coefficients before scale canonicalization; linear in the Plücker
/// coordinates of the pencil.
template <Field K>
TernaryForm<K> poncelet_curve_raw(const ConicFrame<K>& frame, const BinaryForm<K>& f, const BinaryForm<K>& g) {
  return reduced_to_plane(frame, reduce_symmetric(bezout_raw(f, g)));
}

template <Field K>
PlaneCurve<K> poncelet_curve(const ConicFrame<K>& frame, const Pencil<K>& pencil) {
  return PlaneCurve<K>(reduced_to_plane(frame, reduce_symmetric(bezout_form(pencil))), frame.chart()).canonical();
}

// ---------------------------------------------------------------------------
// Base points

namespace detail {

// Determinant by Gaussian elimination (first nonzero pivot when exact,
// partial pivoting otherwise).
template <Field K>
K determinant(DenseMatrix<K> m) {
  const std::size_t n = m.rows();
  K det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    if constexpr (is_exact_v<K>) {
      while (piv < n && is_zero(m(piv, col))) ++piv;
      if (piv == n) return K(0);
    } else {
      for (std::size_t i = col + 1; i < n; ++i)
        if (magnitude(m(i, col)) > magnitude(m(piv, col))) piv = i;
      if (is_zero(m(piv, col))) return K(0);
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (is_zero(m(i, col))) continue;
      K factor = m(i, col) / m(col, col);
      for (std::size_t j = col; j < n; ++j) m(i, j) -= factor * m(col, j);
    }
  }
  return det;
}

template <Field K>
std::vector<K> solve_square(DenseMatrix<K> a, std::vector<K> b) {
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    if constexpr (is_exact_v<K>) {
      while (piv < n && is_zero(a(piv, col))) ++piv;
      if (piv == n) throw std::domain_error("singular interpolation system");
    } else {
      for (std::size_t i = col + 1; i < n; ++i)
        if (magnitude(a(i, col)) > magnitude(a(piv, col))) piv = i;
      if (is_zero(a(piv, col))) throw std::domain_error("singular interpolation system");
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || is_zero(a(i, col))) continue;
      K factor = a(i, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(i, j) -= factor * a(col, j);
      b[i] -= factor * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a(i, i);
  return b;
}

// Sylvester resultant of two binary forms.
template <Field K>
K resultant(const BinaryForm<K>& a, const BinaryForm<K>& b) {
  const int m = a.degree(), n = b.degree();
  const std::size_t size = static_cast<std::size_t>(m + n);
  if (size == 0) return K(1);
  DenseMatrix<K> s(size, size);
  // Rows hold coefficients from the highest power of u down.
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) s(r, r + i) = a.coeffs[m - i];
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) s(n + r, r + i) = b.coeffs[n - i];
  return determinant(s);
}

}  // namespace detail

/// Product of the tangent lines at the roots of h (with multiplicity), as a
/// curve of degree deg h. Computed without root extraction as the resultant
/// of h with the tangency quadratic of a moving point, interpolated on the
/// principal lattice of degree deg h.
template <Field K>
TernaryForm<K> tangent_product(const ConicFrame<K>& frame, const BinaryForm<K>& h) {
  const int m = h.degree();
  const auto monomials = ternary_monomials(m);
  DenseMatrix<K> vander(monomials.size(), monomials.size());
  std::vector<K> values(monomials.size());
  for (std::size_t r = 0; r < monomials.size(); ++r) {
    const Vec3<K> pt{K(monomials[r].i), K(monomials[r].j), K(monomials[r].k)};
    for (std::size_t s = 0; s < monomials.size(); ++s) {
      K term(1);
      for (int e = 0; e < monomials[s].i; ++e) term *= pt[0];
      for (int e = 0; e < monomials[s].j; ++e) term *= pt[1];
      for (int e = 0; e < monomials[s].k; ++e) term *= pt[2];
      vander(r, s) = term;
    }
    // Tangency quadratic z u^2 - 2 y uv + x v^2 at the reference point pt.
    BinaryForm<K> quad(std::vector<K>{pt[0], K(-2) * pt[1], pt[2]});
    values[r] = detail::resultant(h, quad);
  }
  TernaryForm<K> ref(m, detail::solve_square(vander, values));
  const Mat3<K>& inv = frame.inverse();
  return substitute_linear(ref, Vec3<K>{inv[0][0], inv[0][1], inv[0][2]}, Vec3<K>{inv[1][0], inv[1][1], inv[1][2]},
                           Vec3<K>{inv[2][0], inv[2][1], inv[2][2]});
}

template <Field K>
struct BaseSplit {
  BinaryForm<K> h;  ///< gcd of the members; constant when base-point free
  Pencil<K> reduced;
  bool approximate = false;  ///< float mode: h from a tolerance-based gcd
};

namespace detail {

// Euclid with tolerance for float binary forms.
template <Field K>
BinaryForm<K> approximate_gcd(const BinaryForm<K>& f, const BinaryForm<K>& g, double tol) {
  auto trim = [tol](std::vector<K> c, double scale) {
    for (auto& x : c)
      if (magnitude(x) <= tol * scale) x = K(0);
    c.resize(std::max(t_degree(c) + 1, 1));
    return c;
  };
  const double scale = std::max(max_magnitude(f.coeffs), max_magnitude(g.coeffs));
  auto v_mult = [&](const BinaryForm<K>& b) { return b.degree() - t_degree(trim(b.coeffs, scale)); };
  const int common_v = std::min(v_mult(f), v_mult(g));
  std::vector<K> a = trim(f.coeffs, scale), b = trim(g.coeffs, scale);
  while (t_degree(b) > 0) {
    auto r = trim(divide_t(a, b).second, scale);
    a = std::move(b);
    b = std::move(r);
  }
  if (t_degree(b) == 0) a = {K(1)};
  K lead = a.back();
  for (auto& x : a) x /= lead;
  a.resize(a.size() + common_v, K(0));
  return BinaryForm<K>(std::move(a));
}

template <Field K>
BinaryForm<K> divide_approx(const BinaryForm<K>& f, const BinaryForm<K>& h) {
  auto q = divide_t(f.coeffs, h.coeffs).first;
  q.resize(f.degree() - h.degree() + 1, K(0));
  return BinaryForm<K>(std::move(q));
}

}  // namespace detail

/// Splits off the base points: h = gcd(f, g), reduced pencil (f/h, g/h).
template <Field K>
BaseSplit<K> split_base_points(const Pencil<K>& pencil, double tol = 1e-10) {
  if constexpr (is_exact_v<K>) {
    BinaryForm<Rational> h = gcd(pencil.f, pencil.g);
    return {h, Pencil<Rational>(divide_exact(pencil.f, h), divide_exact(pencil.g, h)), false};
  } else {
    BinaryForm<K> h = detail::approximate_gcd(pencil.f, pencil.g, tol);
    return {h, Pencil<K>(detail::divide_approx(pencil.f, h), detail::divide_approx(pencil.g, h)), true};
  }
}

// ---------------------------------------------------------------------------
// Plücker coordinates

/// All minors f_i g_j - f_j g_i, i < j, in lexicographic order of (i, j).
template <Field K>
std::vector<K> plucker_coords(const Pencil<K>& pencil) {
  const auto& f = pencil.f.coeffs;
  const auto& g = pencil.g.coeffs;
  std::vector<K> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j) out.push_back(f[i] * g[j] - f[j] * g[i]);
  if constexpr (is_exact_v<K>) {
    if (all_zero(out)) throw std::invalid_argument("degenerate pencil");
  }
  return out;
}

template <Field K>
std::vector<K> canonical_plucker(const Pencil<K>& pencil) {
  auto v = plucker_coords(pencil);
  canonicalize_scale(v);
  return v;
}

/// The linear map L_c taking Plücker coordinates to raw curve coefficients
/// on the identity frame. Column (i, j) is the curve of the monomial pencil
/// (u^i v^(c+1-i), u^j v^(c+1-j)), whose only nonzero minor is (i, j) = 1.
inline DenseMatrix<Rational> plucker_map(int c) {
  const int n = c + 2;
  const std::size_t size = ternary_size(c);
  DenseMatrix<Rational> lc(size, size);
  const auto frame = ConicFrame<Rational>::identity();
  std::size_t col = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++col) {
      auto curve = poncelet_curve_raw(frame, BinaryForm<Rational>::monomial(c + 1, i), BinaryForm<Rational>::monomial(c + 1, j));
      for (std::size_t r = 0; r < size; ++r) lc(r, col) = curve.coeffs[r];
    }
  return lc;
}

// ---------------------------------------------------------------------------
// Composition

/// (h1(f, g), h2(f, g)) for an inner pencil (f, g) and outer forms h1, h2.
template <Field K>
Pencil<K> compose_pencil(const Pencil<K>& inner, const BinaryForm<K>& h1, const BinaryForm<K>& h2) {
  if (h1.degree() != h2.degree()) throw std::invalid_argument("compose_pencil: outer forms of different degree");
  if (!Pencil<K>::independent(h1, h2)) throw std::invalid_argument("degenerate pencil");
  return Pencil<K>(compose(h1, inner.f, inner.g), compose(h2, inner.f, inner.g));
}

// ---------------------------------------------------------------------------
// Ternary division, used to check factorizations exactly.

/// Exact quotient a / b of ternary forms over the rationals, or nullopt if b
/// does not divide a.
inline std::optional<TernaryForm<Rational>> divide_ternary(const TernaryForm<Rational>& a, const TernaryForm<Rational>& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero form");
  if (b.degree > a.degree) return a.is_zero() ? std::optional(TernaryForm<Rational>::zero(0)) : std::nullopt;
  // Leading monomial order: larger i first, then larger j.
  auto lead = [](const TernaryForm<Rational>& f) -> std::optional<Exponents> {
    for (int i = f.degree; i >= 0; --i)
      for (int j = f.degree - i; j >= 0; --j)
        if (sgn(f.at(i, j)) != 0) return Exponents{i, j, f.degree - i - j};
    return std::nullopt;
  };
  const Exponents lb = *lead(b);
  TernaryForm<Rational> rest = a;
  TernaryForm<Rational> quot = TernaryForm<Rational>::zero(a.degree - b.degree);
  while (auto la = lead(rest)) {
    if (la->i < lb.i || la->j < lb.j || la->k < lb.k) return std::nullopt;
    const Rational factor = rest.at(la->i, la->j) / b.at(lb.i, lb.j);
    quot.at(la->i - lb.i, la->j - lb.j) += factor;
    TernaryForm<Rational> mono = TernaryForm<Rational>::zero(a.degree - b.degree);
    mono.at(la->i - lb.i, la->j - lb.j) = factor;
    TernaryForm<Rational> sub = mono * b;
    for (std::size_t s = 0; s < rest.coeffs.size(); ++s) rest.coeffs[s] -= sub.coeffs[s];
  }
  return quot;
}

}  // namespace poncelet
