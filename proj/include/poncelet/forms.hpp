#pragma once

// Dense homogeneous polynomials: binary forms in (u, v), ternary forms in
// three variables, and symmetric bihomogeneous forms in (u1, v1; u2, v2).

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "poncelet/field.hpp"
#include "poncelet/linalg.hpp"

namespace poncelet {

enum class Chart { primal, dual };

inline const char* to_string(Chart c) { return c == Chart::primal ? "primal" : "dual"; }

// ---------------------------------------------------------------------------
// Vector canonicalization

/// Exact: primitive integer vector whose first nonzero entry is positive.
/// Float: divide by the entry of largest magnitude (first one on ties).
/// The zero vector is left unchanged.
template <Field K>
void canonicalize_scale(std::vector<K>& v) {
  if constexpr (is_exact_v<K>) {
    mpz_class lcm_den = 1;
    mpz_class gcd_num = 0;
    for (const auto& x : v) {
      if (sgn(x) == 0) continue;
      mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), x.get_den_mpz_t());
    }
    for (const auto& x : v) {
      if (sgn(x) == 0) continue;
      mpz_class n = x.get_num() * (lcm_den / x.get_den());
      mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), n.get_mpz_t());
    }
    if (gcd_num == 0) return;
    auto first = std::find_if(v.begin(), v.end(), [](const Rational& x) { return sgn(x) != 0; });
    if (sgn(*first) < 0) gcd_num = -gcd_num;
    Rational factor(lcm_den, gcd_num);
    factor.canonicalize();
    for (auto& x : v) x *= factor;
  } else {
    std::size_t best = v.size();
    double best_mag = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (magnitude(v[i]) > best_mag) best_mag = magnitude(v[i]), best = i;
    if (best == v.size()) return;
    K pivot = v[best];
    for (auto& x : v) x /= pivot;
  }
}

template <Field K>
bool all_zero(const std::vector<K>& v) {
  return std::all_of(v.begin(), v.end(), [](const K& x) { return is_zero(x); });
}

template <Field K>
double max_magnitude(const std::vector<K>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, magnitude(x));
  return m;
}

inline Rational binomial(int n, int k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(b);
}

// ---------------------------------------------------------------------------
// Binary forms

/// Homogeneous polynomial Σ coeffs[i] u^i v^(d-i) of degree d = coeffs.size()-1.
template <Field K>
struct BinaryForm {
  std::vector<K> coeffs;

  BinaryForm() = default;
  explicit BinaryForm(std::vector<K> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) throw std::invalid_argument("binary form needs at least one coefficient");
  }

  static BinaryForm zero(int degree) { return BinaryForm(std::vector<K>(degree + 1, K(0))); }
  /// u^i v^(d-i)
  static BinaryForm monomial(int degree, int i) {
    BinaryForm f = zero(degree);
    f.coeffs.at(i) = K(1);
    return f;
  }
  /// Linear form vanishing at (a : b), namely b u - a v.
  static BinaryForm vanishing_at(const K& a, const K& b) { return BinaryForm(std::vector<K>{-a, b}); }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const { return all_zero(coeffs); }

  K operator()(const K& u, const K& v) const {
    // Horner in u with v powers folded in from the top.
    K acc = coeffs.back();
    for (int i = degree() - 1; i >= 0; --i) acc = acc * u + coeffs[i] * pow_int(v, degree() - i);
    return acc;
  }

  friend bool operator==(const BinaryForm& a, const BinaryForm& b) { return a.coeffs == b.coeffs; }

  static K pow_int(const K& x, int e) {
    K r(1);
    for (int i = 0; i < e; ++i) r *= x;
    return r;
  }
};

template <Field K>
BinaryForm<K> operator+(const BinaryForm<K>& a, const BinaryForm<K>& b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("adding binary forms of different degree");
  BinaryForm<K> out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
  return out;
}

template <Field K>
BinaryForm<K> operator-(const BinaryForm<K>& a, const BinaryForm<K>& b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("subtracting binary forms of different degree");
  BinaryForm<K> out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
  return out;
}

template <Field K>
BinaryForm<K> operator*(const K& s, const BinaryForm<K>& f) {
  BinaryForm<K> out = f;
  for (auto& x : out.coeffs) x *= s;
  return out;
}

template <Field K>
BinaryForm<K> operator*(const BinaryForm<K>& a, const BinaryForm<K>& b) {
  BinaryForm<K> out = BinaryForm<K>::zero(a.degree() + b.degree());
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (is_zero(a.coeffs[i])) continue;
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  }
  return out;
}

template <Field K>
BinaryForm<K> pow(const BinaryForm<K>& f, int e) {
  BinaryForm<K> r(std::vector<K>{K(1)});
  for (int i = 0; i < e; ++i) r = r * f;
  return r;
}

namespace detail {

// Index of the highest nonzero coefficient, i.e. the degree in t = u/v.
template <Field K>
int t_degree(const std::vector<K>& c) {
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
    if (!is_zero(c[i])) return i;
  return -1;
}

// Univariate division in t; returns (quotient, remainder).
template <Field K>
std::pair<std::vector<K>, std::vector<K>> divide_t(std::vector<K> num, const std::vector<K>& den) {
  const int dd = t_degree(den);
  if (dd < 0) throw std::domain_error("division by the zero form");
  const int nd = t_degree(num);
  if (nd < dd) return {std::vector<K>(1, K(0)), num};
  std::vector<K> q(nd - dd + 1, K(0));
  for (int k = nd; k >= dd; --k) {
    if (is_zero(num[k])) continue;
    K factor = num[k] / den[dd];
    q[k - dd] = factor;
    for (int j = 0; j <= dd; ++j) num[k - dd + j] -= factor * den[j];
    num[k] = K(0);
  }
  num.resize(std::max(dd, 1));
  return {q, num};
}

}  // namespace detail

/// Exact quotient f / h; throws std::domain_error if h does not divide f.
inline BinaryForm<Rational> divide_exact(const BinaryForm<Rational>& f, const BinaryForm<Rational>& h) {
  auto [q, r] = detail::divide_t(f.coeffs, h.coeffs);
  if (!all_zero(r)) throw std::domain_error("binary form division leaves a remainder");
  const int deg = f.degree() - h.degree();
  if (detail::t_degree(q) > deg) throw std::domain_error("binary form division leaves a remainder");
  q.resize(deg + 1, Rational(0));
  return BinaryForm<Rational>(std::move(q));
}

/// Greatest common divisor over the rationals, normalized to be monic in the
/// dehomogenized variable t = u/v (with the v-power carried separately).
inline BinaryForm<Rational> gcd(const BinaryForm<Rational>& f, const BinaryForm<Rational>& g) {
  if (f.is_zero()) return g;
  if (g.is_zero()) return f;
  // Multiplicity of the root (1:0), i.e. of the factor v.
  auto v_mult = [](const BinaryForm<Rational>& h) { return h.degree() - detail::t_degree(h.coeffs); };
  const int common_v = std::min(v_mult(f), v_mult(g));
  std::vector<Rational> a = f.coeffs, b = g.coeffs;
  a.resize(detail::t_degree(a) + 1);
  b.resize(detail::t_degree(b) + 1);
  while (detail::t_degree(b) >= 0) {
    auto r = detail::divide_t(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  a.resize(detail::t_degree(a) + 1);
  Rational lead = a.back();
  for (auto& x : a) x /= lead;
  a.resize(a.size() + common_v, Rational(0));
  return BinaryForm<Rational>(std::move(a));
}

/// Substitutes binary forms into a binary form: h(f, g) = Σ h_i f^i g^(k-i).
template <Field K>
BinaryForm<K> compose(const BinaryForm<K>& h, const BinaryForm<K>& f, const BinaryForm<K>& g) {
  if (f.degree() != g.degree()) throw std::invalid_argument("compose: inner forms of different degree");
  const int k = h.degree();
  std::vector<BinaryForm<K>> fp{BinaryForm<K>(std::vector<K>{K(1)})}, gp{BinaryForm<K>(std::vector<K>{K(1)})};
  for (int i = 1; i <= k; ++i) fp.push_back(fp.back() * f), gp.push_back(gp.back() * g);
  BinaryForm<K> out = BinaryForm<K>::zero(k * f.degree());
  for (int i = 0; i <= k; ++i)
    if (!is_zero(h.coeffs[i])) out = out + h.coeffs[i] * (fp[i] * gp[k - i]);
  return out;
}

// ---------------------------------------------------------------------------
// Ternary forms

/// Number of degree-d monomials in three variables.
constexpr std::size_t ternary_size(int d) { return static_cast<std::size_t>((d + 1) * (d + 2) / 2); }

/// Position of x^i y^j z^(d-i-j): monomials ordered by i ascending, then j.
constexpr std::size_t ternary_index(int d, int i, int j) {
  return static_cast<std::size_t>(i * (d + 1) - i * (i - 1) / 2 + j);
}

struct Exponents {
  int i, j, k;
  friend bool operator==(const Exponents&, const Exponents&) = default;
};

inline std::vector<Exponents> ternary_monomials(int d) {
  std::vector<Exponents> out;
  out.reserve(ternary_size(d));
  for (int i = 0; i <= d; ++i)
    for (int j = 0; i + j <= d; ++j) out.push_back({i, j, d - i - j});
  return out;
}

/// Homogeneous polynomial of degree d in three variables.
template <Field K>
struct TernaryForm {
  int degree = 0;
  std::vector<K> coeffs{K(0)};

  TernaryForm() = default;
  TernaryForm(int d, std::vector<K> c) : degree(d), coeffs(std::move(c)) {
    if (d < 0 || coeffs.size() != ternary_size(d)) throw std::invalid_argument("ternary form: coefficient count mismatch");
  }
  static TernaryForm zero(int d) { return TernaryForm(d, std::vector<K>(ternary_size(d), K(0))); }
  static TernaryForm constant(const K& x) { return TernaryForm(0, std::vector<K>{x}); }
  static TernaryForm linear(const Vec3<K>& l) {
    TernaryForm f = zero(1);
    f.at(1, 0) = l[0];
    f.at(0, 1) = l[1];
    f.at(0, 0) = l[2];
    return f;
  }

  K& at(int i, int j) { return coeffs[ternary_index(degree, i, j)]; }
  const K& at(int i, int j) const { return coeffs[ternary_index(degree, i, j)]; }

  bool is_zero() const { return all_zero(coeffs); }

  K operator()(const Vec3<K>& p) const {
    // Horner in x over Horner-in-y polynomials.
    K acc(0);
    for (int i = degree; i >= 0; --i) {
      const int m = degree - i;
      K inner = at(i, m);
      K zpow(1);
      for (int j = m - 1; j >= 0; --j) {
        zpow *= p[2];
        inner = inner * p[1] + at(i, j) * zpow;
      }
      acc = acc * p[0] + inner;
    }
    return acc;
  }

  friend bool operator==(const TernaryForm& a, const TernaryForm& b) {
    return a.degree == b.degree && a.coeffs == b.coeffs;
  }
};

template <Field K>
TernaryForm<K> operator+(const TernaryForm<K>& a, const TernaryForm<K>& b) {
  if (a.degree != b.degree) throw std::invalid_argument("adding ternary forms of different degree");
  TernaryForm<K> out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
  return out;
}

template <Field K>
TernaryForm<K> operator*(const K& s, const TernaryForm<K>& f) {
  TernaryForm<K> out = f;
  for (auto& x : out.coeffs) x *= s;
  return out;
}

template <Field K>
TernaryForm<K> operator*(const TernaryForm<K>& a, const TernaryForm<K>& b) {
  TernaryForm<K> out = TernaryForm<K>::zero(a.degree + b.degree);
  const auto ma = ternary_monomials(a.degree), mb = ternary_monomials(b.degree);
  for (std::size_t s = 0; s < ma.size(); ++s) {
    if (is_zero(a.coeffs[s])) continue;
    for (std::size_t t = 0; t < mb.size(); ++t) {
      if (is_zero(b.coeffs[t])) continue;
      out.at(ma[s].i + mb[t].i, ma[s].j + mb[t].j) += a.coeffs[s] * b.coeffs[t];
    }
  }
  return out;
}

/// f · (l0 x + l1 y + l2 z)
template <Field K>
TernaryForm<K> multiply_linear(const TernaryForm<K>& f, const Vec3<K>& l) {
  TernaryForm<K> out = TernaryForm<K>::zero(f.degree + 1);
  for (int i = 0; i <= f.degree; ++i)
    for (int j = 0; i + j <= f.degree; ++j) {
      const K& c = f.at(i, j);
      if (is_zero(c)) continue;
      out.at(i + 1, j) += c * l[0];
      out.at(i, j + 1) += c * l[1];
      out.at(i, j) += c * l[2];
    }
  return out;
}

/// Linear change of variables: returns f(L0, L1, L2) where each Lm is a
/// linear form given by its coefficient vector. Horner scheme in the first
/// variable over Horner schemes in the second, O(d^2) linear multiplications.
template <Field K>
TernaryForm<K> substitute_linear(const TernaryForm<K>& f, const Vec3<K>& lx, const Vec3<K>& ly, const Vec3<K>& lz) {
  const int d = f.degree;
  std::vector<TernaryForm<K>> zpow{TernaryForm<K>::constant(K(1))};
  for (int k = 1; k <= d; ++k) zpow.push_back(multiply_linear(zpow.back(), lz));
  TernaryForm<K> acc;
  bool started = false;
  for (int i = d; i >= 0; --i) {
    const int m = d - i;
    TernaryForm<K> inner = TernaryForm<K>::constant(f.at(i, m));
    for (int j = m - 1; j >= 0; --j) inner = multiply_linear(inner, ly) + f.at(i, j) * zpow[m - j];
    acc = started ? multiply_linear(acc, lx) + inner : inner;
    started = true;
  }
  return acc;
}

/// The same change of variables where the new variables are binary linear
/// forms; the result is a binary form of degree f.degree.
template <Field K>
BinaryForm<K> substitute_binary(const TernaryForm<K>& f, const BinaryForm<K>& lx, const BinaryForm<K>& ly,
                                const BinaryForm<K>& lz) {
  const int d = f.degree;
  std::vector<BinaryForm<K>> zpow{BinaryForm<K>(std::vector<K>{K(1)})};
  for (int k = 1; k <= d; ++k) zpow.push_back(zpow.back() * lz);
  BinaryForm<K> acc;
  bool started = false;
  for (int i = d; i >= 0; --i) {
    const int m = d - i;
    BinaryForm<K> inner(std::vector<K>{f.at(i, m)});
    for (int j = m - 1; j >= 0; --j) inner = inner * ly + f.at(i, j) * zpow[m - j];
    acc = started ? acc * lx + inner : inner;
    started = true;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Symmetric biforms

/// Bihomogeneous form of bidegree (c, c): b(i, j) is the coefficient of
/// u1^i v1^(c-i) u2^j v2^(c-j).
template <Field K>
struct SymBiForm {
  int c = 0;
  DenseMatrix<K> b;

  SymBiForm() = default;
  explicit SymBiForm(int degree) : c(degree), b(degree + 1, degree + 1) {}

  bool is_symmetric() const {
    for (int i = 0; i <= c; ++i)
      for (int j = i + 1; j <= c; ++j)
        if (!(b(i, j) == b(j, i))) return false;
    return true;
  }
  friend bool operator==(const SymBiForm& x, const SymBiForm& y) { return x.c == y.c && x.b == y.b; }
};

/// A symmetric (c, c) biform written as a degree-c polynomial in
/// q = u1 u2, p = u1 v2 + u2 v1, r = v1 v2; coefficient of q^a p^b r^d is
/// form.at(a, b).
template <Field K>
struct SymReduced {
  TernaryForm<K> form;
  int c() const { return form.degree; }
};

/// Expands q^a p^b r^d back into a biform.
template <Field K>
SymBiForm<K> expand(const SymReduced<K>& s) {
  const int c = s.c();
  SymBiForm<K> out(c);
  for (const auto& e : ternary_monomials(c)) {
    const K& coef = s.form.at(e.i, e.j);
    if (is_zero(coef)) continue;
    const int a = e.i, bexp = e.j;
    // p^b = Σ_k C(b,k) (u1 v2)^k (u2 v1)^(b-k)
    for (int k = 0; k <= bexp; ++k) out.b(a + k, a + bexp - k) += coef * convert<K>(binomial(bexp, k));
  }
  return out;
}

/// Inverse of expand. Each q^a p^b r^d has leading monomial u1^(a+b) u2^a
/// in the order "u1-degree first", so the system is triangular and is solved
/// by peeling leading terms.
template <Field K>
SymReduced<K> reduce_symmetric(const SymBiForm<K>& g, double tol = 0.0) {
  if constexpr (is_exact_v<K>) {
    if (!g.is_symmetric()) throw std::invalid_argument("reduce_symmetric: biform is not symmetric");
  } else {
    double scale = 0.0, asym = 0.0;
    for (int i = 0; i <= g.c; ++i)
      for (int j = 0; j <= g.c; ++j) {
        scale = std::max(scale, magnitude(g.b(i, j)));
        asym = std::max(asym, magnitude(K(g.b(i, j) - g.b(j, i))));
      }
    if (asym > std::max(tol, 1e-12) * std::max(scale, 1.0))
      throw std::invalid_argument("reduce_symmetric: biform is not symmetric");
  }
  const int c = g.c;
  DenseMatrix<K> rest = g.b;
  SymReduced<K> out{TernaryForm<K>::zero(c)};
  for (int i = c; i >= 0; --i)
    for (int j = i; j >= 0; --j) {
      K coef = rest(i, j);
      if (is_zero(coef)) continue;
      const int a = j, bexp = i - j;
      out.form.at(a, bexp) = coef;
      for (int k = 0; k <= bexp; ++k) rest(a + k, a + bexp - k) -= coef * convert<K>(binomial(bexp, k));
    }
  return out;
}

}  // namespace poncelet
