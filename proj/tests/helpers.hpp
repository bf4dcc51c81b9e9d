#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "poncelet/construction.hpp"
#include "poncelet/geometry.hpp"

namespace testing {

using namespace poncelet;

inline Rational Q(const char* s) {
  Rational q(s);
  q.canonicalize();
  return q;
}

inline BinaryForm<Rational> bf(std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return BinaryForm<Rational>(std::move(v));
}

/// u^a v^(d-a)
inline BinaryForm<Rational> mono(int d, int a) { return BinaryForm<Rational>::monomial(d, a); }

/// Curve from (i, j, k, coefficient) terms.
struct Term {
  int i, j, k;
  long coef;
};
inline TernaryForm<Rational> ternary(std::initializer_list<Term> terms) {
  int d = -1;
  for (const auto& t : terms) d = t.i + t.j + t.k;
  TernaryForm<Rational> f = TernaryForm<Rational>::zero(d);
  for (const auto& t : terms) f.at(t.i, t.j) += Rational(t.coef);
  return f;
}
inline PlaneCurve<Rational> curve(std::initializer_list<Term> terms, Chart chart = Chart::primal) {
  return PlaneCurve<Rational>(ternary(terms), chart);
}

inline ConicFrame<Rational> identity_frame() { return ConicFrame<Rational>::identity(); }

/// Exact equality of projective vectors up to scale.
template <Field K>
bool proportional(const std::vector<K>& a, const std::vector<K>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a[i] * b[j] != a[j] * b[i]) return false;
  return !all_zero(a) && !all_zero(b);
}

inline Mat3<Rational> mat(std::initializer_list<std::initializer_list<long>> rows) {
  Mat3<Rational> m;
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (long x : r) m[i][j++] = x;
    ++i;
  }
  return m;
}

}  // namespace testing
