#pragma once

// Jumping lines of the kernel bundle attached to a pencil.
//
// For a base-point-free pencil Λ of degree c+1 on S, the kernel F of the
// evaluation map O^2 -> O_S(c+1) restricted to lines has Chern classes
// c1(F) = -2, c2(F) = c+1, and its jumping lines are exactly the chords of S
// joining two points of one member of Λ. Only that geometric locus is built
// here: a line meets S at t1, t2 with (q : p : r) = (gamma : -beta : alpha),
// where (alpha, beta, gamma) is its restriction to S, so substituting into
// the reduced Bezout form gives a degree-c curve in the dual plane. That
// curve is Poncelet related to the dual conic.

#include "poncelet/construction.hpp"
#include "poncelet/geometry.hpp"
#include "poncelet/membership.hpp"

namespace poncelet {

/// The conic of tangent lines: T* = T^-T J with J (u^2, uv, v^2) = (v^2, -2uv, u^2).
template <Field K>
ConicFrame<K> dual_conic(const ConicFrame<K>& frame) {
  Mat3<K> j{};
  for (auto& row : j)
    for (auto& x : row) x = K(0);
  j[0][2] = K(1);
  j[1][1] = K(-2);
  j[2][0] = K(1);
  return ConicFrame<K>(mul(transpose(frame.inverse()), j), other_chart(frame.chart()));
}

template <Field K>
struct JumpingCurve {
  PlaneCurve<K> curve;
  /// Set for even c, where the locus exists but has no bundle interpretation.
  bool even_degree = false;
};

template <Field K>
JumpingCurve<K> jumping_curve(const ConicFrame<K>& frame, const Pencil<K>& pencil) {
  const SymReduced<K> reduced = reduce_symmetric(bezout_form(pencil));
  const Mat3<K>& t = frame.transform();
  // alpha = (T^T l)_0, beta = (T^T l)_1, gamma = (T^T l)_2
  const Vec3<K> lq{t[0][2], t[1][2], t[2][2]};
  const Vec3<K> lp{-t[0][1], -t[1][1], -t[2][1]};
  const Vec3<K> lr{t[0][0], t[1][0], t[2][0]};
  PlaneCurve<K> curve(substitute_linear(reduced.form, lq, lp, lr), other_chart(frame.chart()));
  return {curve.canonical(), pencil.c % 2 == 0};
}

template <Field K>
MembershipVerdict<K> duality_check(const ConicFrame<K>& frame, const Pencil<K>& pencil, double tol = 1e-8) {
  return is_poncelet(dual_conic(frame), jumping_curve(frame, pencil).curve, tol);
}

}  // namespace poncelet
