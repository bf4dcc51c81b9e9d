#pragma once

// Darboux closure: starting from one tangent of S, follow the intersections
// of tangents with C and collect the tangency parameters reached. For a
// Poncelet pair the set closes up after c+1 tangents whose pairwise
// intersections all lie on C.

#include <string>
#include <vector>

#include "poncelet/construction.hpp"
#include "poncelet/field.hpp"
#include "poncelet/geometry.hpp"

namespace poncelet {

struct ClosureReport {
  ParamPoint<Complex> start = ParamPoint<Complex>::infinity();
  std::vector<ParamPoint<Complex>> params_found;
  bool closed = false;
  int polygon_size = 0;
  double max_vertex_residual = 0.0;
  int iterations = 0;
  int real_params = 0;  ///< parameters with |Im t| below the matching tolerance
  std::string diagnostic;
};

/// Chordal tolerance under which two tangency parameters are the same.
inline constexpr double kParamMatchTol = 1e-7;

template <Field K>
struct Member {
  BinaryForm<K> form;
  bool base_point = false;  ///< t0 is a base point; form is the reduced pencil's member
};

/// The member g(t0) f - f(t0) g of the pencil through t0, canonically scaled.
template <Field K>
Member<K> member_through(const Pencil<K>& pencil, const ParamPoint<K>& t0) {
  const K ft = pencil.f(t0.u(), t0.v());
  const K gt = pencil.g(t0.u(), t0.v());
  Member<K> out;
  bool base = false;
  if constexpr (is_exact_v<K>) {
    base = is_zero(ft) && is_zero(gt);
  } else {
    base = magnitude(ft) <= 1e-12 * max_magnitude(pencil.f.coeffs) && magnitude(gt) <= 1e-12 * max_magnitude(pencil.g.coeffs);
  }
  if (base) {
    const auto split = split_base_points(pencil);
    Member<K> reduced = member_through(split.reduced, t0);
    reduced.base_point = true;
    return reduced;
  }
  out.form = gt * pencil.f - ft * pencil.g;
  canonicalize_scale(out.form.coeffs);
  return out;
}

/// All pairwise tangent intersections (i < j) of the given parameters.
template <Field K>
std::vector<ProjVec<K>> polygon_vertices(const ConicFrame<K>& frame, const std::vector<ParamPoint<K>>& roots) {
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      const bool same = is_exact_v<K> ? roots[i] == roots[j] : chordal_distance(roots[i], roots[j]) < 1e-12;
      if (same) throw std::invalid_argument("repeated root in polygon_vertices");
    }
  std::vector<ProjVec<K>> out;
  out.reserve(roots.size() * (roots.size() - 1) / 2);
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j) out.push_back(tangent_meet(frame, roots[i], roots[j]));
  return out;
}

/// |C(P)| / (|C|_1 |P|_inf^c), the degree-independent vertex residual.
double normalized_residual(const PlaneCurve<Complex>& curve, const Vec3<Complex>& p);

/// Traverses tangent polygons from `start` using only the conic and C.
/// Float mode; the traversal runs in complex arithmetic.
ClosureReport closure_traverse(const ConicFrame<double>& frame, const PlaneCurve<double>& curve, const ParamPoint<Complex>& start,
                               double tol);

}  // namespace poncelet
