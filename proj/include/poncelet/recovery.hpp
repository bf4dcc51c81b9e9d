#pragma once

// Recovering the conic from a Poncelet curve, and the dimension experiments
// around it.
//
// Conics are reported as unit 6-vectors of coefficients over the degree-2
// monomials in ternary order (z^2, yz, y^2, xz, xy, x^2). A candidate is
// turned into a (possibly complex) frame by diagonalizing its symmetric
// matrix against the reference conic, and scored by sigma_3 / sigma_1 of the
// membership matrix of C with respect to that frame.
//
// Each start fits C by a constructed curve over (real frame, pencil) with
// Levenberg-Marquardt (refitting with fresh pencils if that stalls), then polishes the resulting conic on the 4x4
// Pfaffians of the membership matrix. Searching frames instead of conic
// coefficients keeps the objective polynomial; the score is always taken in
// the canonical frame, since a badly conditioned frame of a harmless conic
// can make sigma_3 / sigma_1 spuriously small.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "poncelet/construction.hpp"
#include "poncelet/membership.hpp"

namespace poncelet {

using ConicVec = std::array<double, 6>;

/// Unit norm, first nonzero entry positive.
ConicVec normalize_conic(ConicVec a);

/// min(|a - b|, |a + b|) after normalization.
double projective_distance(const ConicVec& a, const ConicVec& b);

/// Coefficients of X^T M X for the conic of a frame, normalized.
template <Field K>
ConicVec conic_vector(const ConicFrame<K>& frame) {
  const Mat3<K> m = conic_matrix(frame);
  ConicVec out{};
  for (const auto& e : ternary_monomials(2)) {
    // exponent triple -> the pair of coordinates it multiplies
    std::array<int, 2> idx{};
    int n = 0;
    for (int r = 0; r < e.i; ++r) idx[n++] = 0;
    for (int r = 0; r < e.j; ++r) idx[n++] = 1;
    for (int r = 0; r < e.k; ++r) idx[n++] = 2;
    const K coef = idx[0] == idx[1] ? m[idx[0]][idx[1]] : K(K(2) * m[idx[0]][idx[1]]);
    if constexpr (is_exact_v<K>) {
      out[ternary_index(2, e.i, e.j)] = coef.get_d();
    } else {
      out[ternary_index(2, e.i, e.j)] = coef;
    }
  }
  return normalize_conic(out);
}

/// Frame of the conic a (complex when the conic has no real points).
/// nullopt when |det| of the normalized symmetric matrix is below 1e-10.
std::optional<ConicFrame<Complex>> frame_from_conic(const ConicVec& a);

/// sigma_3 / sigma_1 of the membership matrix; +inf for near-singular conics.
double membership_residual(const ConicVec& conic, const PlaneCurve<double>& curve);
double membership_residual(const ConicFrame<double>& frame, const PlaneCurve<double>& curve);

struct Candidate {
  ConicVec conic{};
  double residual = 0.0;
  int basin_count = 0;  ///< starts that converged into this cluster
};

struct RecoveryResult {
  std::vector<Candidate> candidates;  ///< sorted by residual
  std::optional<bool> target_matched;
  int starts = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
};

struct RecoveryOptions {
  int starts = 100;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  double cluster_radius = 1e-4;
  int fit_iterations = 600;
  int stall_window = 60;  ///< abandon a fit whose cost has not halved in this many steps
  int pencil_redraws = 1; ///< refits from the same frame with a fresh pencil when a fit fails
  int polish_iterations = 20;
};

/// Multi-start search for every conic C is Poncelet related to.
RecoveryResult recover_conics(const PlaneCurve<double>& curve, const RecoveryOptions& options);

/// Sets target_matched: exactly one candidate, within `radius` of the target.
void match_target(RecoveryResult& result, const ConicVec& target, double radius = 1e-6);

// ---------------------------------------------------------------------------
// Tangent spaces

/// Columns spanning the image of the differential of (f, g) -> curve at the
/// pencil: 2(c+2) directional derivatives, then the curve itself.
template <Field K>
DenseMatrix<K> tangent_space_matrix(const ConicFrame<K>& frame, const Pencil<K>& pencil) {
  const int n = pencil.c + 2;
  const std::size_t rows = ternary_size(pencil.c);
  DenseMatrix<K> d(rows, 2 * n + 1);
  for (int k = 0; k < n; ++k) {
    const auto e = BinaryForm<K>::monomial(pencil.c + 1, k);
    const auto df = poncelet_curve_raw(frame, e, pencil.g);
    const auto dg = poncelet_curve_raw(frame, pencil.f, e);
    for (std::size_t r = 0; r < rows; ++r) {
      d(r, k) = df.coeffs[r];
      d(r, n + k) = dg.coeffs[r];
    }
  }
  const auto curve = poncelet_curve_raw(frame, pencil.f, pencil.g);
  for (std::size_t r = 0; r < rows; ++r) d(r, 2 * n) = curve.coeffs[r];
  return d;
}

/// Numeric rank by singular values relative to the largest.
template <Field K>
int numeric_rank(const DenseMatrix<K>& m, double rel_tol) {
  const auto sv = membership_singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++r;
  return r;
}

/// Dimension of the tangent space of the Poncelet variety at the pencil's
/// curve, modulo the overall scale of the curve; 2c at generic pencils.
template <Field K>
int tangent_space_rank(const ConicFrame<K>& frame, const Pencil<K>& pencil, double rel_tol = 1e-9) {
  const auto d = tangent_space_matrix(frame, pencil);
  if constexpr (is_exact_v<K>) {
    return static_cast<int>(exact_rank(d)) - 1;
  } else {
    return numeric_rank(d, rel_tol) - 1;
  }
}

// ---------------------------------------------------------------------------
// Intersection probe

struct ProbeSample {
  std::vector<int> lines;  ///< indices into the common tangents, with repetition
  bool member_first = false;
  bool member_second = false;
  int tangent_rank_first = 0;
  int tangent_rank_second = 0;
  int intersection_dim = 0;  ///< projective dimension of the tangent-space intersection
};

struct DimensionReport {
  int c = 0;
  int sample_count = 0;
  std::vector<int> ranks;  ///< intersection_dim per sample
  int expected = 0;        ///< the upper bound for generic points, c
  bool exact = false;
  std::vector<ProbeSample> samples;
};

/// Common tangents of two conics as tangency parameters on each.
template <Field K>
struct CommonTangents {
  std::vector<ParamPoint<K>> on_first, on_second;
  std::vector<ProjVec<K>> lines;
};

/// Float common tangents (complex); throws if fewer than four distinct ones.
CommonTangents<Complex> common_tangents(const ConicFrame<Complex>& s, const ConicFrame<Complex>& s2);

/// Exact common tangents, found numerically and confirmed exactly after
/// rationalization; throws if the four tangents are not all rational.
CommonTangents<Rational> common_tangents_exact(const ConicFrame<Rational>& s, const ConicFrame<Rational>& s2);

DimensionReport intersection_probe(const ConicFrame<double>& s, const ConicFrame<double>& s2, int c, std::uint64_t seed,
                                   int samples = 10);
DimensionReport intersection_probe_exact(const ConicFrame<Rational>& s, const ConicFrame<Rational>& s2, int c,
                                         std::uint64_t seed, int samples = 10);

/// A random pair of rational conics whose four common tangents are rational.
std::pair<ConicFrame<Rational>, ConicFrame<Rational>> random_tangent_sharing_pair(std::mt19937_64& rng);

}  // namespace poncelet
