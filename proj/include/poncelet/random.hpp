#pragma once

// Seeded generators for exact test instances.

#include <cstdint>
#include <random>
#include <vector>

#include "poncelet/construction.hpp"

namespace poncelet {

/// Rational p/q with |p| <= range and 1 <= q <= max_den.
Rational random_rational(std::mt19937_64& rng, int range, int max_den = 1);

/// Binary form of the given degree with integer coefficients in [-range, range].
BinaryForm<Rational> random_binary_form(std::mt19937_64& rng, int degree, int range = 5);

/// Random independent pencil of curve degree c (members of degree c+1).
Pencil<Rational> random_pencil(std::mt19937_64& rng, int c, int range = 5);

/// Random pencil without base points.
Pencil<Rational> random_base_free_pencil(std::mt19937_64& rng, int c, int range = 5);

/// Random invertible frame with small rational entries.
ConicFrame<Rational> random_frame(std::mt19937_64& rng, int range = 3, int max_den = 2);

/// Condition number of the frame's transform. Float verdicts on degree-c
/// curves built from the frame lose roughly log10 of its c-th power in digits.
double conic_condition(const ConicFrame<Rational>& frame);

/// random_frame restricted to conic_condition <= max_condition.
ConicFrame<Rational> random_conditioned_frame(std::mt19937_64& rng, double max_condition, int range = 3, int max_den = 2);

/// Product of (u - r v) over the given roots (r may repeat).
BinaryForm<Rational> form_with_roots(const std::vector<Rational>& roots);

/// Pencil h * (f', g') where h has `base_degree` rational roots (possibly
/// repeated) and (f', g') is base-point free of degree c+1-base_degree.
struct BasePointPencil {
  Pencil<Rational> pencil;
  std::vector<Rational> base_roots;
  Pencil<Rational> residual;
};
BasePointPencil random_pencil_with_base_points(std::mt19937_64& rng, int c, int base_degree);

/// Deterministic per-index generator derived from a seed.
std::mt19937_64 indexed_rng(std::uint64_t seed, std::uint64_t index);

}  // namespace poncelet
