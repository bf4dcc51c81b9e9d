#pragma once

#include <vector>

#include "poncelet/field.hpp"
#include "poncelet/forms.hpp"
#include "poncelet/geometry.hpp"

namespace poncelet {

/// Roots of a complex binary form on P^1, with multiplicity.
///
/// Leading coefficients below `infinity_tol` relative to the largest
/// coefficient count as roots at (1 : 0). Finite roots are eigenvalues of the
/// companion matrix of the dehomogenized polynomial, each refined by one
/// Newton step. Throws std::domain_error for the zero form.
std::vector<ParamPoint<Complex>> binary_roots(const BinaryForm<Complex>& f, double infinity_tol = 1e-13);

/// Univariate convenience: roots of Σ coeffs[i] t^i.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs);

}  // namespace poncelet
