#include "poncelet/roots.hpp"

#include <Eigen/Eigenvalues>

#include <stdexcept>

namespace poncelet {

namespace {

Complex horner(const std::vector<Complex>& c, Complex t) {
  Complex acc(0.0, 0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Complex horner_derivative(const std::vector<Complex>& c, Complex t) {
  Complex acc(0.0, 0.0);
  for (std::size_t i = c.size() - 1; i >= 1; --i) acc = acc * t + static_cast<double>(i) * c[i];
  return acc;
}

}  // namespace

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg >= 0 && coeffs[deg] == Complex(0.0, 0.0)) --deg;
  if (deg < 0) throw std::domain_error("roots of the zero polynomial");
  if (deg == 0) return {};
  std::vector<Complex> c(coeffs.begin(), coeffs.begin() + deg + 1);
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("companion eigenvalue iteration did not converge");
  std::vector<Complex> roots;
  roots.reserve(deg);
  for (int i = 0; i < deg; ++i) {
    Complex t = solver.eigenvalues()(i);
    const Complex d = horner_derivative(c, t);
    if (std::abs(d) > 0.0) {
      const Complex polished = t - horner(c, t) / d;
      if (std::isfinite(polished.real()) && std::isfinite(polished.imag()) &&
          std::abs(horner(c, polished)) <= std::abs(horner(c, t)))
        t = polished;
    }
    roots.push_back(t);
  }
  return roots;
}

std::vector<ParamPoint<Complex>> binary_roots(const BinaryForm<Complex>& f, double infinity_tol) {
  const double scale = max_magnitude(f.coeffs);
  if (scale == 0.0) throw std::domain_error("roots of the zero form");
  std::vector<Complex> c = f.coeffs;
  int top = f.degree();
  while (top > 0 && std::abs(c[top]) <= infinity_tol * scale) --top;
  c.resize(top + 1);
  std::vector<ParamPoint<Complex>> out;
  for (const Complex& t : polynomial_roots(c)) out.emplace_back(t);
  for (int i = top; i < f.degree(); ++i) out.push_back(ParamPoint<Complex>::infinity());
  return out;
}

}  // namespace poncelet
