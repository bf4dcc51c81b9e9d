#include "poncelet/closure.hpp"

#include <algorithm>
#include <cmath>

#include "poncelet/roots.hpp"

namespace poncelet {

double normalized_residual(const PlaneCurve<Complex>& curve, const Vec3<Complex>& p) {
  double c_norm = 0.0;
  for (const auto& x : curve.coeffs()) c_norm += std::abs(x);
  const double p_norm = std::max({std::abs(p[0]), std::abs(p[1]), std::abs(p[2])});
  return std::abs(curve(p)) / (c_norm * std::pow(p_norm, curve.degree()));
}

namespace {

// C restricted to the tangent at t, parametrized by the second tangency
// parameter s: s -> C(T (2 u s_u, v s_u + u s_v, 2 v s_v)).
BinaryForm<Complex> restrict_to_tangent(const ConicFrame<Complex>& frame, const PlaneCurve<Complex>& curve,
                                        const ParamPoint<Complex>& t) {
  const Complex u = t.u(), v = t.v();
  // Linear forms in (s_u, s_v) stored as {coef of s_v, coef of s_u}.
  const std::array<std::array<Complex, 2>, 3> ref{{{Complex(0), 2.0 * u}, {u, v}, {2.0 * v, Complex(0)}}};
  std::array<BinaryForm<Complex>, 3> lin;
  for (int m = 0; m < 3; ++m) {
    std::vector<Complex> c(2, Complex(0));
    for (int n = 0; n < 3; ++n)
      for (int k = 0; k < 2; ++k) c[k] += frame.transform()[m][n] * ref[n][k];
    lin[m] = BinaryForm<Complex>(std::move(c));
  }
  return substitute_binary(curve.form, lin[0], lin[1], lin[2]);
}

bool contains(const std::vector<ParamPoint<Complex>>& set, const ParamPoint<Complex>& t) {
  return std::any_of(set.begin(), set.end(), [&](const auto& s) { return chordal_distance(s, t) < kParamMatchTol; });
}

}  // namespace

ClosureReport closure_traverse(const ConicFrame<double>& frame_d, const PlaneCurve<double>& curve_d, const ParamPoint<Complex>& start,
                               double tol) {
  const auto frame = convert_frame<Complex>(frame_d);
  const auto curve = convert_curve<Complex>(curve_d);
  const int c = curve.degree();
  ClosureReport report;
  report.start = start;
  report.params_found = {start};

  double curve_norm = 0.0, t_norm = 0.0;
  for (const auto& x : curve.coeffs()) curve_norm += std::abs(x);
  for (const auto& row : frame.transform())
    for (const auto& x : row) t_norm = std::max(t_norm, std::abs(x));

  std::vector<ParamPoint<Complex>> frontier{start};
  bool overflow = false;
  bool uncovered = false;
  while (!frontier.empty() && !overflow) {
    ++report.iterations;
    std::vector<ParamPoint<Complex>> next;
    for (const auto& t : frontier) {
      const BinaryForm<Complex> restricted = restrict_to_tangent(frame, curve, t);
      const double pnorm = std::hypot(std::abs(t.u()), std::abs(t.v()));
      if (max_magnitude(restricted.coeffs) <= 1e-12 * curve_norm * std::pow(2.0 * t_norm * pnorm, c)) {
        report.diagnostic = "tangent line is a component of the curve";
        return report;
      }
      std::vector<ParamPoint<Complex>> roots;
      try {
        roots = binary_roots(restricted);
      } catch (const std::exception& e) {
        report.diagnostic = std::string("root finding failed: ") + e.what();
        return report;
      }
      for (const auto& s : roots) {
        if (contains(report.params_found, s)) continue;
        report.params_found.push_back(s);
        next.push_back(s);
        if (static_cast<int>(report.params_found.size()) > c + 1) {
          overflow = true;
          break;
        }
      }
      if (overflow) break;
    }
    if (report.iterations > c + 2) {
      uncovered = true;
      break;
    }
    frontier = std::move(next);
  }

  report.polygon_size = static_cast<int>(report.params_found.size());
  for (const auto& t : report.params_found)
    if (std::abs(t.u().imag()) < kParamMatchTol && std::abs(t.v().imag()) < kParamMatchTol) ++report.real_params;

  if (overflow) {
    report.diagnostic = "tangent polygon does not close within c+1 tangents";
    return report;
  }
  if (uncovered) {
    report.diagnostic = "iteration cap reached";
    return report;
  }
  const auto& params = report.params_found;
  for (std::size_t i = 0; i < params.size(); ++i)
    for (std::size_t j = i + 1; j < params.size(); ++j) {
      const Vec3<Complex> p = tangent_meet_coords(frame, params[i].u(), params[i].v(), params[j].u(), params[j].v());
      report.max_vertex_residual = std::max(report.max_vertex_residual, normalized_residual(curve, p));
    }
  report.closed = report.polygon_size >= 2 && report.polygon_size <= c + 1 && report.max_vertex_residual <= tol;
  if (!report.closed && report.diagnostic.empty()) report.diagnostic = "vertex residual exceeds tolerance";
  return report;
}

}  // namespace poncelet
