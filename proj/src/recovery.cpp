#include "poncelet/recovery.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

#include "poncelet/random.hpp"
#include "poncelet/roots.hpp"

namespace poncelet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDegenerateDet = 1e-10;

Eigen::Matrix3d symmetric_matrix(const ConicVec& a) {
  Eigen::Matrix3d m;
  m(0, 0) = a[ternary_index(2, 2, 0)];
  m(1, 1) = a[ternary_index(2, 0, 2)];
  m(2, 2) = a[ternary_index(2, 0, 0)];
  m(0, 1) = m(1, 0) = a[ternary_index(2, 1, 1)] / 2;
  m(0, 2) = m(2, 0) = a[ternary_index(2, 1, 0)] / 2;
  m(1, 2) = m(2, 1) = a[ternary_index(2, 0, 1)] / 2;
  return m;
}

double norm(const ConicVec& a) { return std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0)); }

// Complex membership matrix of a real curve against a complex frame.
DenseMatrix<Complex> membership_matrix(const ConicFrame<Complex>& frame, const PlaneCurve<Complex>& curve) {
  return antisym_matrix(pullback_biform(frame, curve));
}

double sigma_ratio(const DenseMatrix<Complex>& m) {
  const auto sv = membership_singular_values(m);
  if (!(sv(0) > 0.0)) return kInf;
  return sv(2) / sv(0);
}

// 4x4 Pfaffians of the membership matrix, normalized by |M|_F^2; they all
// vanish exactly when M has rank 2.
std::vector<double> pfaffian_residuals(const ConicVec& a, const PlaneCurve<Complex>& curve) {
  const auto frame = frame_from_conic(a);
  if (!frame) return {};
  const auto m = membership_matrix(*frame, curve);
  const int n = static_cast<int>(m.rows());
  double fro = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) fro += std::norm(m(i, j));
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          const Complex pf = m(i, j) * m(k, l) - m(i, k) * m(j, l) + m(i, l) * m(j, k);
          out.push_back(pf.real() / fro);
          out.push_back(pf.imag() / fro);
        }
  return out;
}

double sum_squares(const std::vector<double>& r) { return std::inner_product(r.begin(), r.end(), r.begin(), 0.0); }

ConicVec from_eigen(const Eigen::VectorXd& x) {
  ConicVec a;
  for (int i = 0; i < 6; ++i) a[i] = x(i);
  return a;
}

using Residuals = std::function<std::vector<double>(const Eigen::VectorXd&)>;
using Retraction = std::function<void(Eigen::VectorXd&)>;

struct LmSettings {
  int iterations = 100;
  int stall_window = 0;  // give up when the cost has not halved within this many steps; 0 never
  bool central = true;
  double step = 1e-7;
};

// Levenberg-Marquardt with a finite-difference Jacobian. `retract` maps a
// trial point back onto the parameter manifold (normalizations).
Eigen::VectorXd levenberg_marquardt(const Residuals& residual, const Retraction& retract, Eigen::VectorXd x,
                                    const LmSettings& s) {
  std::vector<double> r = residual(x);
  if (r.empty()) return x;
  double cost = sum_squares(r);
  double lambda = 1e-3;
  const int m = static_cast<int>(r.size()), p = static_cast<int>(x.size());
  double window_cost = cost;
  int window_start = 0;
  Eigen::MatrixXd jac(m, p);
  for (int it = 0; it < s.iterations && cost > 1e-30; ++it) {
    if (s.stall_window > 0 && it - window_start >= s.stall_window) {
      if (cost > 0.5 * window_cost && cost > 1e-8) break;
      window_cost = cost;
      window_start = it;
    }
    for (int k = 0; k < p; ++k) {
      const double h = s.step * std::max(1.0, std::fabs(x(k)));
      Eigen::VectorXd xp = x;
      xp(k) += h;
      const auto rp = residual(xp);
      if (rp.empty()) return x;
      if (s.central) {
        Eigen::VectorXd xm = x;
        xm(k) -= h;
        const auto rm = residual(xm);
        if (rm.empty()) return x;
        for (int i = 0; i < m; ++i) jac(i, k) = (rp[i] - rm[i]) / (2 * h);
      } else {
        for (int i = 0; i < m; ++i) jac(i, k) = (rp[i] - r[i]) / h;
      }
    }
    const Eigen::Map<const Eigen::VectorXd> rv(r.data(), m);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * rv;
    bool accepted = false;
    for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
      Eigen::MatrixXd lhs = jtj;
      for (int k = 0; k < p; ++k) lhs(k, k) += lambda * (jtj(k, k) + 1e-12);
      Eigen::VectorXd trial = x + lhs.ldlt().solve(-jtr);
      retract(trial);
      const auto rt = residual(trial);
      if (!rt.empty() && sum_squares(rt) < cost) {
        x = trial;
        r = rt;
        cost = sum_squares(rt);
        lambda = std::max(lambda / 3, 1e-12);
        accepted = true;
      } else {
        lambda *= 4;
      }
    }
    if (!accepted) break;
  }
  return x;
}

Mat3<double> frame_matrix(const Eigen::VectorXd& x) {
  Mat3<double> t;
  for (int i = 0; i < 9; ++i) t[i / 3][i % 3] = x(i);
  return t;
}

// sqrt of 1 / multinomial(d; i, j, k): coefficients scaled by these have the
// orthogonally invariant (Bombieri) norm. The fit converges from noticeably
// more starts in this norm than in plain coefficients.
std::vector<double> bombieri_weights(int d) {
  std::vector<double> w(ternary_size(d));
  for (const auto& e : ternary_monomials(d))
    w[ternary_index(d, e.i, e.j)] =
        std::sqrt(std::tgamma(e.i + 1.0) * std::tgamma(e.j + 1.0) * std::tgamma(e.k + 1.0) / std::tgamma(d + 1.0));
  return w;
}

// Fits C by a constructed curve: parameters are a real frame (9 entries)
// followed by the pencil (f, g); the residual is the difference of the
// unit-normalized, Bombieri-weighted coefficient vectors, sign-aligned.
std::vector<double> fit_residuals(const Eigen::VectorXd& x, const std::vector<double>& target) {
  const int n = (static_cast<int>(x.size()) - 9) / 2;
  std::vector<double> f(x.data() + 9, x.data() + 9 + n), g(x.data() + 9 + n, x.data() + 9 + 2 * n);
  TernaryForm<double> raw;
  try {
    raw = poncelet_curve_raw(ConicFrame<double>(frame_matrix(x)), BinaryForm<double>(std::move(f)), BinaryForm<double>(std::move(g)));
  } catch (const std::invalid_argument&) {
    return {};
  }
  static thread_local std::vector<double> w;
  static thread_local int w_degree = -1;
  if (w_degree != raw.degree) w = bombieri_weights(w_degree = raw.degree);
  double nr = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    raw.coeffs[i] *= w[i];
    nr += raw.coeffs[i] * raw.coeffs[i];
    dot += raw.coeffs[i] * target[i];
  }
  if (!(nr > 0.0)) return {};
  nr = (dot >= 0 ? 1.0 : -1.0) * std::sqrt(nr);
  std::vector<double> out(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) out[i] = raw.coeffs[i] / nr - target[i];
  return out;
}

struct StartOutcome {
  ConicVec conic{};
  double residual = kInf;
};

StartOutcome run_start(const PlaneCurve<Complex>& curve, const PlaneCurve<double>& real_curve, const RecoveryOptions& opt, int index) {
  auto rng = indexed_rng(opt.seed, static_cast<std::uint64_t>(index));
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = real_curve.degree() + 2;

  // Unit target in the Bombieri norm.
  std::vector<double> target = real_curve.coeffs();
  const auto w = bombieri_weights(real_curve.degree());
  double norm2 = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) norm2 += (target[i] *= w[i]) * target[i];
  for (double& v : target) v /= std::sqrt(norm2);

  auto retract = [n](Eigen::VectorXd& y) {
    y.head(9).normalize();
    y.segment(9, n).normalize();
    y.tail(n).normalize();
  };
  auto fit = [&](Eigen::VectorXd y) {
    retract(y);
    return levenberg_marquardt([&](const Eigen::VectorXd& z) { return fit_residuals(z, target); }, retract, std::move(y),
                               {opt.fit_iterations, opt.stall_window, false, 1e-7});
  };
  auto frame_residual = [&](const Eigen::VectorXd& y) {
    try {
      return membership_residual(conic_vector(ConicFrame<double>(frame_matrix(y))), real_curve);
    } catch (const std::invalid_argument&) {
      return kInf;
    }
  };

  Eigen::VectorXd x(9 + 2 * n);
  for (int i = 0; i < x.size(); ++i) x(i) = gauss(rng);
  x = fit(x);
  // A fit stuck at a nearby Poncelet curve usually has the wrong pencil
  // rather than a hopeless frame: keep the frame, redraw the pencil.
  for (int hop = 0; hop < opt.pencil_redraws && !(frame_residual(x) < opt.tol); ++hop) {
    for (int i = 9; i < x.size(); ++i) x(i) = gauss(rng);
    x = fit(x);
  }

  StartOutcome out;
  try {
    out.conic = conic_vector(ConicFrame<double>(frame_matrix(x)));
  } catch (const std::invalid_argument&) {
    return out;
  }
  out.residual = membership_residual(out.conic, real_curve);
  if (!(out.residual < 1e-4)) return out;

  // Polish in conic coordinates on the quantity that is finally reported.
  Eigen::VectorXd a(6);
  for (int i = 0; i < 6; ++i) a(i) = out.conic[i];
  a = levenberg_marquardt([&](const Eigen::VectorXd& y) { return pfaffian_residuals(from_eigen(y), curve); },
                          [](Eigen::VectorXd& y) { y.normalize(); }, a, {opt.polish_iterations, 0, true, 1e-7});
  const ConicVec polished = normalize_conic(from_eigen(a));
  const double r = membership_residual(polished, real_curve);
  if (r < out.residual) {
    out.conic = polished;
    out.residual = r;
  }
  return out;
}

}  // namespace

ConicVec normalize_conic(ConicVec a) {
  const double n = norm(a);
  if (n == 0.0) return a;
  double sign = 1.0;
  for (double x : a)
    if (x != 0.0) {
      sign = x > 0 ? 1.0 : -1.0;
      break;
    }
  for (double& x : a) x *= sign / n;
  return a;
}

double projective_distance(const ConicVec& a, const ConicVec& b) {
  const ConicVec na = normalize_conic(a), nb = normalize_conic(b);
  double dm = 0.0, dp = 0.0;
  for (int i = 0; i < 6; ++i) {
    dm += (na[i] - nb[i]) * (na[i] - nb[i]);
    dp += (na[i] + nb[i]) * (na[i] + nb[i]);
  }
  return std::sqrt(std::min(dm, dp));
}

std::optional<ConicFrame<Complex>> frame_from_conic(const ConicVec& raw) {
  const ConicVec a = normalize_conic(raw);
  Eigen::Matrix3d m = symmetric_matrix(a);
  if (!(std::fabs(m.determinant()) >= kDegenerateDet)) return std::nullopt;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(m);
  if ((solver.eigenvalues().array() > 0).count() >= 2) solver.compute(-m);
  const Eigen::Vector3d d = solver.eigenvalues();
  Eigen::Matrix3d q = solver.eigenvectors();
  for (int k = 0; k < 3; ++k) {
    Eigen::Index imax;
    q.col(k).cwiseAbs().maxCoeff(&imax);
    if (q(imax, k) < 0) q.col(k) *= -1.0;
  }
  // Eigenbasis of the reference form xz - y^2, eigenvalues ascending.
  const double s = std::sqrt(0.5);
  Eigen::Matrix3d r;
  r << 0, s, s,  //
      1, 0, 0,   //
      0, -s, s;
  const Eigen::Vector3d e(-1.0, -0.5, 0.5);
  // S = R diag(sqrt(d/e)) Q^T satisfies S^T M0 S = m; the frame is S^-1.
  Eigen::Matrix3cd t = Eigen::Matrix3cd::Zero();
  for (int k = 0; k < 3; ++k) {
    const Complex scale = 1.0 / std::sqrt(Complex(d(k) / e(k), 0.0));
    t += scale * (q.col(k).cast<Complex>() * r.col(k).cast<Complex>().transpose());
  }
  Mat3<Complex> tm;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) tm[i][j] = t(i, j);
  try {
    return ConicFrame<Complex>(tm);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

double membership_residual(const ConicVec& conic, const PlaneCurve<double>& curve) {
  const auto frame = frame_from_conic(conic);
  if (!frame) return kInf;
  return sigma_ratio(membership_matrix(*frame, convert_curve<Complex>(curve)));
}

double membership_residual(const ConicFrame<double>& frame, const PlaneCurve<double>& curve) {
  return sigma_ratio(membership_matrix(convert_frame<Complex>(frame), convert_curve<Complex>(curve)));
}

RecoveryResult recover_conics(const PlaneCurve<double>& curve, const RecoveryOptions& options) {
  if (curve.degree() < 2) throw std::invalid_argument("recover_conics: curve degree must be at least 2");
  const auto complex_curve = convert_curve<Complex>(curve);
  std::vector<StartOutcome> outcomes(options.starts);
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), options.starts));
  if (workers == 1) {
    for (int i = 0; i < options.starts; ++i) outcomes[i] = run_start(complex_curve, curve, options, i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int i = static_cast<int>(w); i < options.starts; i += static_cast<int>(workers))
          outcomes[i] = run_start(complex_curve, curve, options, i);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<StartOutcome> hits;
  for (const auto& o : outcomes)
    if (o.residual < options.tol) hits.push_back(o);
  std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.residual < b.residual; });

  RecoveryResult result;
  result.starts = options.starts;
  result.seed = options.seed;
  result.tol = options.tol;
  for (const auto& h : hits) {
    auto it = std::find_if(result.candidates.begin(), result.candidates.end(),
                           [&](const Candidate& c) { return projective_distance(c.conic, h.conic) < options.cluster_radius; });
    if (it != result.candidates.end()) {
      ++it->basin_count;
    } else {
      result.candidates.push_back({h.conic, h.residual, 1});
    }
  }
  return result;
}

void match_target(RecoveryResult& result, const ConicVec& target, double radius) {
  result.target_matched = result.candidates.size() == 1 && projective_distance(result.candidates[0].conic, target) < radius;
}

// ---------------------------------------------------------------------------
// Common tangents and the intersection probe

namespace {

// Tangency parameter of a line known to touch the conic: the double root of
// its restriction.
template <Field K>
ParamPoint<K> touching_parameter(const ConicFrame<K>& frame, const ProjVec<K>& line) {
  const auto abc = restrict_line(frame, line);
  if (magnitude(abc[0]) >= magnitude(abc[2])) return ParamPoint<K>(K(-abc[1]), K(K(2) * abc[0]));
  return ParamPoint<K>(K(K(2) * abc[2]), K(-abc[1]));
}

// Binary quartic whose roots are the parameters t on s with tangent_line(s, t)
// tangent to s2.
BinaryForm<Complex> common_tangent_quartic(const ConicFrame<Complex>& s, const ConicFrame<Complex>& s2) {
  const Mat3<Complex> dual = inverse3(conic_matrix(s2));
  TernaryForm<Complex> q = TernaryForm<Complex>::zero(2);
  q.at(2, 0) = dual[0][0];
  q.at(0, 2) = dual[1][1];
  q.at(0, 0) = dual[2][2];
  q.at(1, 1) = 2.0 * dual[0][1];
  q.at(1, 0) = 2.0 * dual[0][2];
  q.at(0, 1) = 2.0 * dual[1][2];
  // tangent_line(s, t) = T^-T (v^2, -2uv, u^2) as binary quadratics
  const std::array<std::array<Complex, 3>, 3> ref{{{1.0, 0.0, 0.0}, {0.0, -2.0, 0.0}, {0.0, 0.0, 1.0}}};
  const Mat3<Complex> tit = transpose(s.inverse());
  std::array<BinaryForm<Complex>, 3> lines;
  for (int m = 0; m < 3; ++m) {
    std::vector<Complex> c(3, Complex(0));
    for (int n = 0; n < 3; ++n)
      for (int k = 0; k < 3; ++k) c[k] += tit[m][n] * ref[n][k];
    lines[m] = BinaryForm<Complex>(std::move(c));
  }
  return substitute_binary(q, lines[0], lines[1], lines[2]);
}

std::vector<ParamPoint<Complex>> distinct_quartic_roots(const ConicFrame<Complex>& s, const ConicFrame<Complex>& s2) {
  const auto roots = binary_roots(common_tangent_quartic(s, s2));
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (chordal_distance(roots[i], roots[j]) < 1e-6) throw std::invalid_argument("conics have fewer than four distinct common tangents");
  if (roots.size() != 4) throw std::invalid_argument("conics have fewer than four distinct common tangents");
  return roots;
}

// Continued-fraction convergents of x, smallest denominators first.
std::vector<Rational> convergents(double x, long max_den) {
  std::vector<Rational> out;
  mpz_class h0 = 1, h1 = 0, k0 = 0, k1 = 1;
  double rest = x;
  for (int it = 0; it < 40; ++it) {
    const double a = std::floor(rest);
    if (!std::isfinite(a) || std::fabs(a) > 1e15) break;
    const mpz_class ai(a);
    const mpz_class h = ai * h0 + h1, k = ai * k0 + k1;
    if (k > max_den) break;
    out.emplace_back(h, k);
    out.back().canonicalize();
    h1 = h0, h0 = h, k1 = k0, k0 = k;
    const double frac = rest - a;
    if (frac < 1e-15) break;
    rest = 1.0 / frac;
  }
  return out;
}

template <Field K>
TernaryForm<K> line_product(const CommonTangents<K>& tangents, const std::vector<int>& lines) {
  TernaryForm<K> prod = TernaryForm<K>::constant(K(1));
  for (int i : lines) prod = multiply_linear(prod, tangents.lines[i].coords());
  return prod;
}

template <Field K>
Pencil<K> base_point_pencil(const std::vector<ParamPoint<K>>& params, const std::vector<int>& lines) {
  BinaryForm<K> h(std::vector<K>{K(1)});
  for (int i : lines) h = h * BinaryForm<K>::vanishing_at(params[i].u(), params[i].v());
  const BinaryForm<K> u(std::vector<K>{K(0), K(1)}), v(std::vector<K>{K(1), K(0)});
  return Pencil<K>(h * u, h * v);
}

template <Field K>
int space_rank(const DenseMatrix<K>& m) {
  if constexpr (is_exact_v<K>) {
    return static_cast<int>(exact_rank(m));
  } else {
    return numeric_rank(m, 1e-9);
  }
}

template <Field K>
DimensionReport probe(const ConicFrame<K>& s, const ConicFrame<K>& s2, const CommonTangents<K>& tangents, int c, std::uint64_t seed,
                      int samples) {
  DimensionReport report;
  report.c = c;
  report.expected = c;
  report.exact = is_exact_v<K>;
  for (int k = 0; k < samples; ++k) {
    auto rng = indexed_rng(seed, static_cast<std::uint64_t>(k));
    std::uniform_int_distribution<int> pick(0, 3);
    ProbeSample sample;
    for (int i = 0; i < c; ++i) sample.lines.push_back(pick(rng));
    std::sort(sample.lines.begin(), sample.lines.end());
    const PlaneCurve<K> curve(line_product(tangents, sample.lines), Chart::primal);
    sample.member_first = is_poncelet(s, curve).is_poncelet;
    sample.member_second = is_poncelet(s2, curve).is_poncelet;
    const auto d1 = tangent_space_matrix(s, base_point_pencil(tangents.on_first, sample.lines));
    const auto d2 = tangent_space_matrix(s2, base_point_pencil(tangents.on_second, sample.lines));
    DenseMatrix<K> both(d1.rows(), d1.cols() + d2.cols());
    for (std::size_t r = 0; r < d1.rows(); ++r) {
      for (std::size_t j = 0; j < d1.cols(); ++j) both(r, j) = d1(r, j);
      for (std::size_t j = 0; j < d2.cols(); ++j) both(r, d1.cols() + j) = d2(r, j);
    }
    const int r1 = space_rank(d1), r2 = space_rank(d2), r12 = space_rank(both);
    sample.tangent_rank_first = r1 - 1;
    sample.tangent_rank_second = r2 - 1;
    sample.intersection_dim = r1 + r2 - r12 - 1;
    report.ranks.push_back(sample.intersection_dim);
    report.samples.push_back(std::move(sample));
  }
  report.sample_count = samples;
  return report;
}

}  // namespace

CommonTangents<Complex> common_tangents(const ConicFrame<Complex>& s, const ConicFrame<Complex>& s2) {
  CommonTangents<Complex> out;
  for (const auto& t : distinct_quartic_roots(s, s2)) {
    out.on_first.push_back(t);
    out.lines.push_back(tangent_line(s, t));
    out.on_second.push_back(touching_parameter(s2, out.lines.back()));
  }
  return out;
}

CommonTangents<Rational> common_tangents_exact(const ConicFrame<Rational>& s, const ConicFrame<Rational>& s2) {
  const auto roots = distinct_quartic_roots(convert_frame<Complex>(s), convert_frame<Complex>(s2));
  auto touches = [&](const ParamPoint<Rational>& t) { return sgn(discriminant(restrict_line(s2, tangent_line(s, t)))) == 0; };
  CommonTangents<Rational> out;
  for (const auto& r : roots) {
    std::optional<ParamPoint<Rational>> exact;
    if (r.is_infinite()) {
      if (touches(ParamPoint<Rational>::infinity())) exact = ParamPoint<Rational>::infinity();
    } else if (std::fabs(r.u().imag()) < 1e-6 * std::max(1.0, std::abs(r.u()))) {
      for (const auto& q : convergents(r.u().real(), 100000000L))
        if (touches(ParamPoint<Rational>(q))) {
          exact = ParamPoint<Rational>(q);
          break;
        }
    }
    if (!exact) throw std::invalid_argument("common tangents are not all rational");
    out.on_first.push_back(*exact);
    out.lines.push_back(tangent_line(s, *exact));
    out.on_second.push_back(touching_parameter(s2, out.lines.back()));
  }
  return out;
}

DimensionReport intersection_probe(const ConicFrame<double>& s, const ConicFrame<double>& s2, int c, std::uint64_t seed, int samples) {
  const auto cs = convert_frame<Complex>(s), cs2 = convert_frame<Complex>(s2);
  return probe(cs, cs2, common_tangents(cs, cs2), c, seed, samples);
}

DimensionReport intersection_probe_exact(const ConicFrame<Rational>& s, const ConicFrame<Rational>& s2, int c, std::uint64_t seed,
                                         int samples) {
  return probe(s, s2, common_tangents_exact(s, s2), c, seed, samples);
}

std::pair<ConicFrame<Rational>, ConicFrame<Rational>> random_tangent_sharing_pair(std::mt19937_64& rng) {
  for (;;) {
    const ConicFrame<Rational> s = random_frame(rng);
    std::vector<Rational> params;
    while (params.size() < 4) {
      Rational t = random_rational(rng, 4, 2);
      if (std::find(params.begin(), params.end(), t) == params.end()) params.push_back(t);
    }
    std::vector<Vec3<Rational>> lines;
    for (const auto& t : params) lines.push_back(tangent_line(s, ParamPoint<Rational>(t)).coords());
    const Mat3<Rational> dual = inverse3(conic_matrix(s));
    const Vec3<Rational> m12 = cross(lines[0], lines[1]), m34 = cross(lines[2], lines[3]);
    const Rational mu = random_rational(rng, 3, 2);
    if (sgn(mu) == 0) continue;
    Mat3<Rational> pencil_member;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) pencil_member[i][j] = dual[i][j] + mu * (m12[i] * m34[j] + m34[i] * m12[j]) / 2;
    if (sgn(det3(pencil_member)) == 0) continue;
    const ConicFrame<Rational> dual_frame = frame_through_point(pencil_member, lines[0], Chart::dual);
    // Points of the second conic are the tangent lines of its dual.
    Mat3<Rational> j{};
    for (auto& row : j)
      for (auto& x : row) x = 0;
    j[0][2] = 1;
    j[1][1] = -2;
    j[2][0] = 1;
    ConicFrame<Rational> s2(mul(transpose(dual_frame.inverse()), j), Chart::primal);
    try {
      (void)common_tangents_exact(s, s2);
    } catch (const std::invalid_argument&) {
      continue;
    }
    return {s, s2};
  }
}

}  // namespace poncelet
