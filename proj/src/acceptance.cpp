#include "poncelet/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "poncelet/closure.hpp"
#include "poncelet/duality.hpp"
#include "poncelet/membership.hpp"
#include "poncelet/random.hpp"
#include "poncelet/recovery.hpp"

namespace poncelet {

namespace {

struct Tally {
  int pass = 0, total = 0;
  void add(bool ok) {
    ++total;
    if (ok) ++pass;
  }
  bool all() const { return total > 0 && pass == total; }
  std::string str() const { return std::to_string(pass) + "/" + std::to_string(total); }
};

std::vector<Rational> canon(std::vector<Rational> v) {
  canonicalize_scale(v);
  return v;
}

std::vector<Rational> distinct_rationals(std::mt19937_64& rng, int n, const std::vector<Rational>& avoid) {
  std::vector<Rational> out;
  while (static_cast<int>(out.size()) < n) {
    Rational t = random_rational(rng, 12, 5);
    if (std::find(out.begin(), out.end(), t) == out.end() && std::find(avoid.begin(), avoid.end(), t) == avoid.end())
      out.push_back(t);
  }
  return out;
}

// Each criterion draws from its own stream so that ids can be run alone.
std::mt19937_64 stream(std::uint64_t seed, int id, int trial) { return indexed_rng(seed, static_cast<std::uint64_t>(id) * 100000 + trial); }

struct Outcome {
  bool passed;
  std::string detail;
};

// 1. construct -> is_poncelet -> recovered pencil, exactly.
Outcome round_trip(std::uint64_t seed, Level level) {
  const int per_c = level == Level::full ? 100 : 10;
  Tally t;
  for (int c = 1; c <= 8; ++c)
    for (int n = 0; n < per_c; ++n) {
      auto rng = stream(seed, 1, c * 1000 + n);
      const auto frame = random_frame(rng);
      const auto pencil = random_pencil(rng, c);
      const auto v = is_poncelet(frame, poncelet_curve(frame, pencil));
      t.add(v.is_poncelet && v.rank == 2 && v.pencil && canonical_plucker(*v.pencil) == canonical_plucker(pencil));
    }
  return {t.all(), t.str() + " pencils recovered"};
}

// 2. the curve vanishes exactly at every vertex of both generators' polygons.
Outcome vertex_vanishing(std::uint64_t seed, Level level) {
  const int pencils = level == Level::full ? 10 : 4;
  Tally members;
  int vertices = 0;
  for (int n = 0; n < pencils; ++n) {
    auto rng = stream(seed, 2, n);
    const int c = 1 + n % 6;
    const auto frame = random_frame(rng);
    const auto r1 = distinct_rationals(rng, c + 1, {});
    const auto r2 = distinct_rationals(rng, c + 1, r1);
    const auto curve = poncelet_curve(frame, Pencil<Rational>(form_with_roots(r1), form_with_roots(r2)));
    for (const auto* roots : {&r1, &r2}) {
      std::vector<ParamPoint<Rational>> params(roots->begin(), roots->end());
      bool ok = true;
      // pairwise tangent intersections, computed directly
      for (std::size_t i = 0; i < params.size(); ++i)
        for (std::size_t j = i + 1; j < params.size(); ++j) {
          const auto p = tangent_meet(frame, params[i], params[j]);
          ok = ok && curve(p.coords()) == 0;
          ++vertices;
        }
      members.add(ok);
    }
  }
  return {members.all(), members.str() + " members vanish at all " + std::to_string(vertices) + " vertices"};
}

// 3. L_c is invertible and agrees with the construction; GL2 scales both sides by det.
Outcome plucker_identification(std::uint64_t seed, Level level) {
  const int per_c = level == Level::full ? 50 : 10;
  Tally t;
  int invertible = 0;
  for (int c = 1; c <= 6; ++c) {
    const auto lc = plucker_map(c);
    if (lc.rows() == lc.cols() && exact_rank(lc) == lc.rows()) ++invertible;
    for (int n = 0; n < per_c; ++n) {
      auto rng = stream(seed, 3, c * 1000 + n);
      const auto frame = random_frame(rng);
      const auto p = random_pencil(rng, c);
      auto image = [&](const Pencil<Rational>& q) {
        const auto x = plucker_coords(q);
        std::vector<Rational> out(lc.rows());
        for (std::size_t r = 0; r < lc.rows(); ++r)
          for (std::size_t k = 0; k < lc.cols(); ++k) out[r] += lc(r, k) * x[k];
        return out;
      };
      bool ok = image(p) == poncelet_curve_raw(ConicFrame<Rational>::identity(), p.f, p.g).coeffs;

      Rational a, b, cc, d, det2;
      do {
        a = random_rational(rng, 4), b = random_rational(rng, 4), cc = random_rational(rng, 4), d = random_rational(rng, 4);
        det2 = a * d - b * cc;
      } while (det2 == 0);
      const BinaryForm<Rational> f2 = a * p.f + b * p.g, g2 = cc * p.f + d * p.g;
      const Pencil<Rational> q(f2, g2);
      const auto x = plucker_coords(p), y = plucker_coords(q);
      for (std::size_t k = 0; k < x.size(); ++k) ok = ok && y[k] == det2 * x[k];
      const auto raw_p = poncelet_curve_raw(frame, p.f, p.g).coeffs, raw_q = poncelet_curve_raw(frame, f2, g2).coeffs;
      for (std::size_t k = 0; k < raw_p.size(); ++k) ok = ok && raw_q[k] == det2 * raw_p[k];
      t.add(ok);
    }
  }
  return {invertible == 6 && t.all(), std::to_string(invertible) + "/6 maps invertible, " + t.str() + " pencils agree"};
}

// 4. base points contribute their tangent lines.
Outcome base_point_factorization(std::uint64_t seed, Level level) {
  const int count = level == Level::full ? 50 : 12;
  Tally t;
  for (int n = 0; n < count; ++n) {
    auto rng = stream(seed, 4, n);
    const int m = 1 + n % 3;
    const int c = m + 1 + (n / 3) % 3;
    const auto frame = random_frame(rng);
    const auto bp = random_pencil_with_base_points(rng, c, m);
    auto lines = TernaryForm<Rational>::constant(Rational(1));
    for (const auto& r : bp.base_roots) lines = lines * TernaryForm<Rational>::linear(tangent_line(frame, ParamPoint<Rational>(r)).coords());
    const auto expected = lines * poncelet_curve(frame, bp.residual).form;
    t.add(canon(expected.coeffs) == poncelet_curve(frame, bp.pencil).coeffs());
  }
  return {t.all(), t.str() + " factorizations exact"};
}

// 5. composing a pencil with outer forms yields a curve divisible by the inner one.
Outcome divisibility(std::uint64_t seed, Level level) {
  const int count = level == Level::full ? 50 : 12;
  const std::array<std::pair<int, int>, 3> shapes{{{2, 2}, {2, 3}, {3, 2}}};
  Tally t;
  for (int n = 0; n < count; ++n) {
    auto rng = stream(seed, 5, n);
    const auto [inner_degree, k] = shapes[n % 3];
    const auto frame = random_frame(rng);
    const auto inner = random_base_free_pencil(rng, inner_degree - 1);
    BinaryForm<Rational> h1 = random_binary_form(rng, k, 3), h2 = random_binary_form(rng, k, 3);
    while (!Pencil<Rational>::independent(h1, h2)) h2 = random_binary_form(rng, k, 3);
    const auto outer = compose_pencil(inner, h1, h2);
    t.add(divide_ternary(poncelet_curve(frame, outer).form, poncelet_curve(frame, inner).form).has_value());
  }
  return {t.all(), t.str() + " composed curves divisible"};
}

PlaneCurve<double> perturbed(PlaneCurve<double> curve, std::mt19937_64& rng, double relative) {
  double scale = 0;
  for (double x : curve.form.coeffs) scale = std::max(scale, std::fabs(x));
  std::normal_distribution<double> g;
  for (double& x : curve.form.coeffs) x += relative * scale * g(rng);
  return curve;
}

// 6. Darboux closure on quintics, none on perturbed controls.
Outcome darboux_closure(std::uint64_t seed, Level level) {
  const int curves = level == Level::full ? 10 : 3;
  const int starts = level == Level::full ? 10 : 5;
  Tally closed, control_open;
  double worst = 0;
  for (int n = 0; n < curves; ++n) {
    auto rng = stream(seed, 6, n);
    const auto frame = random_conditioned_frame(rng, 10.0);
    const auto fd = convert_frame<double>(frame);
    const auto curve = convert_curve<double>(poncelet_curve(frame, random_base_free_pencil(rng, 5)));
    const auto control = perturbed(curve, rng, 1e-3);
    std::normal_distribution<double> g;
    for (int s = 0; s < starts; ++s) {
      const ParamPoint<Complex> t0(Complex(g(rng), g(rng)));
      const auto r = closure_traverse(fd, curve, t0, 1e-8);
      closed.add(r.closed && r.polygon_size == 6 && r.max_vertex_residual < 1e-8);
      if (r.closed) worst = std::max(worst, r.max_vertex_residual);
      control_open.add(!closure_traverse(fd, control, t0, 1e-8).closed);
    }
  }
  std::ostringstream d;
  d << closed.str() << " closed (worst residual " << worst << "), " << (control_open.total - control_open.pass) << "/"
    << control_open.total << " controls closed";
  return {closed.all() && control_open.all(), d.str()};
}

// 7. the jumping curve is Poncelet for the dual conic.
Outcome duality(std::uint64_t seed, Level level) {
  const int per_c = level == Level::full ? 20 : 4;
  Tally t;
  for (int c : {3, 5, 7})
    for (int n = 0; n < per_c; ++n) {
      auto rng = stream(seed, 7, c * 1000 + n);
      const auto frame = random_frame(rng);
      const auto v = duality_check(frame, random_pencil(rng, c));
      t.add(v.is_poncelet && v.rank == 2);
    }
  return {t.all(), t.str() + " dual verdicts rank 2"};
}

// 8. a generic quintic determines its conic.
Outcome injectivity(std::uint64_t seed, Level level) {
  const int curves = level == Level::full ? 25 : 1;
  RecoveryOptions opt;
  opt.starts = 100;
  opt.seed = seed;
  Tally t;
  int hits = 0;
  for (int n = 0; n < curves; ++n) {
    auto rng = stream(seed, 8, n);
    const auto frame = random_conditioned_frame(rng, 10.0);
    const auto curve = convert_curve<double>(poncelet_curve(frame, random_base_free_pencil(rng, 5)));
    auto result = recover_conics(curve, opt);
    match_target(result, conic_vector(frame));
    const bool ok = result.target_matched.value_or(false) && result.candidates.front().residual < 1e-8;
    if (ok) hits += result.candidates.front().basin_count;
    t.add(ok);
  }
  return {t.all(), t.str() + " unique recoveries (" + std::to_string(hits) + " converging starts)"};
}

// 9. small degree curves have many conics.
Outcome non_injectivity(std::uint64_t seed, Level level) {
  RecoveryOptions opt;
  opt.starts = level == Level::full ? 100 : 40;
  opt.seed = seed;
  auto quadric = TernaryForm<double>::zero(2);
  quadric.at(0, 2) = 4;
  quadric.at(1, 0) = -1;
  auto cubic = TernaryForm<double>::zero(3);
  cubic.at(0, 3) = 2;
  cubic.at(1, 1) = -1;
  auto count = [&](const TernaryForm<double>& f) {
    const auto r = recover_conics(PlaneCurve<double>(f, Chart::primal), opt);
    return static_cast<int>(std::count_if(r.candidates.begin(), r.candidates.end(), [](const Candidate& c) { return c.residual < 1e-8; }));
  };
  const int n2 = count(quadric), n3 = count(cubic);
  return {n2 >= 5 && n3 >= 2, std::to_string(n2) + " conics for 4y^2-xz, " + std::to_string(n3) + " for 2y^3-xyz"};
}

// 10. the tangent space at a base-point-free pencil has dimension 2c.
Outcome dimension(std::uint64_t seed, Level level) {
  const int per_c = level == Level::full ? 20 : 3;
  Tally t;
  for (int c = 2; c <= 7; ++c)
    for (int n = 0; n < per_c; ++n) {
      auto rng = stream(seed, 10, c * 1000 + n);
      const auto frame = random_frame(rng);
      t.add(tangent_space_rank(frame, random_base_free_pencil(rng, c)) == 2 * c);
    }
  return {t.all(), t.str() + " ranks equal 2c"};
}

// 11. products of common tangents are Poncelet for both conics.
Outcome probe(std::uint64_t seed, Level level) {
  const int pairs = level == Level::full ? 5 : 2;
  Tally t;
  std::ostringstream dims;
  for (int n = 0; n < pairs; ++n) {
    auto rng = stream(seed, 11, n);
    const auto [s, s2] = random_tangent_sharing_pair(rng);
    const auto report = intersection_probe_exact(s, s2, 5, seed + n, 3);
    bool ok = report.sample_count > 0;
    for (const auto& sample : report.samples) ok = ok && sample.member_first && sample.member_second;
    t.add(ok);
    dims << (n ? " " : "") << "[";
    for (std::size_t k = 0; k < report.ranks.size(); ++k) dims << (k ? "," : "") << report.ranks[k];
    dims << "]";
  }
  return {t.all(), t.str() + " pairs with both memberships; intersection dims " + dims.str()};
}

struct Check {
  const char* name;
  std::function<Outcome(std::uint64_t, Level)> run;
  double budget;  ///< seconds, enforced at full level; 0 = none
};

const std::array<Check, kCriterionCount>& criteria() {
  static const std::array<Check, kCriterionCount> table{{
      {"round-trip exactness", round_trip, 60},
      {"vertex vanishing", vertex_vanishing, 0},
      {"Plucker identification", plucker_identification, 0},
      {"base-point factorization", base_point_factorization, 0},
      {"divisibility", divisibility, 0},
      {"Darboux closure", darboux_closure, 120},
      {"duality", duality, 60},
      {"injectivity", injectivity, 300},
      {"non-injectivity for small degree", non_injectivity, 120},
      {"tangent space dimension", dimension, 0},
      {"intersection probe", probe, 0},
  }};
  return table;
}

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed, Level level) {
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("no criterion " + std::to_string(id));
  const auto& check = criteria()[id - 1];
  CriterionResult out;
  out.id = id;
  out.name = check.name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto o = check.run(seed, level);
    out.passed = o.passed;
    out.detail = o.detail;
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail = std::string("exception: ") + e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (level == Level::full && check.budget > 0 && out.seconds > check.budget) {
    out.passed = false;
    out.detail += " (over the " + std::to_string(static_cast<int>(check.budget)) + " s budget)";
  }
  return out;
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed, Level level, const std::vector<int>& ids) {
  std::vector<int> which = ids;
  if (which.empty())
    for (int i = 1; i <= kCriterionCount; ++i) which.push_back(i);
  std::vector<CriterionResult> out;
  for (int id : which) out.push_back(run_criterion(id, seed, level));
  return out;
}

}  // namespace poncelet
