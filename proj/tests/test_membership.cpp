#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "poncelet/membership.hpp"
#include "poncelet/random.hpp"

using namespace poncelet;
using namespace testing;

namespace {

std::vector<Rational> flat(const SymBiForm<Rational>& g) {
  std::vector<Rational> v;
  for (int i = 0; i <= g.c; ++i)
    for (int j = 0; j <= g.c; ++j) v.push_back(g.b(i, j));
  return v;
}

SymBiForm<Rational> biform(int c, std::initializer_list<std::tuple<int, int, long>> entries) {
  SymBiForm<Rational> g(c);
  for (auto [i, j, x] : entries) g.b(i, j) = x;
  return g;
}

Rational pfaffian4(const DenseMatrix<Rational>& m) { return m(0, 1) * m(2, 3) - m(0, 2) * m(1, 3) + m(0, 3) * m(1, 2); }

PlaneCurve<Rational> line_pair(const Vec3<Rational>& a, const Vec3<Rational>& b) {
  return PlaneCurve<Rational>(TernaryForm<Rational>::linear(a) * TernaryForm<Rational>::linear(b), Chart::primal);
}

Vec3<Rational> random_vec(std::mt19937_64& rng) {
  Vec3<Rational> v;
  do {
    for (auto& x : v) x = random_rational(rng, 9, 4);
  } while (v[0] == 0 && v[1] == 0 && v[2] == 0);
  return v;
}

// min |a/|a| -+ b/|b||
double projective_gap(std::vector<double> a, std::vector<double> b) {
  double na = 0, nb = 0;
  for (double x : a) na += x * x;
  for (double x : b) nb += x * x;
  double dm = 0, dp = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double x = a[k] / std::sqrt(na), y = b[k] / std::sqrt(nb);
    dm += (x - y) * (x - y);
    dp += (x + y) * (x + y);
  }
  return std::sqrt(std::min(dm, dp));
}

bool is_tangent(const ConicFrame<Rational>& frame, const Vec3<Rational>& l) {
  return discriminant(restrict_line(frame, ProjVec<Rational>(l, VecKind::line))) == 0;
}

}  // namespace

TEST_CASE("pullback_biform examples") {
  const auto id = identity_frame();
  // xz - y^2 pulls back to -(u1 v2 - u2 v1)^2
  CHECK(proportional(flat(pullback_biform(id, curve({{1, 0, 1, 1}, {0, 2, 0, -1}}))), flat(biform(2, {{2, 0, -1}, {0, 2, -1}, {1, 1, 2}}))));
  // 4y^2 - xz pulls back to p^2 - q r
  CHECK(proportional(flat(pullback_biform(id, curve({{0, 2, 0, 4}, {1, 0, 1, -1}}))), flat(biform(2, {{2, 0, 1}, {0, 2, 1}, {1, 1, 1}}))));
  CHECK(flat(pullback_biform(id, curve({{0, 1, 0, 1}}))) == flat(biform(1, {{1, 0, 1}, {0, 1, 1}})));

  // independent check: G(t1, t2) = C(tangent_meet(t1, t2)) at sample parameters
  std::mt19937_64 rng(3);
  for (int n = 0; n < 10; ++n) {
    const auto frame = random_frame(rng);
    const int c = 1 + n % 5;
    auto cv = poncelet_curve(frame, random_pencil(rng, c));
    cv.form.at(c, 0) += 1;  // leave the Poncelet locus
    const auto g = pullback_biform(frame, cv);
    const ParamPoint<Rational> t1(random_rational(rng, 6, 5)), t2(random_rational(rng, 6, 5));
    Rational lhs = 0;
    for (int i = 0; i <= c; ++i)
      for (int j = 0; j <= c; ++j) {
        Rational term = g.b(i, j);
        for (int k = 0; k < i; ++k) term *= t1.u();
        for (int k = 0; k < j; ++k) term *= t2.u();
        lhs += term;
      }
    CHECK(lhs == cv(tangent_meet_coords(frame, t1.u(), t1.v(), t2.u(), t2.v())));
  }
}

TEST_CASE("antisym_matrix") {
  const auto m1 = antisym_matrix(biform(1, {{1, 0, 1}, {0, 1, 1}}));
  CHECK(m1.rows() == 3);
  CHECK(exact_rank(m1) == 2);
  // (u1 v2 - u2 v1)(u1 v2 + u2 v1) = u1^2 v2^2 - u2^2 v1^2
  CHECK(m1(2, 0) == 1);
  CHECK(m1(0, 2) == -1);
  CHECK(m1(1, 1) == 0);
  CHECK(m1(0, 1) == 0);
  CHECK(m1(1, 2) == 0);

  const auto g = bezout_form(Pencil<Rational>(mono(3, 3), mono(3, 0)));
  const auto m = antisym_matrix(g);
  CHECK(exact_rank(m) == 2);
  // M = f g^T - g f^T, so its columns lie in span(f, g)
  DenseMatrix<Rational> aug(4, 6);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) aug(i, j) = m(i, j);
    aug(i, 4) = mono(3, 3).coeffs[i];
    aug(i, 5) = mono(3, 0).coeffs[i];
  }
  CHECK(exact_rank(aug) == 2);

  std::mt19937_64 rng(5);
  for (int n = 0; n < 20; ++n) {
    const auto p = random_pencil(rng, 1 + n % 6);
    const auto mm = antisym_matrix(bezout_form(p));
    for (std::size_t i = 0; i < mm.rows(); ++i)
      for (std::size_t j = 0; j < mm.cols(); ++j) {
        CHECK(mm(i, j) == -mm(j, i));
        CHECK(mm(i, j) == p.f.coeffs[i] * p.g.coeffs[j] - p.g.coeffs[i] * p.f.coeffs[j]);
      }
  }

  // random quintics are far from rank 2
  int far = 0;
  for (int n = 0; n < 50; ++n) {
    std::vector<Rational> coeffs(ternary_size(5));
    for (auto& x : coeffs) x = random_rational(rng, 10);
    const PlaneCurve<Rational> cv(TernaryForm<Rational>(5, coeffs), Chart::primal);
    const auto mm = antisym_matrix(pullback_biform(identity_frame(), cv));
    CHECK(exact_rank(mm) > 2);
    const auto cd = convert_curve<double>(cv);
    const auto sv = membership_singular_values(antisym_matrix(pullback_biform(ConicFrame<double>::identity(), cd)));
    if (sv(2) / sv(0) > 1e-3) ++far;
  }
  CHECK(far >= 48);
}

TEST_CASE("is_poncelet examples") {
  const auto id = identity_frame();
  const auto v = is_poncelet(id, curve({{0, 2, 0, 4}, {1, 0, 1, -1}}));
  CHECK(v.is_poncelet);
  CHECK(v.rank == 2);
  REQUIRE(v.pencil);
  CHECK(canonical_plucker(*v.pencil) == canonical_plucker(Pencil<Rational>(mono(3, 3), mono(3, 0))));

  // The conic itself: its pullback -(u1 v2 - u2 v1)^2 is nonzero, so M is the
  // coefficient matrix of -(u1 v2 - u2 v1)^3, an anti-diagonal of rank 4.
  const auto own = is_poncelet(id, curve({{1, 0, 1, 1}, {0, 2, 0, -1}}));
  CHECK_FALSE(own.is_poncelet);
  CHECK(own.rank == 4);
  CHECK(own.reason.empty());

  const auto fermat = is_poncelet(id, curve({{3, 0, 0, 1}, {0, 3, 0, 1}, {0, 0, 3, 1}}));
  CHECK_FALSE(fermat.is_poncelet);
  CHECK(fermat.rank > 2);
  CHECK(fermat.residual > 0);

  // float mode agrees
  const auto vf = is_poncelet(ConicFrame<double>::identity(), convert_curve<double>(curve({{0, 2, 0, 4}, {1, 0, 1, -1}})));
  CHECK(vf.is_poncelet);
  CHECK(vf.residual < 1e-14);
  const auto df = is_poncelet(ConicFrame<double>::identity(), convert_curve<double>(curve({{1, 0, 1, 1}, {0, 2, 0, -1}})));
  CHECK_FALSE(df.is_poncelet);
  CHECK(df.residual == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("round trip recovers the pencil") {
  std::mt19937_64 rng(7);
  for (int c = 1; c <= 8; ++c)
    for (int n = 0; n < 8; ++n) {
      const auto frame = random_frame(rng);
      const auto p = random_pencil(rng, c);
      const auto cv = poncelet_curve(frame, p);
      const auto v = is_poncelet(frame, cv);
      CHECK(v.is_poncelet);
      CHECK(v.rank == 2);
      REQUIRE(v.pencil);
      CHECK(canonical_plucker(*v.pencil) == canonical_plucker(p));
      CHECK(poncelet_curve(frame, *v.pencil) == cv);

      // rescaling C leaves the verdict and the pencil's span unchanged
      PlaneCurve<Rational> scaled = cv;
      for (auto& x : scaled.form.coeffs) x *= Q("-7/3");
      const auto vs = is_poncelet(frame, scaled);
      CHECK(vs.is_poncelet);
      CHECK(canonical_plucker(*vs.pencil) == canonical_plucker(p));

      // float verdict and pencil
      const auto vf = is_poncelet(convert_frame<double>(frame), convert_curve<double>(cv));
      CHECK(vf.is_poncelet);
      REQUIRE(vf.pencil);
      CHECK(projective_gap(plucker_coords(*vf.pencil), plucker_coords(convert_pencil<double>(p))) < 1e-6);
    }
}

TEST_CASE("exact and float verdicts agree under noise") {
  // Noise reaches M amplified by roughly (2 cond(T))^c, so this runs on
  // well-conditioned frames at low degree.
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  for (int n = 0; n < 60; ++n) {
    const int c = 2 + n % 3;
    const auto fr = random_conditioned_frame(rng, 5.0);
    const auto cv = convert_curve<double>(poncelet_curve(fr, random_pencil(rng, c)));
    const auto frame = convert_frame<double>(fr);
    auto noisy = [&](double level) {
      PlaneCurve<double> out = cv;
      const double scale = max_magnitude(cv.coeffs());
      for (auto& x : out.form.coeffs) x += level * scale * gauss(rng);
      return out;
    };
    CHECK(is_poncelet(frame, noisy(1e-10), 1e-6).is_poncelet);
    CHECK_FALSE(is_poncelet(frame, noisy(1e-2), 1e-6).is_poncelet);
  }
}

TEST_CASE("singular Poncelet conics have a tangent component") {
  std::mt19937_64 rng(13);
  // Sampled line pairs: tangent-containing pairs pass, others fail.
  int poncelet = 0;
  for (int n = 0; n < 100; ++n) {
    const auto frame = random_frame(rng);
    Vec3<Rational> a = random_vec(rng);
    if (n % 2 == 0) a = tangent_line(frame, ParamPoint<Rational>(random_rational(rng, 9, 4))).coords();
    const Vec3<Rational> b = random_vec(rng);
    const auto v = is_poncelet(frame, line_pair(a, b));
    if (v.is_poncelet) {
      ++poncelet;
      CHECK((is_tangent(frame, a) || is_tangent(frame, b)));
    } else {
      CHECK_FALSE(is_tangent(frame, a));
      CHECK_FALSE(is_tangent(frame, b));
    }
  }
  CHECK(poncelet >= 50);

  // With l1 not tangent, the l2 making l1 l2 Poncelet are exactly the tangents:
  // along a pencil of lines l2 = a + s b, Pf(M) is proportional to the
  // restriction of the dual conic.
  for (int n = 0; n < 100; ++n) {
    const auto frame = random_frame(rng);
    const Vec3<Rational> l1 = random_vec(rng);
    if (is_tangent(frame, l1)) continue;
    const Vec3<Rational> a = random_vec(rng), b = random_vec(rng);
    const Mat3<Rational> dual = adjugate3(conic_matrix(frame));
    std::vector<Rational> pf, conic;
    for (long s : {0, 1, -1}) {
      Vec3<Rational> l2;
      for (int k = 0; k < 3; ++k) l2[k] = a[k] + Rational(s) * b[k];
      pf.push_back(pfaffian4(antisym_matrix(pullback_biform(frame, line_pair(l1, l2)))));
      conic.push_back(quadratic_form(dual, l2));
    }
    // values at s = 0, 1, -1 determine the quadratics
    auto coeffs = [](const std::vector<Rational>& v) {
      return std::vector<Rational>{v[0], (v[1] - v[2]) / 2, (v[1] + v[2]) / 2 - v[0]};
    };
    CHECK(proportional(coeffs(pf), coeffs(conic)));
  }
}

TEST_CASE("chart hygiene") {
  CHECK_THROWS(is_poncelet(identity_frame(), curve({{0, 1, 0, 1}}, Chart::dual)));
}
