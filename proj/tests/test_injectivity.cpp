#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "poncelet/random.hpp"
#include "poncelet/recovery.hpp"

using namespace poncelet;
using namespace testing;

namespace {

PlaneCurve<double> float_curve(const ConicFrame<Rational>& frame, const Pencil<Rational>& pencil) {
  return convert_curve<double>(poncelet_curve(frame, pencil));
}

PlaneCurve<double> float_ternary(int d, std::vector<std::tuple<int, int, double>> terms) {
  auto f = TernaryForm<double>::zero(d);
  for (auto [i, j, v] : terms) f.at(i, j) = v;
  return PlaneCurve<double>(f, Chart::primal);
}

bool proportional_approx(const ProjVec<Complex>& a, const ProjVec<Complex>& b) {
  double cross = 0, na = 0, nb = 0;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    cross += std::norm(a[i] * b[j] - a[j] * b[i]);
    na += std::norm(a[i]);
    nb += std::norm(b[i]);
  }
  return cross <= 1e-18 * na * nb;
}

ConicVec scaled(ConicVec a, double s) {
  for (double& x : a) x *= s;
  return a;
}

}  // namespace

TEST_CASE("membership residual separates the source conic from random ones") {
  std::mt19937_64 rng(31);
  int separated = 0;
  const int draws = 200;
  for (int n = 0; n < draws; ++n) {
    const auto frame = random_conditioned_frame(rng, 10.0);
    const auto curve = float_curve(frame, random_base_free_pencil(rng, 5));
    const ConicVec target = conic_vector(frame);
    CHECK(membership_residual(target, curve) < 1e-10);
    CHECK(membership_residual(convert_frame<double>(frame), curve) < 1e-10);

    ConicVec other;
    std::normal_distribution<double> g;
    for (double& x : other) x = g(rng);
    if (membership_residual(other, curve) > 1e-3) ++separated;
  }
  CHECK(separated >= draws * 95 / 100);
}

TEST_CASE("membership residual is projective") {
  std::mt19937_64 rng(32);
  for (int n = 0; n < 10; ++n) {
    const auto frame = random_conditioned_frame(rng, 10.0);
    const auto curve = float_curve(frame, random_base_free_pencil(rng, 4));
    ConicVec a;
    std::normal_distribution<double> g;
    for (double& x : a) x = g(rng);
    const double r = membership_residual(a, curve);
    for (double s : {3.0, -0.25, 1e4}) CHECK(membership_residual(scaled(a, s), curve) == doctest::Approx(r).epsilon(1e-9));
  }
  // A degenerate conic is rejected with the sentinel.
  const auto curve = float_ternary(2, {{0, 2, 4.0}, {1, 0, -1.0}});
  CHECK(std::isinf(membership_residual(ConicVec{0, 0, 1, 0, 0, 0}, curve)));
}

TEST_CASE("frame_from_conic reproduces real conics") {
  std::mt19937_64 rng(33);
  for (int n = 0; n < 30; ++n) {
    const auto frame = random_frame(rng);
    const ConicVec a = conic_vector(frame);
    const auto f = frame_from_conic(a);
    REQUIRE(f.has_value());
    Mat3<double> re;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(std::fabs(f->transform()[i][j].imag()) < 1e-12);
        re[i][j] = f->transform()[i][j].real();
      }
    CHECK(projective_distance(conic_vector(ConicFrame<double>(re)), a) < 1e-9);
  }
  // A conic without real points gets a complex frame whose conic is still a.
  const auto f = frame_from_conic(ConicVec{1, 0, 1, 0, 0, 1});
  REQUIRE(f.has_value());
  const auto m = conic_matrix(*f);
  CHECK(std::abs(m[0][1]) < 1e-12 * std::abs(m[0][0]));
  CHECK(std::abs(m[0][0] - m[1][1]) < 1e-12 * std::abs(m[0][0]));
  CHECK(std::abs(m[0][0] - m[2][2]) < 1e-12 * std::abs(m[0][0]));
}

TEST_CASE("recovery finds the source conic of a quintic and nothing else") {
  std::mt19937_64 rng(34);
  for (int n = 0; n < 3; ++n) {
    const auto frame = random_conditioned_frame(rng, 10.0);
    const auto curve = float_curve(frame, random_base_free_pencil(rng, 5));
    RecoveryOptions opt;
    opt.seed = 11;
    auto result = recover_conics(curve, opt);
    match_target(result, conic_vector(frame));
    REQUIRE(result.target_matched.has_value());
    CHECK(*result.target_matched);
    for (const auto& c : result.candidates) {
      CHECK(c.residual < opt.tol);
      // soundness: the reported residual is the verified one
      CHECK(membership_residual(c.conic, curve) == doctest::Approx(c.residual).epsilon(1e-6));
      CHECK(c.basin_count >= 1);
    }
  }
}

TEST_CASE("recovery is deterministic in its seed") {
  std::mt19937_64 rng(35);
  const auto frame = random_conditioned_frame(rng, 10.0);
  const auto curve = float_curve(frame, random_base_free_pencil(rng, 5));
  RecoveryOptions opt;
  opt.starts = 12;
  opt.seed = 5;
  const auto a = recover_conics(curve, opt), b = recover_conics(curve, opt);
  REQUIRE(a.candidates.size() == b.candidates.size());
  for (std::size_t i = 0; i < a.candidates.size(); ++i) {
    CHECK(a.candidates[i].conic == b.candidates[i].conic);
    CHECK(a.candidates[i].residual == b.candidates[i].residual);
    CHECK(a.candidates[i].basin_count == b.candidates[i].basin_count);
  }
  CHECK(a.seed == 5);
  CHECK(a.starts == 12);
}

TEST_CASE("recovery on low degree curves returns many conics") {
  RecoveryOptions opt;
  opt.starts = 40;
  opt.seed = 3;
  const auto conic = recover_conics(float_ternary(2, {{0, 2, 4.0}, {1, 0, -1.0}}), opt);
  CHECK(conic.candidates.size() >= 5);
  const auto cubic = recover_conics(float_ternary(3, {{0, 3, 2.0}, {1, 1, -1.0}}), opt);
  CHECK(cubic.candidates.size() >= 2);
  for (const auto* r : {&conic, &cubic})
    for (std::size_t i = 0; i < r->candidates.size(); ++i) {
      CHECK(r->candidates[i].residual < opt.tol);
      if (i > 0) CHECK(r->candidates[i - 1].residual <= r->candidates[i].residual);
      for (std::size_t j = 0; j < i; ++j) CHECK(projective_distance(r->candidates[i].conic, r->candidates[j].conic) >= opt.cluster_radius);
    }
}

TEST_CASE("recovery on a non-Poncelet quintic is empty") {
  std::mt19937_64 rng(36);
  auto f = TernaryForm<double>::zero(5);
  std::normal_distribution<double> g;
  for (auto& x : f.coeffs) x = g(rng);
  RecoveryOptions opt;
  opt.starts = 20;
  CHECK(recover_conics(PlaneCurve<double>(f, Chart::primal), opt).candidates.empty());
  CHECK_THROWS(recover_conics(float_ternary(1, {{1, 0, 1.0}}), opt));
}

TEST_CASE("tangent space rank") {
  const auto id = identity_frame();
  CHECK(tangent_space_rank(id, Pencil<Rational>(mono(2, 2), mono(2, 0))) == 2);
  std::mt19937_64 rng(37);
  for (int c = 2; c <= 7; ++c)
    for (int n = 0; n < 3; ++n) {
      const auto frame = random_frame(rng);
      const auto pencil = random_base_free_pencil(rng, c);
      CHECK(tangent_space_rank(frame, pencil) == 2 * c);
      CHECK(tangent_space_rank(convert_frame<double>(frame), convert_pencil<double>(pencil)) == 2 * c);
    }
  for (int c = 3; c <= 6; ++c) {
    const auto bp = random_pencil_with_base_points(rng, c, 1 + c % 2);
    CHECK(tangent_space_rank(random_frame(rng), bp.pencil) <= 2 * c);
  }
}

TEST_CASE("common tangents of a conic and a shear of it") {
  const auto s = convert_frame<Complex>(ConicFrame<double>::identity());
  const auto s2 = convert_frame<Complex>(ConicFrame<double>(Mat3<double>{{{1, 0, 0}, {0, 1, 0}, {0, 1.0 / 3, 1}}}));
  const auto ct = common_tangents(s, s2);
  REQUIRE(ct.lines.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (const auto* frame : {&s, &s2}) {
      const auto abc = restrict_line(*frame, ct.lines[i]);
      const double scale = std::max({std::abs(abc[0]), std::abs(abc[1]), std::abs(abc[2])});
      CHECK(std::abs(discriminant(abc)) < 1e-9 * scale * scale);
    }
    for (std::size_t j = 0; j < i; ++j) CHECK(!proportional_approx(ct.lines[i], ct.lines[j]));
  }
  CHECK_THROWS(common_tangents(s, s));
}

TEST_CASE("tangent products are Poncelet for both conics") {
  std::mt19937_64 rng(38);
  for (int n = 0; n < 2; ++n) {
    const auto [s, s2] = random_tangent_sharing_pair(rng);
    const auto exact = intersection_probe_exact(s, s2, 5, 9, 4);
    CHECK(exact.sample_count == 4);
    CHECK(exact.expected == 5);
    for (const auto& sample : exact.samples) {
      CHECK(sample.member_first);
      CHECK(sample.member_second);
      CHECK(sample.lines.size() == 5);
      CHECK(sample.tangent_rank_first <= 10);
      CHECK(sample.intersection_dim >= 0);
    }
    const auto fl = intersection_probe(convert_frame<double>(s), convert_frame<double>(s2), 5, 9, 4);
    for (const auto& sample : fl.samples) {
      CHECK(sample.member_first);
      CHECK(sample.member_second);
    }
  }
}
