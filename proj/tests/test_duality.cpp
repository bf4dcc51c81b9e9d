#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "poncelet/closure.hpp"
#include "poncelet/duality.hpp"
#include "poncelet/random.hpp"

using namespace poncelet;
using namespace testing;

namespace {

std::vector<Rational> flat(const Mat3<Rational>& m) {
  std::vector<Rational> v;
  for (const auto& row : m)
    for (const auto& x : row) v.push_back(x);
  return v;
}

}  // namespace

TEST_CASE("dual_conic") {
  const auto d = dual_conic(identity_frame());
  CHECK(d.chart() == Chart::dual);
  CHECK(d.transform() == mat({{0, 0, 1}, {0, -2, 0}, {1, 0, 0}}));
  // lines (a : b : c) tangent to xz - y^2 satisfy b^2 - 4ac = 0
  Mat3<Rational> disc = mat({{0, 0, -2}, {0, 1, 0}, {-2, 0, 0}});
  CHECK(proportional(flat(conic_matrix(d)), flat(disc)));

  std::mt19937_64 rng(3);
  for (int n = 0; n < 10; ++n) {
    const auto frame = random_frame(rng);
    const auto dual = dual_conic(frame);
    for (int k = 0; k < 10; ++k) {
      const ParamPoint<Rational> t(random_rational(rng, 9, 4));
      CHECK(conic_point(dual, t).coords() == tangent_line(frame, t).coords());
    }
    CHECK(conic_point(dual, ParamPoint<Rational>::infinity()).coords() == tangent_line(frame, ParamPoint<Rational>::infinity()).coords());
    const auto twice = dual_conic(dual);
    CHECK(twice.chart() == Chart::primal);
    CHECK(proportional(flat(conic_matrix(twice)), flat(conic_matrix(frame))));
    // the dual conic matrix is the adjugate of the primal one, up to scale
    CHECK(proportional(flat(conic_matrix(dual)), flat(adjugate3(conic_matrix(frame)))));
  }
}

TEST_CASE("jumping_curve examples") {
  const auto id = identity_frame();
  const auto j1 = jumping_curve(id, Pencil<Rational>(mono(2, 2), mono(2, 0)));
  CHECK(j1.curve == curve({{0, 1, 0, 1}}, Chart::dual));  // -b, canonically b
  CHECK(j1.even_degree == false);
  const auto j2 = jumping_curve(id, Pencil<Rational>(mono(3, 3), mono(3, 0)));
  CHECK(j2.curve == curve({{0, 2, 0, 1}, {1, 0, 1, -1}}, Chart::dual));  // b^2 - ac
  CHECK(j2.even_degree);
}

TEST_CASE("chords of members are jumping lines") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 10; ++n) {
    const int c = 1 + n % 5;
    const auto frame = random_frame(rng);
    std::vector<Rational> r1, r2;
    auto fill = [&](std::vector<Rational>& r, const std::vector<Rational>& avoid) {
      while (static_cast<int>(r.size()) <= c) {
        Rational t = random_rational(rng, 12, 5);
        if (std::find(r.begin(), r.end(), t) == r.end() && std::find(avoid.begin(), avoid.end(), t) == avoid.end()) r.push_back(t);
      }
    };
    fill(r1, {});
    fill(r2, r1);
    const Pencil<Rational> p(form_with_roots(r1), form_with_roots(r2));
    const auto jc = jumping_curve(frame, p).curve;
    CHECK(jc.chart == Chart::dual);
    CHECK(jc.degree() == c);
    for (const auto* roots : {&r1, &r2})
      for (std::size_t i = 0; i < roots->size(); ++i)
        for (std::size_t j = i + 1; j < roots->size(); ++j) {
          const auto a = conic_point(frame, ParamPoint<Rational>((*roots)[i]));
          const auto b = conic_point(frame, ParamPoint<Rational>((*roots)[j]));
          CHECK(jc(cross(a.coords(), b.coords())) == 0);
        }
  }
}

TEST_CASE("duality_check") {
  const auto id = identity_frame();
  const auto v3 = duality_check(id, Pencil<Rational>(mono(3, 3), mono(3, 0)));
  CHECK(v3.is_poncelet);
  CHECK(v3.rank == 2);
  const auto v1 = duality_check(id, Pencil<Rational>(mono(2, 2), mono(2, 0)));
  CHECK(v1.is_poncelet);
  // b^2 - ac against the dual conic directly
  CHECK(is_poncelet(dual_conic(id), curve({{0, 2, 0, 1}, {1, 0, 1, -1}}, Chart::dual)).rank == 2);

  std::mt19937_64 rng(9);
  for (int c : {2, 3, 4, 5, 6, 7})
    for (int n = 0; n < 5; ++n) {
      const auto frame = random_frame(rng);
      const auto v = duality_check(frame, random_pencil(rng, c));
      CHECK(v.is_poncelet);
      CHECK(v.rank == 2);
    }
  // base points are fine too
  const auto bp = random_pencil_with_base_points(rng, 5, 2);
  CHECK(duality_check(random_frame(rng), bp.pencil).rank == 2);
}

TEST_CASE("chart hygiene for jumping curves") {
  const auto id = identity_frame();
  const auto jc = jumping_curve(id, Pencil<Rational>(mono(3, 3), mono(3, 0))).curve;
  CHECK_THROWS(is_poncelet(id, jc));
  // a dual frame produces a primal jumping curve
  const auto back = jumping_curve(dual_conic(id), Pencil<Rational>(mono(3, 3), mono(3, 0))).curve;
  CHECK(back.chart == Chart::primal);
}
