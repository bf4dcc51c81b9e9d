#include "poncelet/random.hpp"

#include <Eigen/Dense>

namespace poncelet {

Rational random_rational(std::mt19937_64& rng, int range, int max_den) {
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

BinaryForm<Rational> random_binary_form(std::mt19937_64& rng, int degree, int range) {
  std::vector<Rational> c(degree + 1);
  for (auto& x : c) x = random_rational(rng, range);
  return BinaryForm<Rational>(std::move(c));
}

Pencil<Rational> random_pencil(std::mt19937_64& rng, int c, int range) {
  for (;;) {
    auto f = random_binary_form(rng, c + 1, range);
    auto g = random_binary_form(rng, c + 1, range);
    if (Pencil<Rational>::independent(f, g)) return Pencil<Rational>(std::move(f), std::move(g));
  }
}

Pencil<Rational> random_base_free_pencil(std::mt19937_64& rng, int c, int range) {
  for (;;) {
    auto p = random_pencil(rng, c, range);
    if (gcd(p.f, p.g).degree() == 0) return p;
  }
}

ConicFrame<Rational> random_frame(std::mt19937_64& rng, int range, int max_den) {
  for (;;) {
    Mat3<Rational> t;
    for (auto& row : t)
      for (auto& x : row) x = random_rational(rng, range, max_den);
    if (sgn(det3(t)) != 0) return ConicFrame<Rational>(t);
  }
}

double conic_condition(const ConicFrame<Rational>& frame) {
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = frame.transform()[i][j].get_d();
  const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(t).singularValues();
  return sv(0) / sv(2);
}

ConicFrame<Rational> random_conditioned_frame(std::mt19937_64& rng, double max_condition, int range, int max_den) {
  for (;;) {
    auto frame = random_frame(rng, range, max_den);
    if (conic_condition(frame) <= max_condition) return frame;
  }
}

BinaryForm<Rational> form_with_roots(const std::vector<Rational>& roots) {
  BinaryForm<Rational> h(std::vector<Rational>{Rational(1)});
  for (const auto& r : roots) h = h * BinaryForm<Rational>::vanishing_at(r, Rational(1));
  return h;
}

BasePointPencil random_pencil_with_base_points(std::mt19937_64& rng, int c, int base_degree) {
  std::vector<Rational> roots;
  std::uniform_int_distribution<int> repeat(0, 2);
  for (int i = 0; i < base_degree; ++i) {
    if (i > 0 && repeat(rng) == 0)
      roots.push_back(roots.back());
    else
      roots.push_back(random_rational(rng, 4, 3));
  }
  const BinaryForm<Rational> h = form_with_roots(roots);
  // A base-point-free residual keeps gcd(f, g) equal to h.
  Pencil<Rational> residual = random_base_free_pencil(rng, c - base_degree);
  return {Pencil<Rational>(h * residual.f, h * residual.g), roots, residual};
}

std::mt19937_64 indexed_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace poncelet
