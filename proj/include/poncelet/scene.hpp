#pragma once

// Scene documents: named conics, pencils and curves in one JSON file.
//
//   {"version": "1", "mode": "exact",
//    "conics":  {"S": {"T": [["1","0","0"],["0","1","0"],["0","0","1"]], "chart": "primal"}},
//    "pencils": {"P": {"c": 2, "f": ["0","0","0","1"], "g": ["1","0","0","0"]}},
//    "curves":  {"C": {"degree": 2, "chart": "primal", "coeffs": {"0,2,0": "4", "1,0,1": "-1"}}}}
//
// Exact scenes carry every number as a rational string, float scenes as JSON
// numbers. Binary forms list coefficients of u^0 v^n, u^1 v^(n-1), ...;
// curve keys are exponent triples "i,j,k" of x^i y^j z^k. Parsing is strict:
// unknown or missing fields are errors naming the offending path.

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "poncelet/construction.hpp"

namespace poncelet {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSceneVersion = "1";

class SceneError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SceneConic {
  std::array<std::array<Scalar, 3>, 3> t;
  Chart chart = Chart::primal;
};

struct ScenePencil {
  int c = 0;
  std::vector<Scalar> f, g;
};

struct SceneCurve {
  int degree = 0;
  Chart chart = Chart::primal;
  std::map<std::array<int, 3>, Scalar> coeffs;  // zero terms omitted
};

struct SceneDoc {
  std::string version = kSceneVersion;
  Mode mode = Mode::exact;
  std::map<std::string, SceneConic> conics;
  std::map<std::string, ScenePencil> pencils;
  std::map<std::string, SceneCurve> curves;

  const SceneConic& conic(const std::string& name) const;
  const ScenePencil& pencil(const std::string& name) const;
  const SceneCurve& curve(const std::string& name) const;
};

SceneDoc parse_scene(std::string_view json_text);
std::string dump_scene(const SceneDoc& doc);

SceneDoc load_scene(const std::string& path);
void save_scene(const SceneDoc& doc, const std::string& path);

namespace detail {

template <Field K>
K scene_value(const Scalar& s) {
  if constexpr (is_exact_v<K>) {
    return s.exact();
  } else {
    return K(s.to_double());
  }
}

template <Field K>
Scalar scene_scalar(const K& x) {
  if constexpr (is_exact_v<K>) {
    return Scalar(x);
  } else {
    return Scalar(static_cast<double>(x));
  }
}

}  // namespace detail

// Float instantiations accept exact scenes (values are rounded); exact ones
// require an exact scene.
template <Field K>
ConicFrame<K> to_frame(const SceneConic& c) {
  Mat3<K> t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = detail::scene_value<K>(c.t[i][j]);
  return ConicFrame<K>(t, c.chart);
}

template <Field K>
Pencil<K> to_pencil(const ScenePencil& p) {
  std::vector<K> f, g;
  for (const auto& s : p.f) f.push_back(detail::scene_value<K>(s));
  for (const auto& s : p.g) g.push_back(detail::scene_value<K>(s));
  return Pencil<K>(BinaryForm<K>(std::move(f)), BinaryForm<K>(std::move(g)));
}

template <Field K>
PlaneCurve<K> to_curve(const SceneCurve& c) {
  TernaryForm<K> form = TernaryForm<K>::zero(c.degree);
  for (const auto& [e, s] : c.coeffs) form.at(e[0], e[1]) = detail::scene_value<K>(s);
  return PlaneCurve<K>(std::move(form), c.chart);
}

template <Field K>
SceneCurve from_curve(const PlaneCurve<K>& curve) {
  SceneCurve out;
  out.degree = curve.degree();
  out.chart = curve.chart;
  for (const auto& e : ternary_monomials(curve.degree())) {
    const K& x = curve.form.at(e.i, e.j);
    if (!is_zero(x)) out.coeffs[{e.i, e.j, e.k}] = detail::scene_scalar(x);
  }
  return out;
}

template <Field K>
SceneConic from_frame(const ConicFrame<K>& frame) {
  SceneConic out;
  out.chart = frame.chart();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.t[i][j] = detail::scene_scalar(frame.transform()[i][j]);
  return out;
}

template <Field K>
ScenePencil from_pencil(const Pencil<K>& p) {
  ScenePencil out;
  out.c = p.c;
  for (const auto& x : p.f.coeffs) out.f.push_back(detail::scene_scalar(x));
  for (const auto& x : p.g.coeffs) out.g.push_back(detail::scene_scalar(x));
  return out;
}

}  // namespace poncelet
