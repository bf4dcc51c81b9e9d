#include "poncelet/scene.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace poncelet {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw SceneError(path + ": " + what); }

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!ok.count(key)) fail(path, "unknown field '" + key + "'");
  for (const char* key : allowed)
    if (!obj.contains(key)) fail(path, "missing field '" + std::string(key) + "'");
}

Scalar read_scalar(const json& v, Mode mode, const std::string& path) {
  if (mode == Mode::exact) {
    if (!v.is_string()) fail(path, "expected a rational string");
    try {
      return Scalar::parse(v.get<std::string>(), Mode::exact);
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "non-finite number");
  return Scalar(x);
}

json write_scalar(const Scalar& s) {
  if (s.mode() == Mode::exact) return s.exact().get_str();
  return s.floating();
}

Chart read_chart(const json& v, const std::string& path) {
  if (v == "primal") return Chart::primal;
  if (v == "dual") return Chart::dual;
  fail(path, "chart must be \"primal\" or \"dual\"");
}

int read_int(const json& v, const std::string& path, int lo, int hi) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  const auto x = v.get<long long>();
  if (x < lo || x > hi) fail(path, "out of range");
  return static_cast<int>(x);
}

std::vector<Scalar> read_vector(const json& v, Mode mode, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(read_scalar(v[i], mode, path + "[" + std::to_string(i) + "]"));
  return out;
}

std::array<int, 3> read_exponents(const std::string& key, int degree, const std::string& path) {
  std::array<int, 3> e{};
  std::istringstream in(key);
  char c1 = 0, c2 = 0;
  if (!(in >> e[0] >> c1 >> e[1] >> c2 >> e[2]) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof())
    fail(path, "monomial key '" + key + "' is not \"i,j,k\"");
  if (e[0] < 0 || e[1] < 0 || e[2] < 0 || e[0] + e[1] + e[2] != degree)
    fail(path, "monomial key '" + key + "' does not have degree " + std::to_string(degree));
  return e;
}

bool all_zero(const std::vector<Scalar>& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.to_double() == 0.0 && (s.mode() == Mode::floating || sgn(s.exact()) == 0); });
}

}  // namespace

const SceneConic& SceneDoc::conic(const std::string& name) const {
  auto it = conics.find(name);
  if (it == conics.end()) throw SceneError("conics: no conic named '" + name + "'");
  return it->second;
}

const ScenePencil& SceneDoc::pencil(const std::string& name) const {
  auto it = pencils.find(name);
  if (it == pencils.end()) throw SceneError("pencils: no pencil named '" + name + "'");
  return it->second;
}

const SceneCurve& SceneDoc::curve(const std::string& name) const {
  auto it = curves.find(name);
  if (it == curves.end()) throw SceneError("curves: no curve named '" + name + "'");
  return it->second;
}

SceneDoc parse_scene(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SceneError(std::string("scene: malformed JSON: ") + e.what());
  }
  only_keys(root, "scene", {"version", "mode", "conics", "pencils", "curves"});
  SceneDoc doc;
  if (!root["version"].is_string() || root["version"] != kSceneVersion)
    fail("version", "unsupported scene version (expected \"" + std::string(kSceneVersion) + "\")");
  if (root["mode"] == "exact")
    doc.mode = Mode::exact;
  else if (root["mode"] == "float")
    doc.mode = Mode::floating;
  else
    fail("mode", "must be \"exact\" or \"float\"");

  if (!root["conics"].is_object()) fail("conics", "expected an object");
  for (const auto& [name, c] : root["conics"].items()) {
    const std::string path = "conics." + name;
    only_keys(c, path, {"T", "chart"});
    const json& t = c["T"];
    if (!t.is_array() || t.size() != 3) fail(path + ".T", "expected a 3x3 array");
    SceneConic conic;
    for (int i = 0; i < 3; ++i) {
      const auto row = read_vector(t[i], doc.mode, path + ".T[" + std::to_string(i) + "]");
      if (row.size() != 3) fail(path + ".T[" + std::to_string(i) + "]", "expected 3 entries");
      for (int j = 0; j < 3; ++j) conic.t[i][j] = row[j];
    }
    conic.chart = read_chart(c["chart"], path + ".chart");
    doc.conics[name] = conic;
  }

  if (!root["pencils"].is_object()) fail("pencils", "expected an object");
  for (const auto& [name, p] : root["pencils"].items()) {
    const std::string path = "pencils." + name;
    only_keys(p, path, {"c", "f", "g"});
    ScenePencil pencil;
    pencil.c = read_int(p["c"], path + ".c", 1, 64);
    pencil.f = read_vector(p["f"], doc.mode, path + ".f");
    pencil.g = read_vector(p["g"], doc.mode, path + ".g");
    for (const auto& [field, v] : {std::pair{"f", &pencil.f}, std::pair{"g", &pencil.g}}) {
      if (static_cast<int>(v->size()) != pencil.c + 2) fail(path + "." + field, "expected c+2 coefficients");
      if (all_zero(*v)) fail(path + "." + field, "zero form");
    }
    doc.pencils[name] = std::move(pencil);
  }

  if (!root["curves"].is_object()) fail("curves", "expected an object");
  for (const auto& [name, c] : root["curves"].items()) {
    const std::string path = "curves." + name;
    only_keys(c, path, {"degree", "chart", "coeffs"});
    SceneCurve curve;
    curve.degree = read_int(c["degree"], path + ".degree", 0, 64);
    curve.chart = read_chart(c["chart"], path + ".chart");
    if (!c["coeffs"].is_object()) fail(path + ".coeffs", "expected an object");
    bool nonzero = false;
    for (const auto& [key, v] : c["coeffs"].items()) {
      const std::string vpath = path + ".coeffs." + key;
      const auto e = read_exponents(key, curve.degree, vpath);
      const Scalar s = read_scalar(v, doc.mode, vpath);
      if (s.to_double() != 0.0 || (s.mode() == Mode::exact && sgn(s.exact()) != 0)) nonzero = true;
      curve.coeffs[e] = s;
    }
    if (!nonzero) fail(path + ".coeffs", "all coefficients are zero");
    doc.curves[name] = std::move(curve);
  }
  return doc;
}

std::string dump_scene(const SceneDoc& doc) {
  json root = json::object();
  root["version"] = doc.version;
  root["mode"] = to_string(doc.mode);
  root["conics"] = json::object();
  root["pencils"] = json::object();
  root["curves"] = json::object();
  for (const auto& [name, c] : doc.conics) {
    json t = json::array();
    for (const auto& row : c.t) {
      json r = json::array();
      for (const auto& x : row) r.push_back(write_scalar(x));
      t.push_back(r);
    }
    root["conics"][name] = {{"T", t}, {"chart", to_string(c.chart)}};
  }
  for (const auto& [name, p] : doc.pencils) {
    json f = json::array(), g = json::array();
    for (const auto& x : p.f) f.push_back(write_scalar(x));
    for (const auto& x : p.g) g.push_back(write_scalar(x));
    root["pencils"][name] = {{"c", p.c}, {"f", f}, {"g", g}};
  }
  for (const auto& [name, c] : doc.curves) {
    json coeffs = json::object();
    for (const auto& [e, x] : c.coeffs)
      coeffs[std::to_string(e[0]) + "," + std::to_string(e[1]) + "," + std::to_string(e[2])] = write_scalar(x);
    root["curves"][name] = {{"degree", c.degree}, {"chart", to_string(c.chart)}, {"coeffs", coeffs}};
  }
  return root.dump(2) + "\n";
}

SceneDoc load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SceneError(path + ": cannot open scene file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

void save_scene(const SceneDoc& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write scene file");
  out << dump_scene(doc);
}

}  // namespace poncelet
