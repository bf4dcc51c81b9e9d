#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <type_traits>

#include "contour.hpp"
#include "poncelet/acceptance.hpp"
#include "poncelet/closure.hpp"
#include "poncelet/duality.hpp"
#include "poncelet/membership.hpp"
#include "poncelet/random.hpp"
#include "poncelet/recovery.hpp"
#include "poncelet/scene.hpp"

namespace poncelet::cli {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

// Experiments that do not depend on a seed still record one, as null.
json meta(Mode mode, double tol, std::optional<std::uint64_t> seed = std::nullopt) {
  json m{{"version", kVersion}, {"mode", to_string(mode)}, {"tol", tol}};
  m["seed"] = seed ? json(*seed) : json(nullptr);
  return m;
}

json scalar_json(const Scalar& s) { return s.mode() == Mode::exact ? json(s.exact().get_str()) : json(s.floating()); }

json curve_json(const SceneCurve& c) {
  json coeffs = json::object();
  for (const auto& [e, x] : c.coeffs)
    coeffs[std::to_string(e[0]) + "," + std::to_string(e[1]) + "," + std::to_string(e[2])] = scalar_json(x);
  return {{"degree", c.degree}, {"chart", to_string(c.chart)}, {"coeffs", coeffs}};
}

json pencil_json(const ScenePencil& p) {
  json f = json::array(), g = json::array();
  for (const auto& x : p.f) f.push_back(scalar_json(x));
  for (const auto& x : p.g) g.push_back(scalar_json(x));
  return {{"c", p.c}, {"f", f}, {"g", g}};
}

template <Field K>
json verdict_json(const MembershipVerdict<K>& v) {
  json j{{"is_poncelet", v.is_poncelet}, {"rank", v.rank}, {"residual", v.residual}};
  if (v.pencil) j["pencil"] = pencil_json(from_pencil(*v.pencil));
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

json conic_json(const ConicVec& a) { return json(std::vector<double>(a.begin(), a.end())); }

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument(path + ": cannot write output file");
  f << text;
}

// Calls fn with a value of the scene's field type.
template <class Fn>
auto in_field(Mode mode, Fn&& fn) {
  if (mode == Mode::exact) return fn(Rational(0));
  return fn(0.0);
}

// --- commands ---------------------------------------------------------------

struct ConstructArgs {
  std::string scene, conic, pencil, name = "C", out;
};

int construct(const ConstructArgs& a, std::ostream& out) {
  SceneDoc doc = load_scene(a.scene);
  int degree = in_field(doc.mode, [&](auto zero) {
    using K = decltype(zero);
    const auto curve = poncelet_curve(to_frame<K>(doc.conic(a.conic)), to_pencil<K>(doc.pencil(a.pencil)));
    doc.curves[a.name] = from_curve(curve);
    return curve.degree();
  });
  const std::string target = a.out.empty() ? a.scene : a.out;
  if (target == "-")
    out << dump_scene(doc);
  else
    save_scene(doc, target);
  json report = meta(doc.mode, 0.0);
  report["command"] = "construct";
  report["curve"] = a.name;
  report["degree"] = degree;
  report["scene"] = target;
  if (target != "-") out << report.dump(2) << "\n";
  return ok;
}

struct CheckArgs {
  std::string scene, conic, curve;
  double tol = 1e-8;
};

int check(const CheckArgs& a, std::ostream& out) {
  const SceneDoc doc = load_scene(a.scene);
  json report = meta(doc.mode, a.tol);
  report["command"] = "check";
  const bool poncelet = in_field(doc.mode, [&](auto zero) {
    using K = decltype(zero);
    const auto v = is_poncelet(to_frame<K>(doc.conic(a.conic)), to_curve<K>(doc.curve(a.curve)), a.tol);
    report["verdict"] = verdict_json(v);
    return v.is_poncelet;
  });
  out << report.dump(2) << "\n";
  return poncelet ? ok : negative;
}

struct ClosureArgs {
  std::string scene, conic, curve, format = "json", out;
  int starts = 10;
  std::uint64_t seed = 1;
  double tol = 1e-8;
};

int closure(const ClosureArgs& a, std::ostream& out) {
  const SceneDoc doc = load_scene(a.scene);
  if (a.starts < 1) throw std::invalid_argument("--starts must be positive");
  const auto frame = in_field(doc.mode, [&](auto zero) { return convert_frame<double>(to_frame<decltype(zero)>(doc.conic(a.conic))); });
  const auto curve = in_field(doc.mode, [&](auto zero) { return convert_curve<double>(to_curve<decltype(zero)>(doc.curve(a.curve))); });

  std::vector<std::pair<Complex, ClosureReport>> runs;
  for (int k = 0; k < a.starts; ++k) {
    auto rng = indexed_rng(a.seed, static_cast<std::uint64_t>(k));
    std::normal_distribution<double> g;
    const Complex t0(g(rng), g(rng));
    runs.emplace_back(t0, closure_traverse(frame, curve, ParamPoint<Complex>(t0), a.tol));
  }
  int closed = 0;
  for (const auto& [t0, r] : runs) closed += r.closed;

  std::ostringstream text;
  if (a.format == "csv") {
    text << "start_re,start_im,closed,size,residual\n";
    char buf[160];
    for (const auto& [t0, r] : runs) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d,%.6e\n", t0.real(), t0.imag(), r.closed ? 1 : 0, r.polygon_size, r.max_vertex_residual);
      text << buf;
    }
  } else {
    json report = meta(Mode::floating, a.tol, a.seed);
    report["command"] = "closure";
    report["starts"] = a.starts;
    report["closed"] = closed;
    json rows = json::array();
    for (const auto& [t0, r] : runs)
      rows.push_back({{"start_re", t0.real()},
                      {"start_im", t0.imag()},
                      {"closed", r.closed},
                      {"size", r.polygon_size},
                      {"residual", r.max_vertex_residual},
                      {"iterations", r.iterations},
                      {"real_params", r.real_params},
                      {"diagnostic", r.diagnostic}});
    report["reports"] = rows;
    text << report.dump(2) << "\n";
  }
  emit(a.out, text.str(), out);
  return closed == a.starts ? ok : negative;
}

struct RecoverArgs {
  std::string scene, curve, target, csv, out;
  int starts = 100;
  std::uint64_t seed = 1;
  double tol = 1e-8;
};

int recover(const RecoverArgs& a, std::ostream& out) {
  const SceneDoc doc = load_scene(a.scene);
  const auto curve = in_field(doc.mode, [&](auto zero) { return convert_curve<double>(to_curve<decltype(zero)>(doc.curve(a.curve))); });
  RecoveryOptions opt;
  opt.starts = a.starts;
  opt.seed = a.seed;
  opt.tol = a.tol;
  auto result = recover_conics(curve, opt);
  if (!a.target.empty())
    match_target(result, in_field(doc.mode, [&](auto zero) { return conic_vector(to_frame<decltype(zero)>(doc.conic(a.target))); }));

  json report = meta(Mode::floating, a.tol, a.seed);
  report["command"] = "recover";
  report["starts"] = result.starts;
  report["basis"] = {"z^2", "yz", "y^2", "xz", "xy", "x^2"};
  json cands = json::array();
  for (const auto& c : result.candidates)
    cands.push_back({{"conic", conic_json(c.conic)}, {"residual", c.residual}, {"basin_count", c.basin_count}});
  report["candidates"] = cands;
  report["target_matched"] = result.target_matched ? json(*result.target_matched) : json(nullptr);
  emit(a.out, report.dump(2) + "\n", out);

  if (!a.csv.empty()) {
    std::ostringstream csv;
    csv << "cluster,z2,yz,y2,xz,xy,x2,residual,basin_count\n";
    char buf[64];
    for (std::size_t i = 0; i < result.candidates.size(); ++i) {
      const auto& c = result.candidates[i];
      csv << i;
      for (double x : c.conic) {
        std::snprintf(buf, sizeof buf, ",%.17g", x);
        csv << buf;
      }
      std::snprintf(buf, sizeof buf, ",%.6e,%d\n", c.residual, c.basin_count);
      csv << buf;
    }
    emit(a.csv, csv.str(), out);
  }
  return result.candidates.empty() ? negative : ok;
}

struct JumpingArgs {
  std::string scene, conic, pencil, name, out;
  double tol = 1e-8;
};

int jumping(const JumpingArgs& a, std::ostream& out) {
  SceneDoc doc = load_scene(a.scene);
  json report = meta(doc.mode, a.tol);
  report["command"] = "jumping";
  const bool poncelet = in_field(doc.mode, [&](auto zero) {
    using K = decltype(zero);
    const auto frame = to_frame<K>(doc.conic(a.conic));
    const auto pencil = to_pencil<K>(doc.pencil(a.pencil));
    const auto j = jumping_curve(frame, pencil);
    const auto v = duality_check(frame, pencil, a.tol);
    const SceneCurve sc = from_curve(j.curve);
    report["curve"] = curve_json(sc);
    report["even_degree"] = j.even_degree;
    report["verdict"] = verdict_json(v);
    if (!a.name.empty()) doc.curves[a.name] = sc;
    return v.is_poncelet;
  });
  if (!a.name.empty()) save_scene(doc, a.out.empty() ? a.scene : a.out);
  out << report.dump(2) << "\n";
  return poncelet ? ok : negative;
}

struct PlotArgs {
  std::string scene, window = "-3,-3,3,3", out;
  std::vector<std::string> names;
  int grid = 512;
};

int plot(const PlotArgs& a, std::ostream& out) {
  const SceneDoc doc = load_scene(a.scene);
  const Window w = parse_window(a.window);
  if (a.grid < 2 || a.grid > 4096) throw std::invalid_argument("--grid must be in [2, 4096]");
  std::vector<PlotLayer> layers;
  for (const auto& name : a.names) {
    PlotLayer layer;
    layer.name = name;
    std::function<double(double, double)> f;
    if (doc.conics.count(name)) {
      const auto frame = in_field(doc.mode, [&](auto zero) { return convert_frame<double>(to_frame<decltype(zero)>(doc.conic(name))); });
      const Mat3<double> m = conic_matrix(frame);
      f = [m](double x, double y) { return quadratic_form(m, Vec3<double>{x, y, 1.0}); };
      layer.note = std::string("conic, ") + to_string(frame.chart()) + " chart";
    } else if (doc.curves.count(name)) {
      const auto curve = in_field(doc.mode, [&](auto zero) { return convert_curve<double>(to_curve<decltype(zero)>(doc.curve(name))); });
      f = [curve](double x, double y) { return curve(Vec3<double>{x, y, 1.0}); };
      layer.note = "degree " + std::to_string(curve.degree()) + " curve, " + to_string(curve.chart) + " chart";
    } else {
      throw SceneError("no conic or curve named '" + name + "'");
    }
    layer.segments = contour(f, w, a.grid);
    layers.push_back(std::move(layer));
  }
  if (a.out.empty()) throw std::invalid_argument("--out is required");
  emit(a.out, render_svg(layers, w), out);
  return ok;
}

struct SelftestArgs {
  std::string level = "quick";
  std::uint64_t seed = 20240601;
};

int selftest(const SelftestArgs& a, std::ostream& out) {
  const Level level = a.level == "full" ? Level::full : Level::quick;
  out << "poncelet " << kVersion << " selftest level=" << a.level << " seed=" << a.seed << " mode=exact+float tol=1e-08\n";
  std::string canonical;  // timings excluded so the hash is reproducible
  bool all = true;
  for (const auto& r : run_acceptance(a.seed, level)) {
    char line[96];
    std::snprintf(line, sizeof line, "criterion %2d %s  %-34s ", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str());
    out << line << r.detail;
    std::snprintf(line, sizeof line, " [%.1f s]\n", r.seconds);
    out << line << std::flush;
    canonical += std::to_string(r.id) + (r.passed ? " pass " : " fail ") + r.detail + "\n";
    all = all && r.passed;
  }
  char hash[40];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(canonical)));
  out << "report hash " << hash << "\n" << (all ? "all criteria passed" : "some criteria FAILED") << "\n";
  return all ? ok : negative;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Poncelet curves: construction, membership, closure, recovery and duality."};
  app.name("poncelet");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ConstructArgs ca;
  auto* c_construct = app.add_subcommand("construct", "Build the Poncelet curve of a conic and a pencil into the scene");
  c_construct->add_option("scene", ca.scene, "Scene file")->required();
  c_construct->add_option("--conic", ca.conic, "Conic name")->required();
  c_construct->add_option("--pencil", ca.pencil, "Pencil name")->required();
  c_construct->add_option("--name", ca.name, "Name of the new curve")->capture_default_str();
  c_construct->add_option("--out", ca.out, "Write the scene here instead of in place ('-' for stdout)");

  CheckArgs ka;
  auto* c_check = app.add_subcommand("check", "Decide whether a curve is Poncelet for a conic");
  c_check->add_option("scene", ka.scene, "Scene file")->required();
  c_check->add_option("--conic", ka.conic, "Conic name")->required();
  c_check->add_option("--curve", ka.curve, "Curve name")->required();
  c_check->add_option("--tol", ka.tol, "Float-mode rank tolerance")->capture_default_str();

  ClosureArgs la;
  auto* c_closure = app.add_subcommand("closure", "Trace tangent polygons from random complex starts");
  c_closure->add_option("scene", la.scene, "Scene file")->required();
  c_closure->add_option("--conic", la.conic, "Conic name")->required();
  c_closure->add_option("--curve", la.curve, "Curve name")->required();
  c_closure->add_option("--starts", la.starts, "Number of starts")->capture_default_str();
  c_closure->add_option("--seed", la.seed, "Random seed")->capture_default_str();
  c_closure->add_option("--tol", la.tol, "Vertex residual tolerance")->capture_default_str();
  c_closure->add_option("--format", la.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  c_closure->add_option("--out", la.out, "Output file (default stdout)");

  RecoverArgs ra;
  auto* c_recover = app.add_subcommand("recover", "Search for the conics a curve is Poncelet for");
  c_recover->add_option("scene", ra.scene, "Scene file")->required();
  c_recover->add_option("--curve", ra.curve, "Curve name")->required();
  c_recover->add_option("--starts", ra.starts, "Number of starts")->capture_default_str()->check(CLI::PositiveNumber);
  c_recover->add_option("--seed", ra.seed, "Random seed")->capture_default_str();
  c_recover->add_option("--tol", ra.tol, "Residual acceptance threshold")->capture_default_str();
  c_recover->add_option("--target", ra.target, "Conic to compare the result against");
  c_recover->add_option("--csv", ra.csv, "Write the clusters as CSV here");
  c_recover->add_option("--out", ra.out, "JSON output file (default stdout)");

  JumpingArgs ja;
  auto* c_jumping = app.add_subcommand("jumping", "Jumping-line curve of a pencil and its duality verdict");
  c_jumping->add_option("scene", ja.scene, "Scene file")->required();
  c_jumping->add_option("--conic", ja.conic, "Conic name")->required();
  c_jumping->add_option("--pencil", ja.pencil, "Pencil name")->required();
  c_jumping->add_option("--tol", ja.tol, "Float-mode rank tolerance")->capture_default_str();
  c_jumping->add_option("--name", ja.name, "Also store the curve in the scene under this name");
  c_jumping->add_option("--out", ja.out, "Write the scene here instead of in place");

  PlotArgs pa;
  auto* c_plot = app.add_subcommand("plot", "Render real loci of conics and curves to SVG");
  c_plot->add_option("scene", pa.scene, "Scene file")->required();
  c_plot->add_option("names", pa.names, "Conic and curve names")->required();
  c_plot->add_option("--window", pa.window, "Affine window x0,y0,x1,y1")->capture_default_str();
  c_plot->add_option("--grid", pa.grid, "Grid cells per side")->capture_default_str();
  c_plot->add_option("--out", pa.out, "SVG file ('-' for stdout)")->required();

  SelftestArgs sa;
  auto* c_selftest = app.add_subcommand("selftest", "Run the property suites");
  c_selftest->add_option("--level", sa.level, "quick or full")->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
  c_selftest->add_option("--seed", sa.seed, "Random seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "poncelet: " << e.what() << "\n";
    return input_error;
  }

  try {
    if (c_construct->parsed()) return construct(ca, out);
    if (c_check->parsed()) return check(ka, out);
    if (c_closure->parsed()) return closure(la, out);
    if (c_recover->parsed()) return recover(ra, out);
    if (c_jumping->parsed()) return jumping(ja, out);
    if (c_plot->parsed()) return plot(pa, out);
    if (c_selftest->parsed()) return selftest(sa, out);
  } catch (const std::invalid_argument& e) {  // includes SceneError
    err << "poncelet: " << e.what() << "\n";
    return input_error;
  } catch (const std::out_of_range& e) {
    err << "poncelet: " << e.what() << "\n";
    return input_error;
  } catch (const std::exception& e) {
    err << "poncelet: numeric failure: " << e.what() << "\n";
    return numeric_failure;
  }
  return input_error;
}

}  // namespace poncelet::cli
