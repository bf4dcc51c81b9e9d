#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "contour.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using poncelet::cli::Exit;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "poncelet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = poncelet::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(PONCELET_FIXTURES) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// A scratch copy of a fixture, so commands may write into it.
fs::path scratch(const std::string& name) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / ("poncelet-cli-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path p = dir / (std::to_string(counter++) + "-" + name);
  fs::copy_file(fixture(name), p, fs::copy_options::overwrite_existing);
  return p;
}

void has_meta(const json& j, const std::string& mode) {
  CHECK(j.at("version") == "0.1.0");
  CHECK(j.at("mode") == mode);
  CHECK(j.contains("tol"));
  CHECK(j.contains("seed"));
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("construct writes C(u^3, v^3) = 4y^2 - xz into the scene") {
  const auto scene = scratch("basic.json");
  const auto r = cli({"construct", scene.string(), "--conic", "S", "--pencil", "P", "--name", "C"});
  REQUIRE(r.code == Exit::ok);
  has_meta(json::parse(r.out), "exact");
  const auto doc = json::parse(slurp(scene));
  CHECK(doc["curves"]["C"]["coeffs"] == json{{"0,2,0", "4"}, {"1,0,1", "-1"}});
  CHECK(doc["curves"]["C"]["degree"] == 2);

  // re-running overwrites identically
  const std::string first = slurp(scene);
  REQUIRE(cli({"construct", scene.string(), "--conic", "S", "--pencil", "P", "--name", "C"}).code == Exit::ok);
  CHECK(slurp(scene) == first);

  // to stdout, leaving the file alone
  const auto printed = cli({"construct", scene.string(), "--conic", "S", "--pencil", "P", "--name", "D", "--out", "-"});
  CHECK(json::parse(printed.out)["curves"].contains("D"));
  CHECK(slurp(scene) == first);
}

TEST_CASE("input errors exit with 2 and name the problem") {
  const auto bad = cli({"check", fixture("malformed.json"), "--conic", "S", "--curve", "Q"});
  CHECK(bad.code == Exit::input_error);
  CHECK(bad.err.find("conics.S.T[1][2]") != std::string::npos);

  const auto scene = scratch("basic.json");
  const auto degenerate = cli({"construct", scene.string(), "--conic", "S", "--pencil", "Z"});
  CHECK(degenerate.code == Exit::input_error);
  CHECK(degenerate.err.find("degenerate pencil") != std::string::npos);

  CHECK(cli({"check", scene.string(), "--conic", "nope", "--curve", "Q"}).code == Exit::input_error);
  CHECK(cli({"check", "/nonexistent/scene.json", "--conic", "S", "--curve", "Q"}).code == Exit::input_error);
  CHECK(cli({"frobnicate"}).code == Exit::input_error);
  CHECK(cli({}).code == Exit::input_error);
  CHECK(cli({"closure", scene.string(), "--conic", "S", "--curve", "Q", "--format", "xml"}).code == Exit::input_error);
  CHECK(cli({"--help"}).code == Exit::ok);
  CHECK(cli({"--version"}).out == "0.1.0\n");
}

TEST_CASE("check mirrors the membership examples") {
  const auto basic = fixture("basic.json");
  const auto yes = cli({"check", basic, "--conic", "S", "--curve", "Q"});
  CHECK(yes.code == Exit::ok);
  const auto v = json::parse(yes.out);
  has_meta(v, "exact");
  CHECK(v["verdict"]["is_poncelet"] == true);
  CHECK(v["verdict"]["rank"] == 2);
  CHECK(v["verdict"]["pencil"]["c"] == 2);

  // the conic itself is not Poncelet for itself
  const auto self = cli({"check", basic, "--conic", "S", "--curve", "S2"});
  CHECK(self.code == Exit::negative);
  CHECK(json::parse(self.out)["verdict"]["rank"] == 4);

  const auto fermat = cli({"check", basic, "--conic", "S", "--curve", "F"});
  CHECK(fermat.code == Exit::negative);
  CHECK(json::parse(fermat.out)["verdict"]["rank"].get<int>() > 2);

  // float scenes use the tolerance
  const auto fl = cli({"check", fixture("float.json"), "--conic", "S", "--curve", "Q", "--tol", "1e-9"});
  CHECK(fl.code == Exit::ok);
  const auto fv = json::parse(fl.out);
  has_meta(fv, "float");
  CHECK(fv["tol"] == 1e-9);
  CHECK(fv["verdict"]["residual"].get<double>() < 1e-9);
  CHECK(cli({"check", fixture("float.json"), "--conic", "E", "--curve", "Q"}).code == Exit::negative);
}

TEST_CASE("closure closes on the quintic fixture and not on its perturbation") {
  const auto q = fixture("quintic.json");
  const auto csv = cli({"closure", q, "--conic", "S", "--curve", "C", "--starts", "10", "--seed", "4", "--format", "csv"});
  CHECK(csv.code == Exit::ok);
  const auto rows = lines(csv.out);
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == "start_re,start_im,closed,size,residual");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream in(rows[i]);
    std::vector<std::string> cells;
    for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
    REQUIRE(cells.size() == 5);
    CHECK(cells[2] == "1");
    CHECK(cells[3] == "6");
    CHECK(std::stod(cells[4]) < 1e-8);
  }

  const auto js = cli({"closure", q, "--conic", "S", "--curve", "C", "--seed", "4"});
  const auto report = json::parse(js.out);
  has_meta(report, "float");
  CHECK(report["seed"] == 4);
  CHECK(report["closed"] == 10);
  // the same starts in both formats
  CHECK(std::stod(lines(csv.out)[1].substr(0, lines(csv.out)[1].find(','))) == report["reports"][0]["start_re"].get<double>());

  const auto control = cli({"closure", q, "--conic", "S", "--curve", "D", "--seed", "4"});
  CHECK(control.code == Exit::negative);
  CHECK(json::parse(control.out)["closed"] == 0);
}

TEST_CASE("recover finds the unique conic of a quintic") {
  const auto q = fixture("quintic.json");
  const fs::path csv = scratch("basic.json").replace_filename("clusters.csv");
  const auto r = cli({"recover", q, "--curve", "C", "--target", "S", "--seed", "2", "--csv", csv.string()});
  CHECK(r.code == Exit::ok);
  const auto j = json::parse(r.out);
  has_meta(j, "float");
  CHECK(j["seed"] == 2);
  CHECK(j["starts"] == 100);
  REQUIRE(j["candidates"].size() == 1);
  CHECK(j["candidates"][0]["residual"].get<double>() < 1e-8);
  CHECK(j["target_matched"] == true);
  const auto rows = lines(slurp(csv));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "cluster,z2,yz,y2,xz,xy,x2,residual,basin_count");
  CHECK(rows[1].rfind("0,", 0) == 0);

  // deterministic in the seed
  CHECK(cli({"recover", q, "--curve", "C", "--target", "S", "--seed", "2"}).out == r.out);
}

TEST_CASE("recover on low degree and non-Poncelet curves") {
  const auto conic = cli({"recover", fixture("basic.json"), "--curve", "Q", "--starts", "40", "--seed", "3"});
  CHECK(conic.code == Exit::ok);
  CHECK(json::parse(conic.out)["candidates"].size() >= 5);

  const auto none = cli({"recover", fixture("quintic.json"), "--curve", "D", "--starts", "15"});
  CHECK(none.code == Exit::negative);
  CHECK(json::parse(none.out)["candidates"].empty());
}

TEST_CASE("jumping mirrors the duality examples") {
  const auto scene = scratch("basic.json");
  const auto r = cli({"jumping", scene.string(), "--conic", "S", "--pencil", "P", "--name", "J"});
  CHECK(r.code == Exit::ok);
  const auto j = json::parse(r.out);
  has_meta(j, "exact");
  CHECK(j["curve"]["chart"] == "dual");
  CHECK(j["curve"]["coeffs"] == json{{"0,2,0", "1"}, {"1,0,1", "-1"}});  // b^2 - ac
  CHECK(j["verdict"]["is_poncelet"] == true);
  CHECK(j["verdict"]["rank"] == 2);
  CHECK(j["even_degree"] == true);
  CHECK(json::parse(slurp(scene))["curves"]["J"]["chart"] == "dual");

  const auto line = cli({"jumping", scene.string(), "--conic", "S", "--pencil", "L"});
  CHECK(line.code == Exit::ok);
  CHECK(json::parse(line.out)["curve"]["coeffs"] == json{{"0,1,0", "1"}});  // b = 0
}

TEST_CASE("plot renders real loci deterministically") {
  const auto q = fixture("quintic.json");
  const fs::path svg = scratch("basic.json").replace_filename("q.svg");
  REQUIRE(cli({"plot", q, "S", "C", "--out", svg.string()}).code == Exit::ok);
  const std::string first = slurp(svg);
  CHECK(first.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"512\" height=\"512\" viewBox=\"-3 -3 6 6\"") !=
        std::string::npos);
  CHECK(first.find("<g id=\"C\"") != std::string::npos);
  CHECK(first.find("<path d=\"M") != std::string::npos);
  REQUIRE(cli({"plot", q, "S", "C", "--out", svg.string()}).code == Exit::ok);
  CHECK(slurp(svg) == first);

  // the window moves the viewBox; the document shape stays
  const auto moved = cli({"plot", q, "S", "C", "--window", "-1,-2,4,3", "--out", "-"});
  CHECK(moved.out.find("viewBox=\"-1 -3 5 5\"") != std::string::npos);
  CHECK(lines(moved.out).size() == lines(first).size());
  CHECK(lines(moved.out)[0] == lines(first)[0]);

  // x^2 + y^2 + z^2 has no real points
  const auto empty = cli({"plot", fixture("float.json"), "R", "--out", "-"});
  CHECK(empty.code == Exit::ok);
  CHECK(empty.out.find("no real points in window") != std::string::npos);
  CHECK(empty.out.find("<path") == std::string::npos);

  CHECK(cli({"plot", q, "S", "--window", "1,1,0,0", "--out", "-"}).code == Exit::input_error);
  CHECK(cli({"plot", q, "nothing", "--out", "-"}).code == Exit::input_error);
}

TEST_CASE("contouring follows the zero set") {
  using namespace poncelet::cli;
  const Window w{-2, -2, 2, 2};
  const auto segs = contour([](double x, double y) { return x * x + y * y - 1; }, w, 64);
  CHECK(segs.size() > 50);
  for (const auto& s : segs) {
    CHECK(std::hypot(s.ax, s.ay) == doctest::Approx(1).epsilon(0.01));
    CHECK(std::hypot(s.bx, s.by) == doctest::Approx(1).epsilon(0.01));
  }
  CHECK(contour([](double, double) { return 1.0; }, w, 16).empty());
  CHECK_THROWS(parse_window("0,0,1"));
  CHECK_THROWS(parse_window("0,0,1,1,2"));
  CHECK(parse_window("-1,-2,3,4").y1 == 4);
}

TEST_CASE("selftest quick passes with a reproducible report hash") {
  CHECK(poncelet::cli::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(poncelet::cli::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  const auto a = cli({"selftest", "--level", "quick", "--seed", "17"});
  CHECK(a.code == Exit::ok);
  const auto b = cli({"selftest", "--seed", "17"});
  auto hash = [](const std::string& out) {
    const auto at = out.find("report hash ");
    return at == std::string::npos ? std::string() : out.substr(at + 12, 16);
  };
  CHECK(hash(a.out).size() == 16);
  CHECK(hash(a.out) == hash(b.out));
  CHECK(lines(a.out).size() == 14);
  CHECK(a.out.find("seed=17") != std::string::npos);
}
