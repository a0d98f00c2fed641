#include "dispatch.hpp"
#include "grammar.hpp"
#include "output.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

using namespace pnf;
using namespace pnf::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out, err;
};

Result run(std::initializer_list<std::string> args) {
  std::vector<std::string> a = {"pnf"};
  a.insert(a.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : a) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int st = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {st, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pnf_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("git blob hash matches git hash-object") {
  // `printf 'hello\n' | git hash-object --stdin`
  CHECK(git_blob_sha1("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(git_blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("grammar") {
  const auto g = make_grid(2, 64, 0);
  CHECK(parse_body("ellipse:2,1", g, 0).id() == "ellipse:2,1");
  CHECK(parse_body("disc:1.5", g, 0).id() == "ball:1.5");
  CHECK(parse_body("random:seed=7,amp=0.1", g, 0).id() == "random:seed=7,amp=0.1");
  CHECK(parse_body("random:amp=0.05", g, 11).id() == "random:seed=11,amp=0.05");
  CHECK_THROWS_AS(parse_body("ellipse:2,1,1", g, 0), Error);
  CHECK_THROWS_AS(parse_body("random:sede=7", g, 0), Error);
  CHECK_THROWS_AS(parse_body("blob:1", g, 0), Error);
  CHECK(parse_density("gaussian:1").family() == Density::Family::Gaussian);
  CHECK(parse_density("lebesgue").is_constant());
  CHECK(parse_density("poly:0.5@2,0+0.5@0,2").family() == Density::Family::Polynomial);
  CHECK_THROWS_AS(parse_density("gaussian:x"), Error);
  CHECK(parse_function("one", *g, 0).id == "one");
  CHECK(parse_function("cos:3", *g, 0).id == "cos:3");
  CHECK(parse_function("random:K=3", *g, 5).id == "random:seed=5,K=3");
  CHECK_THROWS_AS(parse_function("ylm:1,0", *g, 0), Error);
  const auto u = parse_test_function("quad:1,2,0,1", 2);
  Vec x(2);
  x << 1.0, 2.0;
  CHECK(u.value(x) == doctest::Approx(0.5 * (1 + 2 * 2 + 4)));  // ½(x² + 2xy + y²)
  CHECK(u.hess(x)(0, 1) == 1.0);
  CHECK(parse_extension("sum:ellipse:2,1", g, 0).label() == "euclidean-sum(ellipse:2,1)");
  CHECK(parse_extension("wave:one", g, 0).label() == "wave(one)");
  CHECK_THROWS_AS(parse_extension("geodesic:1", g, 0), Error);

  const auto cfg = parse_config_text("# comment\nbody = ellipse:2,1  # trailing\n\ninvN=0\n");
  CHECK(cfg.size() == 2);
  CHECK(cfg.at("body") == "ellipse:2,1");
  CHECK(canonical_config(cfg) == "body=ellipse:2,1\ninvN=0\n");
  CHECK_THROWS_AS(parse_config_text("a = 1\na = 2\n"), Error);
  CHECK_THROWS_AS(parse_config_text("novalue\n"), Error);
}

TEST_CASE("Wirtinger case exits 0 with a zero-slack row") {
  const auto dir = scratch("wirtinger");
  const auto r = run({"verify", "colesanti", "--body", "disc:1", "--density", "lebesgue",
                      "--invN", "0.5", "--f", "cos:1", "--out", dir.string()});
  CHECK(r.status == 0);
  CHECK(r.out.find("PASS colesanti slack=0 ") != std::string::npos);
  const std::string csv = slurp(dir / "verdicts.csv");
  CHECK(csv.rfind("inequality_id,body_id,density_id,rho,invN,resolution,lhs,rhs,slack,tol,pass\n", 0) == 0);
  CHECK(csv.find("colesanti,ball:1,lebesgue,0,1/2,M=256,") != std::string::npos);

  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["command"] == "verify colesanti");
  CHECK(m["exit_status"] == 0);
  CHECK(m["config"]["f"] == "cos:1");
  CHECK(m["config"]["tol-scale"] == "1");
  const std::string text = m["config_text"];
  CHECK(text.find("out=") == std::string::npos);
  CHECK(m["config_sha1"] == git_blob_sha1(text));
  CHECK(m["files"]["verdicts.csv"] == git_blob_sha1(csv));
  // No temporaries are left behind.
  for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("flow vs-sum example exits 0") {
  const auto dir = scratch("vssum");
  const auto r = run({"flow", "vs-sum", "--K", "ellipse:2,1", "--L", "disc:1", "--t", "0.7",
                      "--M", "256", "--steps", "100", "--out", dir.string()});
  CHECK(r.status == 0);
  const std::string csv = slurp(dir / "vs_sum.csv");
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "error,forward,backward,drift");
  CHECK(std::stod(row.substr(0, row.find(','))) <= 1e-3);
}

TEST_CASE("convention gate exits 1 with one diagnostic line") {
  const auto dir = scratch("gate");
  const auto r = run({"verify", "colesanti", "--body", "disc:1", "--density", "gaussian:1",
                      "--invN", "-inf", "--f", "one", "--out", dir.string()});
  CHECK(r.status == 1);
  CHECK(r.err.rfind("error: ConventionViolation", 0) == 0);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  CHECK(!fs::exists(dir));
}

TEST_CASE("usage and config errors exit 1") {
  CHECK(run({}).status == 1);
  CHECK(run({"verify"}).status == 1);
  CHECK(run({"verify", "colesanti", "--bogus", "1"}).status == 1);
  CHECK(run({"verify", "colesanti", "--body", "blob:1"}).status == 1);
  CHECK(run({"verify", "colesanti", "--invN", "1/0"}).status == 1);
  CHECK(run({"verify", "colesanti", "--config", "/nonexistent/pnf.cfg"}).status == 1);
  CHECK(run({"--help"}).status == 0);
}

TEST_CASE("verdict failures exit 2 and name the failed ids") {
  const auto dir = scratch("fail");
  const auto r = run({"flow", "run", "--K", "ellipse:2,1", "--phi", "const:-1", "--M", "64",
                      "--T", "1", "--steps", "50", "--out", dir.string()});
  CHECK(r.status == 2);
  CHECK(r.err.find("trace:complete") != std::string::npos);
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["exit_status"] == 2);
  CHECK(m["failed"][0] == "trace:complete");
  CHECK(fs::exists(dir / "trace.csv"));

  const auto tight = run({"flow", "vs-sum", "--M", "64", "--steps", "10", "--tol", "1e-30",
                          "--out", scratch("tight").string()});
  CHECK(tight.status == 2);
}

TEST_CASE("config file values are overridden by flags") {
  const auto dir = scratch("cfg");
  fs::create_directories(dir);
  const auto path = dir / "run.cfg";
  std::ofstream(path) << "body = ellipse:2,1\ninvN = 1/2\nf = cos:2\n";
  const auto out = dir / "out";
  auto r = run({"verify", "colesanti", "--config", path.string(), "--f", "cos:3", "--out",
                out.string()});
  CHECK(r.status == 0);
  const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(m["config"]["body"] == "ellipse:2,1");
  CHECK(m["config"]["f"] == "cos:3");
  std::ofstream(path) << "steps = 3\n";
  r = run({"verify", "colesanti", "--config", path.string(), "--out", out.string()});
  CHECK(r.status == 1);
  CHECK(r.err.find("steps") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical CSVs") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  for (const auto& d : {a, b}) {
    CHECK(run({"bm", "profile", "--K", "random:amp=0.08", "--seed", "13", "--extension",
               "pnf:random:K=3", "--M", "64", "--T", "0.3", "--samples", "7", "--out", d.string()})
              .status == 0);
    CHECK(run({"flow", "wave", "--K", "random:amp=0.08", "--seed", "13", "--M", "64", "--T",
               "0.1", "--steps", "5", "--out", (d / "wave").string()})
              .status == 0);
  }
  for (const char* f : {"verdicts.csv", "profile.csv", "wave/trace.csv", "wave/trace_summary.csv"}) {
    INFO(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
  // Manifests differ only in the recorded output directory.
  for (const char* f : {"manifest.json", "wave/manifest.json"}) {
    auto ma = nlohmann::json::parse(slurp(a / f)), mb = nlohmann::json::parse(slurp(b / f));
    CHECK(ma["config"]["out"] != mb["config"]["out"]);
    ma["config"].erase("out");
    mb["config"].erase("out");
    CHECK(ma == mb);
  }
  const auto m = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(m["config"]["seed"] == "13");
}

TEST_CASE("every command runs") {
  const auto dir = scratch("all").string();
  const std::vector<std::vector<std::string>> runs = {
      {"body", "describe", "--body", "ellipse:2,1"},
      {"verify", "colesanti-strong", "--body", "ellipse:2,1", "--f", "cos:2"},
      {"verify", "dual", "--body", "ellipse:2,1", "--f", "cos:2"},
      {"verify", "meancurv", "--body", "ellipse:2,1"},
      {"verify", "cd", "--density", "gaussian:1", "--invN", "-1"},
      {"verify", "gamma2", "--u", "quad:1,0.5,0.5,2"},
      {"verify", "boundary-cd", "--dim", "3", "--level", "2", "--body", "ellipsoid:1.2,1,0.9",
       "--invN", "1/3"},
      {"verify", "bounds", "--body", "ellipse:2,1"},
      {"spectrum", "--body", "disc:0.5", "--density", "gaussian:1", "--invN", "0"},
      {"reilly", "residual", "--density", "gaussian:1", "--k", "2"},
      {"reilly", "colesanti-chain", "--density", "gaussian:1", "--invN", "0"},
      {"reilly", "ros-chain"},
      {"flow", "check-normals", "--K", "ellipse:2,1", "--L", "disc:1", "--M", "64"},
      {"flow", "ma", "--K", "disc:1", "--L", "ellipse:2,1", "--M", "64", "--steps", "20"},
      {"flow", "map-t", "--K", "disc:1", "--L", "ellipse:2,1", "--M", "64"},
      {"bm", "minkowski2", "--body", "ellipse:2,1"},
      {"bm", "isoperimetric", "--K", "disc:0.5", "--Omega", "disc:2"},
  };
  for (const auto& args : runs) {
    std::vector<std::string> a = {"pnf"};
    a.insert(a.end(), args.begin(), args.end());
    a.push_back("--out");
    a.push_back(dir);
    std::vector<const char*> argv;
    for (const auto& s : a) argv.push_back(s.c_str());
    std::ostringstream out, err;
    INFO(args[0] << " " << args[1] << ": " << err.str());
    CHECK(dispatch(static_cast<int>(argv.size()), argv.data(), out, err) == 0);
  }
}
