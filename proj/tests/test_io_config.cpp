#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "viscowave/commands.hpp"
#include "viscowave/errors.hpp"
#include "viscowave/io.hpp"
#include "viscowave/run_config.hpp"

using namespace viscowave;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "viscowave_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void put(const fs::path& p, const std::string& body) {
  std::ofstream out(p);
  out << body;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

RunConfig small_config(const fs::path& out) {
  RunConfig c;
  c.set("nx=41");
  c.set("nt=101");
  c.set("T=1");
  c.set("plots=false");
  c.set_value("out", out.string());
  return c;
}

}  // namespace

TEST_CASE("numbers print in shortest round-trip form") {
  CHECK(io::format_double(0.0) == "0");
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(-2.5) == "-2.5");
  for (double v : {kPi, 1e-300, 6.02214076e23, -1.0 / 3.0}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

TEST_CASE("space and space-time CSV files are read onto uniform grids") {
  const fs::path dir = scratch("csv");
  std::string body = "x,value\n";
  for (int i = 0; i < 5; ++i) body += io::format_double(kPi * i / 4) + "," + io::format_double(i * i) + "\n";
  put(dir / "f0.csv", body + "\n");
  const SpaceField f = io::read_space_field(dir / "f0.csv");
  CHECK(f.nx() == 5);
  CHECK(f.length == doctest::Approx(kPi));
  CHECK(f.values[3] == 9.0);

  std::string st = "x,t,value\n";
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 4; ++i) {
      st += io::format_double(i * 0.5) + "," + io::format_double(k * 0.25) + "," + io::format_double(10 * k + i) + "\n";
    }
  }
  put(dir / "f.csv", st);
  Grid g;
  const SpaceTimeField s = io::read_space_time_field(dir / "f.csv", g);
  CHECK(g.nx == 4);
  CHECK(g.nt == 3);
  CHECK(g.length == doctest::Approx(1.5));
  CHECK(g.T == doctest::Approx(0.5));
  CHECK(s.values[2 * 4 + 3] == 23.0);

  put(dir / "phi.csv", "t,value\n0,1\n0.5,2\n1,3\n");
  double T = 0.0;
  const auto phi = io::read_time_series(dir / "phi.csv", T);
  CHECK(phi.size() == 3);
  CHECK(T == doctest::Approx(1.0));
}

TEST_CASE("malformed CSV files are rejected") {
  const fs::path dir = scratch("csv_bad");
  CHECK_THROWS_AS(io::read_space_field(dir / "missing.csv"), IoError);
  put(dir / "header.csv", "x,u\n0,1\n1,2\n");
  CHECK_THROWS_AS(io::read_space_field(dir / "header.csv"), ValidationError);
  put(dir / "uneven.csv", "x,value\n0,1\n1,2\n3,3\n");
  CHECK_THROWS_AS(io::read_space_field(dir / "uneven.csv"), ValidationError);
  put(dir / "text.csv", "x,value\n0,1\n1,abc\n");
  CHECK_THROWS_AS(io::read_space_field(dir / "text.csv"), ValidationError);
  put(dir / "offset.csv", "x,value\n1,1\n2,2\n");
  CHECK_THROWS_AS(io::read_space_field(dir / "offset.csv"), ValidationError);
  put(dir / "ragged.csv", "x,t,value\n0,0,1\n1,0,2\n0,1,3\n");
  Grid g;
  CHECK_THROWS_AS(io::read_space_time_field(dir / "ragged.csv", g), ValidationError);
  put(dir / "empty.csv", "");
  CHECK_THROWS_AS(io::read_space_field(dir / "empty.csv"), ValidationError);
}

TEST_CASE("config keys are typed") {
  RunConfig c;
  CHECK(c.number("a") == 0.5);
  c.set("eps=0.02");
  CHECK(c.number("eps") == 0.02);
  c.set("nx=101");
  CHECK(c.integer("nx") == 101);
  c.set("nx=51.0");
  CHECK(c.integer("nx") == 51);
  c.set("sweep_eps=0.1,0.05");
  CHECK(c.numbers("sweep_eps") == std::vector<double>{0.1, 0.05});
  c.set("sweep_eps=[0.2]");
  CHECK(c.numbers("sweep_eps") == std::vector<double>{0.2});
  c.set("sweep_theorems=T32,T41");
  CHECK(c.texts("sweep_theorems") == std::vector<std::string>{"T32", "T41"});
  c.set("preset=free");
  CHECK(c.text("preset") == "free");
  c.set("f0=cos(2)");
  CHECK(c.text("f0") == "cos(2)");
  c.set("plots=false");
  CHECK_FALSE(c.flag("plots"));

  CHECK_THROWS_AS(c.set("nope=1"), ValidationError);
  CHECK_THROWS_AS(c.set("nx=1.5"), ValidationError);
  CHECK_THROWS_AS(c.set("a=fast"), ValidationError);
  CHECK_THROWS_AS(c.set("plots=1"), ValidationError);
  CHECK_THROWS_AS(c.set("sweep_eps=0.1,x"), ValidationError);
  CHECK_THROWS_AS(c.set("noequals"), ValidationError);
  CHECK_THROWS_AS(c.set("=3"), ValidationError);
  CHECK_THROWS_AS(c.merge(nlohmann::json::array()), ValidationError);
  CHECK_THROWS_AS(c.number("missing"), ValidationError);
}

TEST_CASE("config files merge and resolve with a schema version") {
  const fs::path dir = scratch("config");
  put(dir / "run.json", R"({"schema_version": 1, "a": 0.3, "eps": 0.05, "bound_eps": [0.1, 0.05]})");
  RunConfig c;
  c.merge_file(dir / "run.json");
  CHECK(c.number("a") == 0.3);
  CHECK(c.numbers("bound_eps").size() == 2);
  const auto r = c.resolved();
  CHECK(r.at("schema_version") == 1);
  CHECK(r.at("eps") == 0.05);
  for (const auto& k : RunConfig::keys()) CHECK(r.contains(k));
  CHECK_NOTHROW(c.validate());

  CHECK_THROWS_AS(c.merge_file(dir / "absent.json"), IoError);
  put(dir / "broken.json", "{\"a\": ");
  CHECK_THROWS_AS(c.merge_file(dir / "broken.json"), ValidationError);
  put(dir / "unknown.json", R"({"alpha": 1})");
  CHECK_THROWS_AS(c.merge_file(dir / "unknown.json"), ValidationError);
}

TEST_CASE("validation catches out-of-range settings") {
  auto fails = [](const char* assignment) {
    RunConfig c;
    c.set(assignment);
    CAPTURE(assignment);
    CHECK_THROWS_AS(c.validate(), ValidationError);
  };
  fails("a=2");
  fails("eps=0");
  fails("nx=2");
  fails("threads=0");
  fails("preset=unknown");
  fails("sweep_eps=");
  fails("sweep_theorems=T99");
  fails("sweep_x=4");
  fails("diag_c=1");
  fails("theta=0.2");
  fails("source_mode=other");
  fails("out=");
}

TEST_CASE("CSV data replace preset data when the grid matches") {
  const fs::path dir = scratch("config_csv");
  RunConfig c;
  c.set("nx=5");
  c.set("nt=3");
  c.set("T=1");
  std::string body = "x,value\n";
  for (int i = 0; i < 5; ++i) body += io::format_double(kPi * i / 4) + ",2\n";
  put(dir / "f1.csv", body);
  c.set_value("f1_csv", (dir / "f1.csv").string());
  const auto p = c.problem();
  for (double v : p.f1.values) CHECK(v == 2.0);

  put(dir / "short.csv", "x,value\n0,1\n1.5707963267948966,1\n3.141592653589793,1\n");
  c.set_value("f1_csv", (dir / "short.csv").string());
  CHECK_THROWS_AS(c.problem(), GridMismatchError);

  c.set_value("f1_csv", (dir / "nothing.csv").string());
  CHECK_THROWS_AS(c.problem(), IoError);

  c.set_value("f1_csv", "");
  put(dir / "phi.csv", "t,value\n0,0\n1,1\n");
  c.set_value("phi_csv", (dir / "phi.csv").string());
  CHECK_THROWS_AS(c.problem(), GridMismatchError);
}

TEST_CASE("SVG charts and the sweep CSV header") {
  io::PlotSpec spec{"ratio & shape", "t", "value", true, true};
  const std::string svg = io::svg_line_chart(spec, {{"a<b", {1, 10, 100}, {1, 0.1, 0.0}}});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("ratio &amp; shape") != std::string::npos);
  CHECK(svg.find("a&lt;b") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(io::sweep_csv(SweepReport{}).rfind("theorem,eps,t,x,xi,lhs,shape,ratio,regime\n", 0) == 0);
}

TEST_CASE("solve writes the solution, its sidecar and the resolved config") {
  const fs::path dir = scratch("solve");
  RunConfig c = small_config(dir);
  const auto r = run_command("solve", c);
  CHECK(r.summary.at("schema_version") == 1);
  CHECK(r.summary.at("command") == "solve");
  const std::string csv = slurp(dir / "solution.csv");
  CHECK(csv.rfind("x,t,u\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 41 * 101);
  CHECK(read_json(dir / "solution.json").at("schema_version") == 1);
  const auto resolved = read_json(dir / "resolved_config.json");
  CHECK(resolved.at("schema_version") == 1);
  CHECK(resolved.at("nx") == 41);
  CHECK(r.summary.at("residual_sup").get<double>() < 0.1);

  c.set("compare_oracle=true");
  c.set("oracle_dt=0.002");
  const auto rc = run_command("solve", c);
  CHECK(rc.summary.at("oracle").at("sup_gap").get<double>() < 1e-2);
}

TEST_CASE("green, oracle and bound-check commands write their outputs") {
  const fs::path dir = scratch("commands");
  RunConfig c = small_config(dir);
  const auto g = run_command("green", c);
  CHECK(g.summary.at("unconverged") == 0);
  CHECK(fs::exists(dir / "green.csv"));
  CHECK(read_json(dir / "green.json").at("points") == 125);

  c.set("oracle_dt=0.005");
  const auto o = run_command("oracle", c);
  CHECK(o.summary.at("provenance") == "oracle");
  CHECK(slurp(dir / "oracle.csv").rfind("x,t,u\n", 0) == 0);
  CHECK(o.summary.at("energy").at("max_step_increase").get<double>() <= 1e-12);

  c.set("bound_eps=0.5,0.25");
  c.set("bound_t=0.5");
  const auto b = run_command("bound-check", c);
  CHECK(b.summary.at("per_eps").size() == 2);
  CHECK(slurp(dir / "bound_check.csv").rfind("eps,t,gap\n", 0) == 0);

  CHECK_THROWS_AS(run_command("unknown", c), ValidationError);
}

TEST_CASE("a small sweep writes rows, a summary and charts") {
  const fs::path dir = scratch("sweep");
  RunConfig c = small_config(dir);
  c.set("plots=true");
  c.set("sweep_eps=0.1,0.05");
  c.set("sweep_t_points=5");
  c.set("sweep_t_max=5");
  c.set("sweep_T=2");
  c.set("sweep_nx=21");
  c.set("sweep_dt=0.01");
  c.set("sweep_x=0,1.5");
  c.set("sweep_xi=0,3");
  const auto r = run_command("sweep", c);
  const auto& th = r.summary.at("theorems");
  REQUIRE(th.size() == 4);
  CHECK(th[3].contains("constants"));
  const std::string csv = slurp(dir / "sweep.csv");
  CHECK(csv.rfind("theorem,eps,t,x,xi,lhs,shape,ratio,regime\n", 0) == 0);
  CHECK(csv.find("\nT41,") != std::string::npos);
  for (const char* id : {"T31", "T32", "T33", "T41"}) {
    CHECK(fs::exists(dir / ("sweep_" + std::string(id) + "_t.svg")));
    CHECK(fs::exists(dir / ("sweep_" + std::string(id) + "_eps.svg")));
  }
  CHECK(read_json(dir / "sweep.json").at("schema_version") == 1);
}

TEST_CASE("solution CSV is byte-identical for every thread count") {
  std::string first;
  for (int threads : {1, 4, 8}) {
    const fs::path dir = scratch("threads_" + std::to_string(threads));
    RunConfig c = small_config(dir);
    c.set_value("threads", threads);
    c.set("preset=free");
    run_command("solve", c);
    const std::string csv = slurp(dir / "solution.csv");
    if (first.empty()) first = csv;
    CHECK(csv == first);
  }
}
