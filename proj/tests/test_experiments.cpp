#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "levy_ep/config.hpp"
#include "levy_ep/csv.hpp"
#include "levy_ep/errors.hpp"
#include "levy_ep/experiments.hpp"

using namespace levy_ep;

namespace {

const char* kSimulate = R"(master_seed = 5
experiment = simulate
model.kind = compound_poisson
model.drift = 0.1
model.rate = 2
model.sigma = 0.3
model.jump = two_point
model.jump.low = -0.4
model.jump.high = 0.5
problem.coefficient = linear
problem.y0 = 1
problem.T = 1
simulate.scheme = enhanced
simulate.n = 6
simulate.paths = 4
)";

const char* kSampler = R"(master_seed = 9
experiment = validate-sampler
model.kind = hyperexponential
model.sigma = 1
model.intensity = 1
model.jump.up_rates = 3
model.jump.down_rates = 4
sampler.q = 1, 10
sampler.thetas = 0, 0.5, 2
sampler.samples = 20000
)";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = Config::parse("# comment\n a = 1 \nb.c = x, y ,z\n\nn = 1e5\nlist = 1, 2.5, -3\nf = true\n");
  CHECK(c.str("a") == "1");
  CHECK(c.words("b.c") == std::vector<std::string>{"x", "y", "z"});
  CHECK(c.integer("n") == 100000);
  CHECK(c.numbers("list") == std::vector<double>{1.0, 2.5, -3.0});
  CHECK(c.flag("f", false));
  CHECK_FALSE(c.flag("g", false));
  CHECK(c.number("missing", 4.5) == 4.5);
  CHECK(c.str("missing", "d") == "d");
  CHECK(c.section("b").size() == 1);
  CHECK(Config::parse(c.to_text()).entries() == c.entries());
  CHECK_THROWS_AS(c.str("missing"), UsageError);
  CHECK_THROWS_AS(c.number("b.c"), UsageError);
  CHECK_THROWS_AS(c.integers("list"), UsageError);
  CHECK_THROWS_AS(Config::parse("a = 1\na = 2\n"), UsageError);
  CHECK_THROWS_AS(Config::parse("just words\n"), UsageError);
  CHECK_THROWS_AS(Config::load("/nonexistent/levy.cfg"), UsageError);
  CHECK(parse_u64("18446744073709551615", "s") == std::numeric_limits<std::uint64_t>::max());
  CHECK_THROWS_AS(parse_u64("-1", "s"), UsageError);
  CHECK_THROWS_AS(parse_integer("1.5", "k"), UsageError);
  CHECK_THROWS_AS(parse_number("abc", "x"), UsageError);
  try {
    c.number("b.c");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("b.c") != std::string::npos);
  }
}

TEST_CASE("number formatting round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(7LL) == "7");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("csv table") {
  CsvTable t({"a", "b", "c"});
  t.row().add(1).add(0.5).add(true);
  t.row().add(std::string("x")).add(std::size_t{3}).add(-2LL);
  CHECK(t.rows() == 2);
  CHECK(t.str() == "a,b,c\n1,0.5,1\nx,3,-2\n");
  CsvTable bad({"a"});
  CHECK_THROWS_AS(bad.add(1), Error);
  bad.row();
  CHECK_THROWS_AS(bad.add(std::string("p,q")), Error);
  bad.add(1).add(2);
  CHECK_THROWS_AS(bad.str(), Error);
}

TEST_CASE("git blob ids") {
  CHECK(git_blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(git_blob_sha1("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("registries") {
  const auto text = list_registries();
  for (const auto& name : experiment_names()) CHECK(text.find(name) != std::string::npos);
  for (const auto& name : model_names()) CHECK(text.find(name) != std::string::npos);
  for (const auto& name : jump_names()) CHECK(text.find(name) != std::string::npos);
  CHECK(text.find("euler_poisson") != std::string::npos);
}

TEST_CASE("model and problem from config") {
  const auto cfg = Config::parse(kSimulate);
  const auto m = model_from_config(cfg);
  CHECK(m.dimension() == 1);
  CHECK(m.capabilities().exact_path_samplable);
  const auto p = problem_from_config(cfg);
  CHECK(p.T == 1.0);
  CHECK(p.y0(0) == 1.0);
  auto bad = cfg;
  bad.set("model.kind", "stable");
  CHECK_THROWS_AS(model_from_config(bad), UsageError);
  bad = cfg;
  bad.set("model.jump", "cauchy");
  CHECK_THROWS_AS(model_from_config(bad), UsageError);
  bad = cfg;
  bad.set("problem.coefficient", "cubic");
  CHECK_THROWS_AS(problem_from_config(bad), UsageError);
}

TEST_CASE("usage and capability errors") {
  auto cfg = Config::parse(kSimulate);
  cfg.erase("master_seed");
  CHECK_THROWS_AS(run_experiment(cfg, 1), UsageError);
  cfg = Config::parse(kSimulate);
  cfg.set("experiment", "nonsense");
  CHECK_THROWS_AS(run_experiment(cfg, 1), UsageError);
  cfg = Config::parse(kSimulate);
  cfg.set("simulate.scheme", "milstein");
  CHECK_THROWS_AS(run_experiment(cfg, 1), UsageError);
  // A hyperexponential driver has no fixed-time path sampler.
  cfg = Config::parse(kSampler);
  cfg.set("experiment", "simulate");
  cfg.set("problem.coefficient", "linear");
  cfg.set("problem.y0", "1");
  cfg.set("simulate.scheme", "enhanced");
  cfg.set("simulate.n", "4");
  cfg.set("simulate.paths", "2");
  CHECK_THROWS_AS(run_experiment(cfg, 1), CapabilityError);
}

TEST_CASE("simulate output") {
  const auto r = run_experiment(Config::parse(kSimulate), 1);
  CHECK(r.kind == "simulate");
  const auto& csv = r.output("trajectories.csv").content;
  CHECK(csv.rfind("path_id,step,t_i", 0) == 0);
  CHECK_THROWS_AS(r.output("missing.csv"), Error);
}

TEST_CASE("sampler experiment passes and is deterministic") {
  const auto cfg = Config::parse(kSampler);
  const auto a = run_experiment(cfg, 1);
  const auto b = run_experiment(cfg, 4);
  CHECK(a.all_pass());
  REQUIRE(a.outputs.size() == b.outputs.size());
  for (std::size_t i = 0; i < a.outputs.size(); ++i) CHECK(a.outputs[i].content == b.outputs[i].content);
  auto other = cfg;
  other.set("master_seed", "10");
  CHECK(run_experiment(other, 1).output("cf.csv").content != a.output("cf.csv").content);
}

TEST_CASE("manifest round trip reproduces outputs") {
  const auto cfg = Config::parse(kSimulate);
  const auto r = run_experiment(cfg, 2);
  const auto manifest = render_manifest(cfg, r);
  CHECK(manifest.find(git_blob_sha1(r.output("trajectories.csv").content)) != std::string::npos);
  const auto back = Config::parse(manifest);
  CHECK(back.entries() == cfg.entries());
  const auto again = run_experiment(back, 3);
  CHECK(again.output("trajectories.csv").content == r.output("trajectories.csv").content);

  const auto dir = std::filesystem::temp_directory_path() / "levy_ep_test_artifacts";
  std::filesystem::remove_all(dir);
  write_artifacts(cfg, r, dir.string());
  CHECK(slurp(dir / "trajectories.csv") == r.output("trajectories.csv").content);
  CHECK(slurp(dir / "manifest.cfg") == manifest);
  CHECK(slurp(dir / "summary.json").find("\"experiment\": \"simulate\"") != std::string::npos);
  std::filesystem::remove_all(dir);
}
