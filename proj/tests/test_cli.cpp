#include "doctest.h"

#include "repp/commands.hpp"
#include "repp/errors.hpp"
#include "repp/limits.hpp"
#include "repp/report.hpp"
#include "repp/rng.hpp"

#include <filesystem>
#include <map>
#include <sstream>

using namespace repp;
namespace fs = std::filesystem;

namespace {

const char* kDoubling =
    "seed = 42\n"
    "runs = 10\n"
    "n = 1e4\n"
    "[system]\n"
    "kind = digit_shift\n"
    "bases = 2\n"
    "[observable]\n"
    "g = g1\n"
    "zeta = 0\n";

struct Scratch {
  fs::path root;
  explicit Scratch(const std::string& name) : root(fs::temp_directory_path() / ("repp_cli_" + name)) {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Scratch() { fs::remove_all(root); }

  CommandOutcome run(const std::string& cmd, const std::string& config, const std::string& out,
                     const std::string& suite = "", std::optional<std::uint64_t> seed = {}) const {
    CommandOptions opt;
    opt.seed = seed;
    if (!config.empty()) {
      write_text_file(root / (out + ".ini"), config);
      opt.config_path = (root / (out + ".ini")).string();
    }
    opt.out_dir = root / out;
    opt.suite = suite;
    std::ostringstream log;
    return run_command(cmd, opt, log);
  }
};

std::map<std::string, std::string> hashes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = sha256_file(e.path());
  return out;
}

int exit_code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.exit_code();
  }
  return 0;
}

const nlohmann::json& test_named(const nlohmann::json& report, const std::string& name) {
  for (const auto& t : report.at("tests"))
    if (t.at("test") == name) return t;
  throw std::runtime_error("no test " + name);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("sha256 of known strings") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("run configuration grammar") {
    const auto cfg = parse_run_config(std::string(kDoubling) + "[law]\nkind = stacked_geometric\nalpha = 2\n");
    CHECK(*cfg.seed == 42);
    CHECK(cfg.runs == 10);
    CHECK(cfg.n_ladder == std::vector<double>{1e4});
    CHECK(cfg.require_law().theta == doctest::Approx(0.5));
    CHECK(parse_run_config("n = 1024, 4096\nq = 1\n").n_ladder.size() == 2);
    CHECK(parse_run_config("[nu]\nkind = contraction\nlambda = 1/2\nset = 1:2;3:4\n").nu->spec.lambda == 0.5);
    CHECK(parse_matrix("2,0;0,3")(1, 1) == 3.0);
    CHECK_THROWS_AS(parse_run_config("seed = 1\nbogus = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("[weird]\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("n = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("[law]\nkind = nope\n"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("[records]\na = 2\nb = 1\n"), ConfigError);
    try {
      parse_run_config("seed = 1\nruns = 10\nq = x\n");
      FAIL("expected a parse error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK(parse_run_config("seed = 1\n").canonical == parse_run_config("# note\nseed   =   1\n").canonical);
  }

  TEST_CASE("laws round-trip through key-value blocks") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 0) = 2.0;
    m(1, 1) = 3.0;
    for (const auto& law : {LimitLaw::poisson2d(), LimitLaw::compound1d(0.5, 2.0), LimitLaw::stacked_geometric(1.5, 1),
                            LimitLaw::poisson_multi(2), LimitLaw::stacked_linear(m), LimitLaw::ndag(m),
                            LimitLaw::hat_n(2.0), LimitLaw::double_hat_n()}) {
      const auto back = law_from_kv(law_to_kv(law));
      CHECK(back.to_json() == law.to_json());
    }
  }

  TEST_CASE("minimal simulate writes one CSV per run and a report") {
    Scratch s("simulate");
    const auto out = s.run("simulate", kDoubling, "sim");
    CHECK(out.exit_code == 0);
    std::size_t csvs = 0;
    for (const auto& e : fs::directory_iterator(s.root / "sim")) csvs += e.path().extension() == ".csv" ? 1 : 0;
    CHECK(csvs == 10);
    CHECK(fs::exists(s.root / "sim" / "clusters.json"));
    const auto report = nlohmann::json::parse(read_text_file(s.root / "sim" / "report.json"));
    CHECK(report.at("schema") == "report_v1");
    CHECK(report.at("seed") == 42);
    CHECK(report.at("outputs").size() == 11);
    CHECK(report.at("data").at("levels").at(0).at("q") == 1);
    CHECK(read_text_file(s.root / "sim" / "run_00000.csv").rfind("run_id,t,mark1\n", 0) == 0);
  }

  TEST_CASE("same config and seed reproduce every byte") {
    Scratch s("determinism");
    s.run("simulate", kDoubling, "a");
    s.run("simulate", kDoubling, "b");
    const auto ha = hashes(s.root / "a"), hb = hashes(s.root / "b");
    CHECK(ha.size() == 12);
    CHECK(ha == hb);
    s.run("simulate", std::string(kDoubling).replace(0, 9, "seed = 43"), "c");
    CHECK(hashes(s.root / "c") != ha);
  }

  TEST_CASE("missing seed in acceptance mode is refused with exit code 2") {
    Scratch s("seed");
    const std::string no_seed = std::string(kDoubling).substr(10);
    CHECK(exit_code_of([&] { s.run("simulate", no_seed, "x"); }) == 2);
    CHECK(exit_code_of([&] { s.run("simulate", "mode = explore\n" + no_seed, "y"); }) == 0);
    CHECK(exit_code_of([&] { s.run("simulate", "", "z"); }) == 2);
    CHECK(exit_code_of([&] { s.run("frobnicate", kDoubling, "w"); }) == 2);
  }

  TEST_CASE("compare passes the stacked law and rejects the Poisson law") {
    Scratch s("compare");
    s.run("simulate", "seed = 9\nruns = 300\nn = 1e5\n[system]\nkind = digit_shift\nbases = 2\n[observable]\ng = g1\nzeta = 0\n",
          "sim");
    const auto good = s.run("compare", "artifact = sim\n[law]\nkind = stacked_geometric\nalpha = 2\n", "good");
    CHECK(good.exit_code == 0);
    CHECK(test_named(good.report, "void_grid").at("pass") == true);
    CHECK(test_named(good.report, "cluster_law").at("pass") == true);
    const auto bad = s.run("compare", "artifact = sim\n[law]\nkind = poisson2d\n", "bad");
    CHECK(bad.exit_code == 1);
    CHECK(test_named(bad.report, "void_grid").at("pass") == false);
  }

  TEST_CASE("compare refuses empty or missing inputs") {
    Scratch s("empty");
    CHECK(exit_code_of([&] { s.run("compare", "[law]\nkind = poisson2d\n", "a"); }) == 2);
    CHECK(exit_code_of([&] { s.run("compare", "artifact = nowhere\n[law]\nkind = poisson2d\n", "b"); }) == 2);
    s.run("simulate", kDoubling, "sim");
    for (const auto& e : fs::directory_iterator(s.root / "sim"))
      if (e.path().extension() == ".csv") fs::remove(e.path());
    CHECK(exit_code_of([&] { s.run("compare", "artifact = sim\n[law]\nkind = poisson2d\n", "c"); }) == 3);
  }

  TEST_CASE("scatter plots") {
    const Window w{1.0, 10.0};
    const auto empty = scatter_svg(PointMeasure(1, w), w, {});
    CHECK(empty.find("<svg") != std::string::npos);
    CHECK(empty.find("<line") != std::string::npos);
    CHECK(empty.find("<circle") == std::string::npos);
    PointMeasure pm(1, w);
    pm.add(0.5, 2.0);
    pm.add(0.6, 20.0);
    const auto one = scatter_svg(pm, w, {});
    CHECK(one.find("<circle") != std::string::npos);
    CHECK(one.find("<circle") == one.rfind("<circle"));
  }

  TEST_CASE("figure panels and limit samples") {
    Scratch s("limit");
    const auto fig = s.run("limit-sample", "", "fig", "figure1", 1);
    CHECK(fig.exit_code == 0);
    CHECK(exit_code_of([&] { s.run("limit-sample", "", "nofig", "figure1"); }) == 2);
    CHECK(fs::exists(s.root / "fig" / "figure1_poisson.svg"));
    CHECK(fs::exists(s.root / "fig" / "figure1_stacked.svg"));
    const auto law = s.run("limit-sample", "seed = 4\nruns = 500\n[law]\nkind = stacked_geometric\nalpha = 3/2\n", "law");
    CHECK(law.exit_code == 0);
    CHECK(fs::exists(s.root / "law" / "samples.csv"));
    CHECK(fs::exists(s.root / "law" / "scatter.svg"));
    s.run("limit-sample", "seed = 4\nruns = 3\nhorizon = 1e-12\ngrid = none\n[law]\nkind = poisson2d\n", "empty");
    CHECK(read_text_file(s.root / "empty" / "scatter.svg").find("<circle") == std::string::npos);
  }

  TEST_CASE("nu values routed through the command line") {
    Scratch s("nu");
    const std::vector<std::pair<std::string, double>> cases{
        {"kind = lebesgue\nset = 0:1;2:2.5\n", 1.5},
        {"kind = contraction\nlambda = 1/2\nset = 0:3\n", 1.5},
        {"kind = contraction\nlambda = 1/2\nset = 1:2;3:4\n", 1.5}};
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto out = s.run("nu", "seed = 1\n[nu]\n" + cases[i].first, "nu" + std::to_string(i));
      CHECK(out.exit_code == 0);
      CHECK(out.report.at("data").at("value").get<double>() == doctest::Approx(cases[i].second).epsilon(1e-12));
    }
  }

  TEST_CASE("records and report aggregation") {
    Scratch s("records");
    const auto rec = s.run("records",
                           "seed = 3\nruns = 300\nn = 1e4\n[system]\nkind = digit_shift\nbases = 2\n[observable]\n"
                           "g = g1\nzeta = pi/16\n",
                           "rec");
    CHECK(rec.exit_code == 0);
    CHECK(rec.report.at("data").at("mean").get<double>() > 2.0);
    CHECK(exit_code_of([&] { s.run("report", "", "missing"); }) == 2);
    fs::create_directories(s.root / "none");
    CHECK(exit_code_of([&] { s.run("report", "", "none"); }) == 3);
    CommandOptions opt;
    opt.out_dir = s.root;
    std::ostringstream log;
    const auto summary = run_command("report", opt, log);
    CHECK(summary.report.at("reports").size() == 1);
    CHECK(summary.exit_code == 0);
  }
}
