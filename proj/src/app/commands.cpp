#include "repp/commands.hpp"

#include "repp/acceptance.hpp"
#include "repp/battery.hpp"
#include "repp/ensemble.hpp"
#include "repp/errors.hpp"
#include "repp/extremal.hpp"
#include "repp/report.hpp"
#include "repp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace repp {

namespace fs = std::filesystem;

namespace {

// Family-wise level whose Bonferroni split matches a 3 sigma criterion.
constexpr double kThreeSigmaLevel = 0.0026997960632601866;

std::string run_file_name(std::size_t r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%05zu.csv", r);
  return buf;
}

std::string level_dir(double n) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "n_%.0f", n);
  return buf;
}

std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (cfg.acceptance_mode) return cfg.require_seed();
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

int outcome_code(const RunReport& report) { return report.pass() ? 0 : 1; }

CommandOutcome finish(const RunReport& report, const fs::path& out) {
  report.write(out);
  return {outcome_code(report), report.to_json()};
}

/// Mark level below which an orbit visit is recorded.
double visit_cap(const RunConfig& cfg, int dim) {
  return dim == 1 ? cfg.tau_max : unit_ball_volume(dim) * std::pow(cfg.radius, dim);
}

Window artifact_window(const RunConfig& cfg, int dim) {
  return {cfg.horizon, dim == 1 ? cfg.tau_max : cfg.radius};
}

int resolve_q(const RunConfig& cfg, const SystemSpec& sys, const ObservableSpec& obs) {
  if (cfg.q >= 0) return cfg.q;
  if (sys.dimension != 1 || sys.kind == SystemKind::Intermittent)
    throw ConfigError("q = auto needs a one-dimensional affine system; set q explicitly");
  ChooseQOptions opt;
  return choose_q(sys, obs, opt).q;
}

struct LevelRun {
  PointMeasure pm;
  ClusterSummary clusters;
};

LevelRun digit_shift_run(const RunConfig& cfg, double n, int q, std::uint64_t seed) {
  const SystemSpec& sys = *cfg.system;
  const ObservableSpec& obs = *cfg.observable;
  const int dim = sys.dimension;
  OrbitRunConfig oc{sys, ThresholdScheme::analytic(obs, n)};
  oc.horizon = cfg.horizon;
  oc.lookahead = cfg.lookahead;
  oc.mark_cap = visit_cap(cfg, dim);
  oc.keep_offsets = dim > 1;
  const auto hits = run_orbit(oc, seed);
  LevelRun out{dim == 1 ? repp2_from_hits(hits) : repp_multi_from_hits(hits, oc.ts.chart_scale(), cfg.radius),
               clusters_from_hits(hits, oc.mark_cap, static_cast<std::uint64_t>(q))};
  return out;
}

LevelRun float_run(const RunConfig& cfg, const ThresholdScheme& ts, double n, int q, std::uint64_t seed) {
  const SystemSpec& sys = *cfg.system;
  const ObservableSpec& obs = *cfg.observable;
  Engine eng(seed);
  const std::vector<double> x0{uniform01(eng)};
  const auto length = static_cast<std::uint64_t>(std::llround(n * cfg.horizon));
  const auto orbit = iterate_float(sys, x0, length + cfg.lookahead, true, derive_seed(seed, 1));
  std::vector<double> values;
  values.reserve(orbit.size());
  values.push_back(evaluate(obs, x0));
  for (std::size_t i = 0; i + 1 < orbit.size() && values.size() < length + cfg.lookahead; ++i)
    values.push_back(evaluate(obs, orbit[i]));
  const std::span<const double> series(values.data(), std::min<std::size_t>(values.size(), length));
  LevelRun out{build_repp2(series, ts, cfg.tau_max, cfg.horizon), {}};
  std::vector<std::uint64_t> idx;
  std::vector<double> marks;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double m = ts.tau_of(values[j]);
    if (m <= cfg.tau_max) {
      idx.push_back(j);
      marks.push_back(m);
    }
  }
  out.clusters = clusters(idx, marks, static_cast<std::uint64_t>(q), length, n);
  return out;
}

nlohmann::json run_start_times(const std::vector<LevelRun>& runs) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : runs) j.push_back(r.clusters.start_times);
  return j;
}

std::vector<fs::path> run_files(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind("run_", 0) == 0 && e.path().extension() == ".csv") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointMeasure> read_runs(const fs::path& dir, int dim, const Window& window) {
  std::vector<PointMeasure> out;
  for (const auto& f : run_files(dir)) {
    std::ifstream in(f);
    auto runs = read_csv(in, window);
    const std::size_t id = out.size();
    out.push_back(runs.size() > id ? std::move(runs[id]) : PointMeasure(dim, window));
  }
  return out;
}

bool geometric_clusters(const LimitLaw& law) {
  switch (law.kind) {
    case LawKind::Poisson2D:
    case LawKind::CompoundPoisson1D:
    case LawKind::StackedGeometric:
    case LawKind::PoissonMultiD:
    case LawKind::StackedLinear:
      return true;
    default:
      return false;
  }
}

/// Standard families with their mark sets replaced by [0, tau): the
/// time-only view a compound law describes.
std::vector<RectangleFamily> time_only(std::vector<RectangleFamily> fams, double tau) {
  for (auto& f : fams)
    for (auto& c : f.cells) c.marks = IntervalUnion{{0.0, tau}};
  return fams;
}

template <typename Fn>
void run_or_skip(RunReport& report, const std::string& name, Fn&& fn) {
  try {
    fn();
  } catch (const UnderpoweredError& e) {
    report.add_skipped(name, e.what());
  }
}

void add_grid(RunReport& report, const std::string& name, const std::vector<GofReport>& cells, double fraction) {
  report.add_test(grid_verdict(name, cells, fraction));
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : cells) j.push_back(c.to_json());
  report.data()[name] = j;
}

}  // namespace

CommandOutcome cmd_simulate(const RunConfig& cfg, const fs::path& out) {
  const std::uint64_t seed = resolve_seed(cfg);
  const SystemSpec& sys = cfg.require_system();
  const ObservableSpec& obs = cfg.require_observable();
  sys.validate();
  obs.validate();
  const int dim = sys.dimension;
  if (dim > 1 && sys.kind != SystemKind::DigitShift)
    throw ConfigError("multi-dimensional systems must be digit shifts");
  const int q = resolve_q(cfg, sys, obs);

  RunReport report("simulate", cfg.canonical, seed);
  report.data()["runs"] = cfg.runs;
  report.data()["horizon"] = cfg.horizon;
  report.data()["tau_max"] = cfg.tau_max;
  report.data()["radius"] = cfg.radius;
  report.data()["mark_dim"] = dim;
  report.data()["cluster_tau"] = visit_cap(cfg, dim);
  report.data()["system"] = sys.to_kv().to_text();
  report.data()["observable"] = obs.to_kv().to_text();
  nlohmann::json levels = nlohmann::json::array();

  for (std::size_t level = 0; level < cfg.n_ladder.size(); ++level) {
    const double n = cfg.n_ladder[level];
    const std::uint64_t level_seed = derive_seed(seed, level);
    std::optional<ThresholdScheme> float_ts;
    if (sys.kind != SystemKind::DigitShift) {
      float_ts = sys.measure == MeasureKind::LebesgueInvariant
                     ? ThresholdScheme::analytic(obs, n)
                     : ThresholdScheme::birkhoff(obs, n, calibrate_birkhoff(sys, obs, std::max<std::uint64_t>(100000, static_cast<std::uint64_t>(10 * n)),
                                                                            derive_seed(level_seed, ~0ULL)));
    }
    const auto runs = run_ensemble(
        cfg.runs,
        [&](std::size_t r) {
          const std::uint64_t s = derive_seed(level_seed, r);
          return float_ts ? float_run(cfg, *float_ts, n, q, s) : digit_shift_run(cfg, n, q, s);
        },
        cfg.workers);

    const fs::path dir = cfg.n_ladder.size() > 1 ? out / level_dir(n) : out;
    fs::create_directories(dir);
    ClusterSummary all;
    all.q = static_cast<std::uint64_t>(q);
    for (std::size_t r = 0; r < runs.size(); ++r) {
      std::ostringstream csv;
      write_csv_header(csv, runs[r].pm.mark_dim());
      write_csv_rows(csv, r, runs[r].pm);
      write_text_file(dir / run_file_name(r), csv.str());
      report.add_output(out, dir / run_file_name(r));
      all.merge(runs[r].clusters);
    }
    all.finalize();
    nlohmann::json cj = all.to_json(true);
    cj["n"] = n;
    cj["tau"] = visit_cap(cfg, dim);
    cj["run_start_times"] = run_start_times(runs);
    write_text_file(dir / "clusters.json", cj.dump(2) + "\n");
    report.add_output(out, dir / "clusters.json");
    levels.push_back({{"n", n},
                      {"dir", fs::relative(dir, out).generic_string()},
                      {"q", q},
                      {"theta_aq", cj["theta_aq"]},
                      {"theta_clusters", cj["theta_clusters"]},
                      {"clusters", cj["clusters"]},
                      {"exceedances", cj["exceedances"]}});
  }
  report.data()["levels"] = levels;
  return finish(report, out);
}

CommandOutcome cmd_limit_sample(const RunConfig& cfg, const fs::path& out, const std::string& suite) {
  const std::uint64_t seed = resolve_seed(cfg);
  RunReport report("limit-sample", cfg.canonical + "suite=" + suite + "\n", seed);
  if (suite == "figure1") {
    const Window w{cfg.horizon, cfg.tau_max};
    const std::vector<std::pair<std::string, LimitLaw>> panels{
        {"figure1_poisson", LimitLaw::poisson2d()},
        {"figure1_stacked", LimitLaw::stacked_geometric(1.5, 1)}};
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const auto& [name, law] = panels[i];
      const auto pm = sample(law, w, derive_seed(seed, i));
      std::ostringstream csv;
      write_csv_header(csv, 1);
      write_csv_rows(csv, 0, pm);
      write_text_file(out / (name + ".csv"), csv.str());
      ScatterStyle style;
      style.title = i == 0 ? "Poisson process" : "Stacked process, d = 1, alpha = 3/2";
      write_text_file(out / (name + ".svg"), scatter_svg(pm, w, style));
      report.add_output(out, out / (name + ".csv"));
      report.add_output(out, out / (name + ".svg"));
      report.data()[name] = {{"law", law.to_json()}, {"atoms", pm.size()}};
    }
    return finish(report, out);
  }
  if (!suite.empty()) throw ConfigError("unknown limit-sample suite '" + suite + "'");

  const LimitLaw& law = cfg.require_law();
  law.validate();
  const int dim = law.mark_dim();
  const Window w = artifact_window(cfg, dim);
  const auto samples =
      run_ensemble(cfg.runs, [&](std::size_t r) { return sample(law, w, derive_seed(seed, r)); }, cfg.workers);
  std::ostringstream csv;
  write_csv_header(csv, dim);
  for (std::size_t r = 0; r < samples.size(); ++r) write_csv_rows(csv, r, samples[r]);
  write_text_file(out / "samples.csv", csv.str());
  report.add_output(out, out / "samples.csv");
  if (dim == 1) {
    ScatterStyle style;
    style.title = to_string(law.kind);
    write_text_file(out / "scatter.svg", scatter_svg(samples.front(), w, style));
    report.add_output(out, out / "scatter.svg");
  }
  report.data()["law"] = law.to_json();
  report.data()["runs"] = cfg.runs;

  if (cfg.grid != "none") {
    const auto fams = grid_for(dim, w);
    if (fams.empty()) {
      report.add_skipped("law_grid", "no standard family fits inside the window");
    } else {
      const bool compound = law.kind == LawKind::CompoundPoisson1D;
      const auto tally = tally_grid(samples, fams, compound);
      const double level = bonferroni_level(kThreeSigmaLevel, 2 * fams.size());
      run_or_skip(report, "void_grid", [&] {
        add_grid(report, "void_grid", void_reports(tally, analytic_voids(law, fams), level, "void"), 1.0);
      });
      run_or_skip(report, "intensity_grid", [&] {
        add_grid(report, "intensity_grid", mean_reports(tally, expected_totals(law, fams), level, "mean"), 1.0);
      });
    }
  }
  return finish(report, out);
}

CommandOutcome cmd_compare(const RunConfig& cfg, const fs::path& out) {
  const LimitLaw& law = cfg.require_law();
  law.validate();
  if (cfg.artifact.empty()) throw ConfigError("compare needs artifact = <simulate output directory>");
  const fs::path artifact(cfg.artifact);
  const auto meta = nlohmann::json::parse(read_text_file(artifact / "report.json"));
  if (meta.value("schema", "") != kReportSchema || meta.value("command", "") != "simulate")
    throw ConfigError("'" + cfg.artifact + "' is not a simulate artifact");
  const auto& data = meta.at("data");
  const auto& level = data.at("levels").back();
  const int dim = data.at("mark_dim");
  if (dim != law.mark_dim()) throw ConfigError("law mark dimension does not match the artifact");
  const double horizon = data.at("horizon");
  const Window w{horizon, dim == 1 ? data.at("tau_max").get<double>() : data.at("radius").get<double>()};
  const fs::path dir = artifact / level.at("dir").get<std::string>();
  const auto ensemble = read_runs(dir, dim, w);
  if (ensemble.empty()) throw DataError("artifact '" + cfg.artifact + "' holds no runs");
  const auto cj = nlohmann::json::parse(read_text_file(dir / "clusters.json"));

  RunReport report("compare", cfg.canonical, meta.at("seed").is_null() ? std::nullopt
                                                                        : std::optional(meta.at("seed").get<std::uint64_t>()));
  report.data()["artifact_config_hash"] = meta.at("config_hash");
  report.data()["law"] = law.to_json();
  report.data()["runs"] = ensemble.size();
  report.data()["n"] = level.at("n");

  if (cfg.grid != "none") {
    auto fams = grid_for(dim, w);
    if (law.kind == LawKind::CompoundPoisson1D) fams = time_only(fams, law.tau);
    if (fams.empty()) {
      report.add_skipped("void_grid", "no standard family fits inside the artifact window");
    } else {
      const auto tally = tally_grid(ensemble, fams, false);
      const double cell_level = bonferroni_level(kDefaultLevel, fams.size());
      run_or_skip(report, "void_grid", [&] {
        add_grid(report, "void_grid", void_reports(tally, analytic_voids(law, fams), cell_level, "void"), 0.95);
      });
      run_or_skip(report, "intensity_grid", [&] {
        add_grid(report, "intensity_grid", mean_reports(tally, expected_totals(law, fams), cell_level, "mean"), 0.95);
      });
    }
  }

  const auto sizes = cj.at("sizes").get<std::vector<std::uint64_t>>();
  if (!geometric_clusters(law)) {
    report.add_skipped("cluster_law", "the law has no geometric cluster-size distribution");
  } else {
    run_or_skip(report, "cluster_law", [&] {
      auto r = geometric_fit(sizes, law.theta);
      r.test = "cluster_law";
      report.add_test(r);
    });
  }

  std::vector<double> gaps;
  double last = 0.0;
  const auto starts = cj.at("run_start_times");
  for (std::size_t r = 0; r < starts.size(); ++r)
    for (const auto& t : starts[r]) {
      const double x = static_cast<double>(r) * horizon + t.get<double>();
      gaps.push_back(x - last);
      last = x;
    }
  run_or_skip(report, "gap_law", [&] {
    if (gaps.size() < 100) throw UnderpoweredError("fewer than 100 cluster gaps");
    auto r = ks_exponential(gaps, law.theta * cj.at("tau").get<double>());
    r.test = "gap_law";
    report.add_test(r);
  });

  const double a = cfg.records.a, b = std::min(cfg.records.b, horizon);
  if (dim != 1) {
    report.add_skipped("record_law", "records need scalar marks");
  } else if (law.kind == LawKind::DoubleHatN) {
    report.add_skipped("record_law", "records of this law do not follow the log-Poisson law");
  } else if (!(a < b)) {
    report.add_skipped("record_law", "record window lies beyond the horizon");
  } else {
    std::vector<std::uint64_t> counts;
    bool complete = true;
    for (const auto& pm : ensemble) {
      const auto rec = h_record_projection(pm);
      complete = complete && !rec.empty() && rec.time(0) <= a;
      counts.push_back(count_open(rec, a, b));
    }
    if (!complete) {
      report.add_skipped("record_law", "some runs have no atom below the mark cap before time a");
    } else {
      run_or_skip(report, "record_law", [&] {
        for (auto r : record_law_reports(counts, a, b)) report.add_test(r);
      });
    }
  }
  return finish(report, out);
}

CommandOutcome cmd_records(const RunConfig& cfg, const fs::path& out) {
  const std::uint64_t seed = resolve_seed(cfg);
  const SystemSpec& sys = cfg.require_system();
  const ObservableSpec& obs = cfg.require_observable();
  sys.validate();
  obs.validate();
  if (sys.dimension != 1 || sys.kind != SystemKind::DigitShift)
    throw ConfigError("records use one-dimensional digit-shift systems");
  const auto& rc = cfg.records;
  const double n = cfg.n_ladder.back();
  const auto runs = run_ensemble(
      cfg.runs,
      [&](std::size_t r) {
        ObservableSpec o = obs;
        if (rc.random_zeta) {
          const std::uint64_t k = 1 + derive_seed(seed ^ 0x5a5a5a5a5a5a5a5aULL, r) % ((1ULL << 40) - 1);
          o.zeta = {ExactReal::pi_multiple(Rational(static_cast<long long>(k), static_cast<long long>(1ULL << 40)))};
        }
        return record_run(sys, o, n, rc.a, rc.b, rc.cap, derive_seed(seed, r));
      },
      cfg.workers);

  RunReport report("records", cfg.canonical, seed);
  std::vector<std::uint64_t> counts;
  std::ostringstream csv;
  csv << "run_id,count,cap\n";
  double max_cap = 0.0;
  std::uint64_t zeros = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    counts.push_back(runs[r].count);
    zeros += runs[r].count == 0 ? 1 : 0;
    max_cap = std::max(max_cap, runs[r].cap);
    csv << r << ',' << runs[r].count << ',' << runs[r].cap << '\n';
  }
  write_text_file(out / "records.csv", csv.str());
  report.add_output(out, out / "records.csv");

  std::vector<double> xs(counts.begin(), counts.end());
  const auto est = mean_and_se(xs);
  const double reference = std::log(rc.b / rc.a);
  report.data()["n"] = n;
  report.data()["runs"] = cfg.runs;
  report.data()["a"] = rc.a;
  report.data()["b"] = rc.b;
  report.data()["mean"] = est.value;
  report.data()["se"] = est.se;
  report.data()["log_ratio"] = reference;
  report.data()["excess_factor"] = est.value / reference;
  report.data()["max_cap"] = max_cap;

  if (rc.example53) {
    GofReport r;
    r.test = "records/excess";
    r.samples = counts.size();
    r.level = kThreeSigmaLevel / 2.0;
    r.reference = "log(b/a) = " + std::to_string(reference);
    r.statistic = est.se > 0.0 ? (est.value - reference) / est.se : 0.0;
    r.p_value = 0.5 * std::erfc(r.statistic / std::sqrt(2.0));
    r.reject = !(r.statistic > 3.0);
    report.add_test(r, r.reject ? "no significant excess" : "record counts exceed the log-Poisson mean");
    report.data()["excess_flagged"] = !r.reject;
  } else {
    run_or_skip(report, "record_law", [&] {
      for (auto r : record_law_reports(counts, rc.a, rc.b)) report.add_test(r);
    });
    auto v = compare_void(wilson(zeros, counts.size()), rc.a / rc.b);
    v.test = "records/no_record";
    report.add_test(v);
  }
  return finish(report, out);
}

CommandOutcome cmd_nu(const RunConfig& cfg, const fs::path& out) {
  const std::uint64_t seed = resolve_seed(cfg);
  if (!cfg.nu) throw ConfigError("missing section [nu]");
  const NuConfig& nc = *cfg.nu;
  nc.spec.validate();
  RunReport report("nu", cfg.canonical, seed);
  const bool boxes = !nc.boxes.empty();
  const double value = boxes ? nu_eval(nc.spec, nc.boxes) : nu_eval(nc.spec, nc.set);
  const McEstimate mc = boxes ? nu_monte_carlo(nc.spec, nc.boxes, nc.samples, seed)
                              : nu_monte_carlo(nc.spec, nc.set, nc.samples, seed);
  report.data()["spec"] = nc.spec.to_json();
  report.data()["value"] = value;
  report.data()["monte_carlo"] = {{"value", mc.value}, {"sigma", mc.sigma}, {"samples", mc.samples}};
  auto r = compare_mean(mc.value, mc.sigma, mc.samples, value, kThreeSigmaLevel);
  r.test = "nu/monte_carlo";
  report.add_test(r);
  return finish(report, out);
}

CommandOutcome cmd_report(const fs::path& out) {
  if (!fs::is_directory(out)) throw ConfigError("'" + out.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(out))
    if (e.is_regular_file() && e.path().extension() == ".json" && e.path().filename() != "summary.json")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  nlohmann::json reports = nlohmann::json::array();
  bool pass = true;
  for (const auto& f : files) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_text_file(f));
    } catch (const nlohmann::json::exception&) {
      continue;
    }
    if (!j.is_object() || j.value("schema", "") != kReportSchema) continue;
    nlohmann::json failing = nlohmann::json::array();
    for (const auto& t : j.at("tests"))
      if (!t.value("pass", true)) failing.push_back(t.at("test"));
    const bool ok = j.value("pass", false);
    pass = pass && ok;
    reports.push_back({{"path", fs::relative(f, out).generic_string()},
                       {"command", j.at("command")},
                       {"config_hash", j.at("config_hash")},
                       {"tests", j.at("tests").size()},
                       {"failing", failing},
                       {"pass", ok}});
  }
  if (reports.empty()) throw DataError("no report_v1 files under '" + out.string() + "'");
  const nlohmann::json summary{{"schema", "summary_v1"}, {"reports", reports}, {"pass", pass}};
  write_text_file(out / "summary.json", summary.dump(2) + "\n");
  return {pass ? 0 : 1, summary};
}

CommandOutcome run_command(const std::string& name, const CommandOptions& opt, std::ostream& log) {
  RunConfig cfg = opt.config_path ? load_run_config(*opt.config_path) : RunConfig{};
  if (opt.seed) cfg.seed = opt.seed;
  if (opt.workers) cfg.workers = opt.workers;
  // A relative artifact path is read relative to the config file.
  if (opt.config_path && !cfg.artifact.empty() && fs::path(cfg.artifact).is_relative())
    cfg.artifact = (fs::path(*opt.config_path).parent_path() / cfg.artifact).string();
  const bool has_config = opt.config_path.has_value();
  auto need_config = [&] {
    if (!has_config) throw ConfigError(name + " needs --config");
  };

  if (name == "simulate") {
    need_config();
    return cmd_simulate(cfg, opt.out_dir);
  }
  if (name == "limit-sample") {
    if (opt.suite == "figure1") {
      if (!has_config) {
        cfg.horizon = 10.0;
        cfg.tau_max = 10.0;
      }
    } else {
      need_config();
    }
    return cmd_limit_sample(cfg, opt.out_dir, opt.suite);
  }
  if (name == "compare") {
    if (opt.suite.rfind("acceptance", 0) == 0) {
      AcceptanceOptions ao;
      ao.seed = cfg.require_seed();
      ao.workers = cfg.workers;
      ao.scratch = opt.out_dir / "scratch";
      const auto rest = opt.suite.substr(std::string("acceptance").size());
      if (!rest.empty()) {
        if (rest.front() != ':') throw ConfigError("suites are written acceptance or acceptance:1,5");
        for (const auto& piece : split(rest.substr(1), ',')) {
          try {
            ao.only.insert(std::stoi(trim(piece)));
          } catch (const std::exception&) {
            throw ConfigError("criterion '" + piece + "' is not a number");
          }
        }
      }
      const auto results = run_acceptance(ao, log);
      std::ostringstream ids;
      for (int k : ao.only) ids << k << ',';
      RunReport report("compare", cfg.canonical + "suite=acceptance:" + ids.str() + "\n", ao.seed);
      for (const auto& c : results) {
        GofReport r;
        r.test = "#" + std::to_string(c.id) + " " + c.name;
        r.reject = !c.pass;
        r.p_value = c.pass ? 1.0 : 0.0;
        r.reference = c.details;
        report.add_test(r);
        report.data()[std::to_string(c.id)] = c.data;
      }
      fs::remove_all(ao.scratch);
      return finish(report, opt.out_dir);
    }
    if (!opt.suite.empty()) throw ConfigError("unknown compare suite '" + opt.suite + "'");
    need_config();
    return cmd_compare(cfg, opt.out_dir);
  }
  if (name == "records") {
    need_config();
    return cmd_records(cfg, opt.out_dir);
  }
  if (name == "nu") {
    need_config();
    return cmd_nu(cfg, opt.out_dir);
  }
  if (name == "report") return cmd_report(opt.out_dir);
  throw ConfigError("unknown command '" + name + "'");
}

}  // namespace repp
