#include "repp/config.hpp"

#include "repp/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace repp {

namespace {

std::string where(const KeyValueBlock& kv, std::string_view key) {
  const int line = kv.line_of(key);
  return line > 0 ? " (line " + std::to_string(line) + ")" : "";
}

std::vector<double> parse_doubles(const KeyValueBlock& kv, std::string_view key) {
  std::vector<double> out;
  for (const auto& piece : split(kv.get(key), ',')) {
    try {
      out.push_back(to_double(parse_rational(trim(piece))));
    } catch (const Error&) {
      throw ConfigError("key '" + std::string(key) + "' expects numbers" + where(kv, key));
    }
  }
  return out;
}

IntervalUnion parse_set(const KeyValueBlock& kv, std::string_view key) {
  std::vector<Interval<double>> parts;
  for (const auto& piece : split(kv.get(key), ';')) {
    const auto ends = split(piece, ':');
    if (ends.size() != 2) throw ConfigError("set pieces are written lo:hi" + where(kv, key));
    parts.push_back({to_double(parse_rational(trim(ends[0]))), to_double(parse_rational(trim(ends[1])))});
  }
  return IntervalUnion(parts);
}

BoxUnion parse_boxes(const KeyValueBlock& kv, std::string_view key) {
  std::vector<Box> boxes;
  for (const auto& piece : split(kv.get(key), ';')) {
    Box b;
    for (const auto& axis : split(piece, ',')) {
      const auto ends = split(axis, ':');
      if (ends.size() != 2) throw ConfigError("box axes are written lo:hi" + where(kv, key));
      b.lo.push_back(to_double(parse_rational(trim(ends[0]))));
      b.hi.push_back(to_double(parse_rational(trim(ends[1]))));
    }
    boxes.push_back(b);
  }
  return BoxUnion(boxes);
}

NuConfig parse_nu(const KeyValueBlock& kv) {
  kv.require_only({"kind", "lambda", "matrix", "radial", "weights", "scales", "set", "boxes", "samples"},
                  "[nu]");
  NuConfig cfg;
  const std::string kind = kv.get_or("kind", "lebesgue");
  try {
    if (kind == "lebesgue") {
      cfg.spec = OuterMeasureSpec::lebesgue();
    } else if (kind == "contraction") {
      cfg.spec = OuterMeasureSpec::contraction(kv.get_double("lambda"));
    } else if (kind == "linear") {
      cfg.spec = OuterMeasureSpec::linear(parse_matrix(kv.get("matrix")), kv.get_or("radial", "false") == "true");
    } else if (kind == "mixture") {
      const auto w = parse_doubles(kv, "weights");
      const auto s = parse_doubles(kv, "scales");
      if (w.size() != 2 || s.size() != 2) throw ConfigError("mixtures need two weights and two scales" + where(kv, "weights"));
      cfg.spec = OuterMeasureSpec::mixture({w[0], s[0]}, {w[1], s[1]});
    } else {
      throw ConfigError("unknown nu kind '" + kind + "'" + where(kv, "kind"));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string(e.what()) + where(kv, "kind"));
  }
  if (kv.has("set")) cfg.set = parse_set(kv, "set");
  if (kv.has("boxes")) cfg.boxes = parse_boxes(kv, "boxes");
  if (cfg.set.empty() && cfg.boxes.empty()) throw ConfigError("[nu] needs a set or boxes");
  cfg.samples = static_cast<std::uint64_t>(kv.get_int_or("samples", 100000));
  return cfg;
}

}  // namespace

Eigen::MatrixXd parse_matrix(std::string_view text) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : split(text, ';')) {
    rows.emplace_back();
    for (const auto& v : split(row, ',')) rows.back().push_back(to_double(parse_rational(trim(v))));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != n)
      throw ConfigError("matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  return m;
}

LimitLaw law_from_kv(const KeyValueBlock& kv) {
  kv.require_only({"kind", "theta", "tau", "alpha", "d", "matrix", "period", "beta_plus"}, "[law]");
  const std::string kind = kv.get("kind");
  try {
    if (kind == "poisson2d") return LimitLaw::poisson2d();
    if (kind == "compound_poisson1d") return LimitLaw::compound1d(kv.get_double("theta"), kv.get_double_or("tau", 1.0));
    if (kind == "stacked_geometric")
      return LimitLaw::stacked_geometric(kv.get_double("alpha"), static_cast<int>(kv.get_int_or("d", 1)));
    if (kind == "poisson_multid") return LimitLaw::poisson_multi(static_cast<int>(kv.get_int("d")));
    if (kind == "stacked_linear")
      return LimitLaw::stacked_linear(parse_matrix(kv.get("matrix")), static_cast<int>(kv.get_int_or("period", 1)));
    if (kind == "ndag") return LimitLaw::ndag(parse_matrix(kv.get("matrix")), static_cast<int>(kv.get_int_or("period", 1)));
    if (kind == "hat_n") return LimitLaw::hat_n(kv.get_double("beta_plus"));
    if (kind == "double_hat_n") return LimitLaw::double_hat_n();
  } catch (const DomainError& e) {
    throw ConfigError(std::string(e.what()) + where(kv, "kind"));
  }
  throw ConfigError("unknown law '" + kind + "'" + where(kv, "kind"));
}

KeyValueBlock law_to_kv(const LimitLaw& law) {
  KeyValueBlock kv;
  kv.set("kind", to_string(law.kind));
  const auto j = law.to_json();
  for (const auto& [k, v] : j.items()) {
    if (k == "kind" || k == "big_theta" || k == "p_z1" || k == "ratio") continue;
    if (k == "matrix") {
      std::string text;
      for (const auto& row : v) {
        if (!text.empty()) text += ';';
        std::string r;
        for (const auto& x : row) r += (r.empty() ? "" : ",") + nlohmann::json(x).dump();
        text += r;
      }
      kv.set("matrix", text);
    } else if (!(law.kind == LawKind::StackedGeometric && k == "theta") &&
               !(law.kind == LawKind::HatN && k == "theta") &&
               !((law.kind == LawKind::StackedLinear || law.kind == LawKind::NDag) && k == "theta")) {
      kv.set(k, v.dump());
    }
  }
  return kv;
}

std::uint64_t RunConfig::require_seed() const {
  if (!seed) throw ConfigError("a seed is required in acceptance mode (set seed = ... or --seed)");
  return *seed;
}

const SystemSpec& RunConfig::require_system() const {
  if (!system) throw ConfigError("missing section [system]");
  return *system;
}

const ObservableSpec& RunConfig::require_observable() const {
  if (!observable) throw ConfigError("missing section [observable]");
  return *observable;
}

const LimitLaw& RunConfig::require_law() const {
  if (!law) throw ConfigError("missing section [law]");
  return *law;
}

RunConfig parse_run_config(std::string_view text) {
  const SectionedConfig sc = parse_sectioned(text);
  const KeyValueBlock& root = sc.root;
  root.require_only({"seed", "mode", "runs", "n", "horizon", "tau_max", "lookahead", "radius", "q", "workers", "grid",
                     "artifact"},
                    "the top level");
  for (const auto& [name, block] : sc.sections)
    if (name != "system" && name != "observable" && name != "law" && name != "records" && name != "nu")
      throw ConfigError("unknown section [" + name + "]");

  RunConfig cfg;
  if (root.has("seed")) cfg.seed = root.get_u64("seed");
  const std::string mode = root.get_or("mode", "acceptance");
  if (mode != "acceptance" && mode != "explore")
    throw ConfigError("mode must be acceptance or explore" + where(root, "mode"));
  cfg.acceptance_mode = mode == "acceptance";
  cfg.runs = static_cast<std::uint64_t>(root.get_int_or("runs", 10));
  if (cfg.runs == 0) throw ConfigError("runs must be positive" + where(root, "runs"));
  if (root.has("n")) cfg.n_ladder = parse_doubles(root, "n");
  for (double n : cfg.n_ladder)
    if (!(n >= 1.0) || n != std::floor(n)) throw ConfigError("n must be a positive integer" + where(root, "n"));
  cfg.horizon = root.get_double_or("horizon", 1.0);
  cfg.tau_max = root.get_double_or("tau_max", 10.0);
  if (!(cfg.horizon > 0.0) || !(cfg.tau_max > 0.0))
    throw ConfigError("horizon and tau_max must be positive");
  cfg.lookahead = static_cast<std::uint64_t>(root.get_int_or("lookahead", 64));
  cfg.radius = root.get_double_or("radius", 3.0);
  if (!(cfg.radius > 0.0)) throw ConfigError("radius must be positive" + where(root, "radius"));
  const std::string q = root.get_or("q", "auto");
  cfg.q = q == "auto" ? -1 : static_cast<int>(root.get_int("q"));
  if (q != "auto" && cfg.q < 0) throw ConfigError("q must be auto or non-negative" + where(root, "q"));
  cfg.workers = static_cast<unsigned>(root.get_int_or("workers", 0));
  cfg.grid = root.get_or("grid", "standard");
  if (cfg.grid != "standard" && cfg.grid != "none")
    throw ConfigError("grid must be standard or none" + where(root, "grid"));
  cfg.artifact = root.get_or("artifact", "");

  if (sc.has_section("system")) cfg.system = SystemSpec::from_kv(sc.section("system"));
  if (sc.has_section("observable")) cfg.observable = ObservableSpec::from_kv(sc.section("observable"));
  if (cfg.system && cfg.observable && cfg.system->dimension != cfg.observable->dimension())
    throw ConfigError("observable dimension does not match the system");
  if (sc.has_section("law")) cfg.law = law_from_kv(sc.section("law"));
  if (sc.has_section("records")) {
    const auto& r = sc.section("records");
    r.require_only({"a", "b", "cap", "mode", "random_zeta"}, "[records]");
    cfg.records.a = r.get_double_or("a", cfg.records.a);
    cfg.records.b = r.get_double_or("b", cfg.records.b);
    cfg.records.cap = r.get_double_or("cap", cfg.records.cap);
    const std::string rm = r.get_or("mode", "standard");
    if (rm != "standard" && rm != "example53") throw ConfigError("records mode must be standard or example53" + where(r, "mode"));
    cfg.records.example53 = rm == "example53";
    const std::string rz = r.get_or("random_zeta", "false");
    if (rz != "true" && rz != "false") throw ConfigError("random_zeta must be true or false" + where(r, "random_zeta"));
    cfg.records.random_zeta = rz == "true";
    if (!(cfg.records.a > 0.0 && cfg.records.a < cfg.records.b))
      throw ConfigError("records need 0 < a < b" + where(r, "a"));
  }
  if (sc.has_section("nu")) cfg.nu = parse_nu(sc.section("nu"));

  std::ostringstream canon;
  canon << root.to_text();
  for (const auto& [name, block] : sc.sections) canon << '[' << name << "]\n" << block.to_text();
  cfg.canonical = canon.str();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace repp
