// Experiment configuration files.
//
// Grammar: the sectioned key-value format of kv.hpp. Root keys:
//   seed      = u64                 (required unless mode = explore)
//   mode      = acceptance | explore
//   runs      = M                   ensemble size
//   n         = n1[,n2,...]         ladder of series lengths
//   horizon   = H                   time window [0, H)
//   tau_max   = cap                 mark cap of scalar marks
//   lookahead = steps               extra steps scanned for A^(q)
//   radius    = R                   spatial window of vector marks
//   q         = auto | j            cluster separation
//   workers   = threads             0 = all cores
//   grid      = standard | none     rectangle families for comparisons
//   artifact  = dir                 simulate output read by `compare`
// Sections: [system] and [observable] (see systems.hpp, observables.hpp),
// [law] (kind = poisson2d | compound_poisson1d | stacked_geometric |
// poisson_multid | stacked_linear | ndag | hat_n | double_hat_n, with
// theta, tau, alpha, d, matrix = "a,b;c,d", period, beta_plus),
// [records] (a, b, cap, mode = standard | example53, random_zeta) and
// [nu] (kind = lebesgue | contraction | linear | mixture, lambda,
// matrix, radial, weights = w1,w2, scales = s1,s2, set = "lo:hi;...",
// boxes = "x0:x1,y0:y1;...", samples).
#pragma once

#include "repp/kv.hpp"
#include "repp/limits.hpp"
#include "repp/nu.hpp"
#include "repp/observables.hpp"
#include "repp/systems.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace repp {

struct RecordsConfig {
  double a = 0.05;
  double b = 1.0;
  /// Initial mark cap of record runs; raised when the running minimum at
  /// time a is not yet inside the window.
  double cap = 400.0;
  bool example53 = false;
  /// Draws a fresh point zeta = c * pi (c rational, uniform) for every run.
  bool random_zeta = false;
};

struct NuConfig {
  OuterMeasureSpec spec;
  IntervalUnion set;
  BoxUnion boxes;
  std::uint64_t samples = 100000;
};

struct RunConfig {
  /// Canonical text of the parsed configuration (hashed into reports).
  std::string canonical;
  std::optional<std::uint64_t> seed;
  bool acceptance_mode = true;
  std::uint64_t runs = 10;
  std::vector<double> n_ladder{1e4};
  double horizon = 1.0;
  double tau_max = 10.0;
  std::uint64_t lookahead = 64;
  /// Spatial window radius of multi-dimensional marks.
  double radius = 3.0;
  /// -1 selects q automatically.
  int q = -1;
  unsigned workers = 0;
  std::string grid = "standard";
  std::string artifact;
  std::optional<SystemSpec> system;
  std::optional<ObservableSpec> observable;
  std::optional<LimitLaw> law;
  RecordsConfig records;
  std::optional<NuConfig> nu;

  /// Throws ConfigError when acceptance mode lacks a seed.
  std::uint64_t require_seed() const;
  const SystemSpec& require_system() const;
  const ObservableSpec& require_observable() const;
  const LimitLaw& require_law() const;
};

RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

LimitLaw law_from_kv(const KeyValueBlock& kv);
KeyValueBlock law_to_kv(const LimitLaw& law);
Eigen::MatrixXd parse_matrix(std::string_view text);

}  // namespace repp
