#ifndef SYSID_CONFIG_HPP
#define SYSID_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sysid/sim.hpp"

namespace sysid {

// Flat key = value experiment configuration. parse_config resolves every
// default (p-rules, derived eta, d/i lists) so a serialized config re-parses
// to the same resolved state.
struct ExperimentConfig {
  // system
  std::string generator = "nilpotent";  // nilpotent | general
  int n = 30, m = 3, r = 3;
  double target_norm = 0.6;
  int k = 5;
  std::string bcd_dist = "uniform";  // uniform | gaussian
  std::uint64_t seed = 0;

  // inputs
  double gamma = 10.0;

  // attack process
  std::string attack = "none";  // none | iid_gaussian | state_adaptive
  double p = 0.0;
  double attack_mean = 0.0;
  double attack_mean_low = 300.0;
  double attack_mean_high = 1000.0;
  double attack_cov = 25.0;
  std::string sign_rule = "pos_high";  // pos_high | pos_low
  double eta = 0.0;

  // initial state
  std::string x0 = "constant";  // constant | gaussian
  double x0_value = 0.0;
  double x0_sigma = 1.0;

  // experiment schedule
  Index T_max = 1000;
  std::string checkpoints = "geometric";  // geometric | final
  int trials = 1;
  double delta = 0.05;
  double bound_c = 1.0;
  int certificate_directions = 200;

  // estimator / realization
  double lad_tol = 1e-9;
  std::vector<int> d_list;  // defaults to 1..k
  std::vector<int> i_list;  // defaults to 0..3
  double tail_tol = 1e-12;

  int threads = 0;  // 0 -> hardware concurrency

  AttackModel attack_model() const;
  InputModel input_model() const;
  X0Spec x0_spec() const;
  // Checkpoint sample counts: 50 * 2^j up to T_max plus T_max itself, or
  // just T_max under the "final" schedule.
  std::vector<Index> checkpoint_list() const;
};

// Parses the documented key = value format ('#' starts a comment). Unknown
// keys and constraint violations throw ConfigError naming the key or the
// violated assumption; assumption-level findings go to `warnings` unless
// `strict`, in which case they throw AssumptionError.
ExperimentConfig parse_config(const std::string& text, bool strict = false,
                              std::vector<std::string>* warnings = nullptr);

ExperimentConfig load_config_file(const std::string& path, bool strict = false,
                                  std::vector<std::string>* warnings = nullptr);

// Canonical rendering of a resolved config; parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace sysid

#endif
