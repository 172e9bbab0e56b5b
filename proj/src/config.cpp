#include "sysid/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sysid/numfmt.hpp"

namespace sysid {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + value +
                      "'");
  }
  if (pos != value.size())
    throw ConfigError("key '" + key + "': trailing characters in '" + value +
                      "'");
  return out;
}

long long parse_int(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + value +
                      "'");
  }
  if (pos != value.size())
    throw ConfigError("key '" + key + "': trailing characters in '" + value +
                      "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  unsigned long long out = 0;
  try {
    out = std::stoull(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an unsigned integer");
  }
  if (pos != value.size())
    throw ConfigError("key '" + key + "': trailing characters in '" + value +
                      "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& key,
                                const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw ConfigError("key '" + key + "': empty list element");
    out.push_back(static_cast<int>(parse_int(key, item)));
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

void expect_choice(const std::string& key, const std::string& value,
                   std::initializer_list<const char*> choices) {
  for (const char* c : choices)
    if (value == c) return;
  std::string msg = "key '" + key + "': '" + value + "' is not one of {";
  bool first = true;
  for (const char* c : choices) {
    if (!first) msg += ", ";
    msg += c;
    first = false;
  }
  throw ConfigError(msg + "}");
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

AttackModel ExperimentConfig::attack_model() const {
  AttackModel a;
  a.p = p;
  a.mean = attack_mean;
  a.mean_low = attack_mean_low;
  a.mean_high = attack_mean_high;
  a.cov_scale = attack_cov;
  a.eta = eta;
  a.sign_rule =
      sign_rule == "pos_low" ? SignRule::PositiveLow : SignRule::PositiveHigh;
  if (attack == "none")
    a.strategy = AttackStrategy::None;
  else if (attack == "iid_gaussian")
    a.strategy = AttackStrategy::IidGaussian;
  else
    a.strategy = AttackStrategy::StateAdaptive;
  return a;
}

InputModel ExperimentConfig::input_model() const {
  InputModel in;
  in.gamma = gamma;
  in.m = m;
  return in;
}

X0Spec ExperimentConfig::x0_spec() const {
  return x0 == "gaussian" ? X0Spec::gaussian(x0_sigma)
                          : X0Spec::constant(x0_value);
}

std::vector<Index> ExperimentConfig::checkpoint_list() const {
  std::vector<Index> out;
  if (checkpoints == "geometric") {
    for (Index t = 50; t < T_max; t *= 2) out.push_back(t);
  }
  out.push_back(T_max);
  return out;
}

ExperimentConfig parse_config(const std::string& text, bool strict,
                              std::vector<std::string>* warnings) {
  ExperimentConfig c;
  bool seed_seen = false, p_seen = false;
  std::string p_rule;

  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");

    if (key == "generator") {
      expect_choice(key, value, {"nilpotent", "general"});
      c.generator = value;
    } else if (key == "n") {
      c.n = static_cast<int>(parse_int(key, value));
    } else if (key == "m") {
      c.m = static_cast<int>(parse_int(key, value));
    } else if (key == "r") {
      c.r = static_cast<int>(parse_int(key, value));
    } else if (key == "target_norm") {
      c.target_norm = parse_double(key, value);
    } else if (key == "k") {
      c.k = static_cast<int>(parse_int(key, value));
    } else if (key == "bcd_dist") {
      expect_choice(key, value, {"uniform", "gaussian"});
      c.bcd_dist = value;
    } else if (key == "seed") {
      c.seed = parse_u64(key, value);
      seed_seen = true;
    } else if (key == "gamma") {
      c.gamma = parse_double(key, value);
    } else if (key == "attack") {
      expect_choice(key, value, {"none", "iid_gaussian", "state_adaptive"});
      c.attack = value;
    } else if (key == "p") {
      c.p = parse_double(key, value);
      p_seen = true;
    } else if (key == "p_rule") {
      expect_choice(key, value, {"quarter_k"});
      p_rule = value;
    } else if (key == "attack_mean") {
      c.attack_mean = parse_double(key, value);
    } else if (key == "attack_mean_low") {
      c.attack_mean_low = parse_double(key, value);
    } else if (key == "attack_mean_high") {
      c.attack_mean_high = parse_double(key, value);
    } else if (key == "attack_cov") {
      c.attack_cov = parse_double(key, value);
    } else if (key == "sign_rule") {
      expect_choice(key, value, {"pos_high", "pos_low"});
      c.sign_rule = value;
    } else if (key == "eta") {
      c.eta = parse_double(key, value);
    } else if (key == "x0") {
      expect_choice(key, value, {"constant", "gaussian"});
      c.x0 = value;
    } else if (key == "x0_value") {
      c.x0_value = parse_double(key, value);
    } else if (key == "x0_sigma") {
      c.x0_sigma = parse_double(key, value);
    } else if (key == "T_max") {
      c.T_max = parse_int(key, value);
    } else if (key == "checkpoints") {
      expect_choice(key, value, {"geometric", "final"});
      c.checkpoints = value;
    } else if (key == "trials") {
      c.trials = static_cast<int>(parse_int(key, value));
    } else if (key == "delta") {
      c.delta = parse_double(key, value);
    } else if (key == "bound_c") {
      c.bound_c = parse_double(key, value);
    } else if (key == "certificate_directions") {
      c.certificate_directions = static_cast<int>(parse_int(key, value));
    } else if (key == "lad_tol") {
      c.lad_tol = parse_double(key, value);
    } else if (key == "d_list") {
      c.d_list = parse_int_list(key, value);
    } else if (key == "i_list") {
      c.i_list = parse_int_list(key, value);
    } else if (key == "tail_tol") {
      c.tail_tol = parse_double(key, value);
    } else if (key == "threads") {
      c.threads = static_cast<int>(parse_int(key, value));
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }

  auto note = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  if (!seed_seen) throw ConfigError("missing mandatory key 'seed'");
  if (c.n < 1 || c.m < 1 || c.r < 1)
    throw ConfigError("dimensions n, m, r must be positive");
  if (c.k < 1) throw ConfigError("k must be >= 1");
  if (!(c.target_norm > 0.0 && c.target_norm < 1.0))
    throw ConfigError("target_norm must lie in (0,1)");
  if (!(c.gamma > 0.0)) throw ConfigError("gamma must be > 0");
  if (c.T_max < 1) throw ConfigError("T_max must be >= 1");
  if (c.trials < 1) throw ConfigError("trials must be >= 1");
  if (!(c.delta > 0.0 && c.delta <= 1.0))
    throw ConfigError("delta must lie in (0,1]");
  if (!(c.bound_c > 0.0)) throw ConfigError("bound_c must be > 0");
  if (c.certificate_directions < 1)
    throw ConfigError("certificate_directions must be >= 1");
  if (!(c.attack_cov >= 0.0)) throw ConfigError("attack_cov must be >= 0");
  if (!(c.tail_tol > 0.0)) throw ConfigError("tail_tol must be > 0");
  if (c.threads < 0) throw ConfigError("threads must be >= 0");

  if (!p_rule.empty()) {
    if (p_seen)
      throw ConfigError("give either 'p' or 'p_rule', not both");
    c.p = 1.0 / double(4 * c.k);
    note("resolved p_rule = quarter_k to p = " + g17(c.p));
  }
  if (!(c.p >= 0.0 && c.p < 1.0)) throw ConfigError("p must lie in [0,1)");
  if (c.attack == "none" && c.p != 0.0)
    throw ConfigError("attack = none requires p = 0");

  const double p_limit = 1.0 / double(4 * c.k - 2);
  if (c.p >= p_limit) {
    const std::string msg = "Assumption 3: p >= 1/(4k-2) (p = " + g17(c.p) +
                            ", limit = " + g17(p_limit) + ")";
    if (strict) throw AssumptionError(msg);
    note("warning: " + msg);
  }

  if (c.generator == "nilpotent" && c.n <= 2 * c.k - 1)
    throw ConfigError("nilpotent generator requires n > 2k-1");

  if (c.eta < 0.0) throw ConfigError("eta must be >= 0");
  if (c.eta == 0.0 && c.attack != "none") {
    const double mean_mag =
        c.attack == "iid_gaussian"
            ? std::abs(c.attack_mean)
            : std::max(std::abs(c.attack_mean_low),
                       std::abs(c.attack_mean_high));
    c.eta = mean_mag * std::sqrt(double(c.n)) + std::sqrt(c.attack_cov);
    note("derived nominal eta = " + g17(c.eta));
  }

  if (c.d_list.empty()) {
    for (int d = 1; d <= c.k; ++d) c.d_list.push_back(d);
    note("defaulted d_list = 1.." + std::to_string(c.k));
  }
  if (c.i_list.empty()) {
    c.i_list = {0, 1, 2, 3};
    note("defaulted i_list = 0,1,2,3");
  }
  for (int d : c.d_list)
    if (d < 1 || d > c.k)
      throw ConfigError("d_list entries must lie in [1, k]");
  for (int i : c.i_list)
    if (i < 0) throw ConfigError("i_list entries must be >= 0");

  return c;
}

ExperimentConfig load_config_file(const std::string& path, bool strict,
                                  std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), strict, warnings);
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "generator = " << c.generator << "\n";
  os << "n = " << c.n << "\n";
  os << "m = " << c.m << "\n";
  os << "r = " << c.r << "\n";
  os << "target_norm = " << g17(c.target_norm) << "\n";
  os << "k = " << c.k << "\n";
  os << "bcd_dist = " << c.bcd_dist << "\n";
  os << "seed = " << c.seed << "\n";
  os << "gamma = " << g17(c.gamma) << "\n";
  os << "attack = " << c.attack << "\n";
  os << "p = " << g17(c.p) << "\n";
  os << "attack_mean = " << g17(c.attack_mean) << "\n";
  os << "attack_mean_low = " << g17(c.attack_mean_low) << "\n";
  os << "attack_mean_high = " << g17(c.attack_mean_high) << "\n";
  os << "attack_cov = " << g17(c.attack_cov) << "\n";
  os << "sign_rule = " << c.sign_rule << "\n";
  os << "eta = " << g17(c.eta) << "\n";
  os << "x0 = " << c.x0 << "\n";
  os << "x0_value = " << g17(c.x0_value) << "\n";
  os << "x0_sigma = " << g17(c.x0_sigma) << "\n";
  os << "T_max = " << c.T_max << "\n";
  os << "checkpoints = " << c.checkpoints << "\n";
  os << "trials = " << c.trials << "\n";
  os << "delta = " << g17(c.delta) << "\n";
  os << "bound_c = " << g17(c.bound_c) << "\n";
  os << "certificate_directions = " << c.certificate_directions << "\n";
  os << "lad_tol = " << g17(c.lad_tol) << "\n";
  os << "d_list = " << join_ints(c.d_list) << "\n";
  os << "i_list = " << join_ints(c.i_list) << "\n";
  os << "tail_tol = " << g17(c.tail_tol) << "\n";
  os << "threads = " << c.threads << "\n";
  return os.str();
}

}  // namespace sysid
