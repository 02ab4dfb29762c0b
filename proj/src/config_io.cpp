#include "mpqkd/config_io.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "mpqkd/format.hpp"

namespace mpqkd {
namespace {

struct Key {
  std::string name;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::string origin;
  std::string note;
};

double to_double(const std::string& key, const std::string& v) {
  try {
    return parse_num(v);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (!(d >= 0) || d != std::floor(d) || d > 9.0e18) throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  return static_cast<std::uint64_t>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError(key, "expected true/false, got '" + v + "'");
}

template <class Member>
Key num(std::string name, Member member, std::string origin, std::string note) {
  return {name,
          [member](const ScenarioConfig& c) {
            ScenarioConfig copy = c;
            return fmt_num(member(copy));
          },
          [member, name](ScenarioConfig& c, const std::string& v) { member(c) = to_double(name, v); }, std::move(origin),
          std::move(note)};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    const std::string ref = "reference", design = "design";
    k.push_back(num("detector.eta_d0", [](ScenarioConfig& c) -> double& { return c.detector.eta_d0; }, ref, "detector efficiency, left"));
    k.push_back(num("detector.eta_d1", [](ScenarioConfig& c) -> double& { return c.detector.eta_d1; }, ref, "detector efficiency, right"));
    k.push_back(num("detector.pd0", [](ScenarioConfig& c) -> double& { return c.detector.pd0; }, ref, "dark-count probability per gate, left"));
    k.push_back(num("detector.pd1", [](ScenarioConfig& c) -> double& { return c.detector.pd1; }, ref, "dark-count probability per gate, right"));
    for (const std::string party : {"alice", "bob"}) {
      auto src = [party](ScenarioConfig& c) -> SourceModel& { return party == "alice" ? c.alice : c.bob; };
      k.push_back(num(party + ".mu", [src](ScenarioConfig& c) -> double& { return src(c).mu; }, ref, "signal mean photon number"));
      k.push_back(num(party + ".nu", [src](ScenarioConfig& c) -> double& { return src(c).nu; }, ref, "decoy mean photon number"));
      k.push_back(num(party + ".p_mu", [src](ScenarioConfig& c) -> double& { return src(c).p_mu; }, ref, "signal probability"));
      k.push_back(num(party + ".p_nu", [src](ScenarioConfig& c) -> double& { return src(c).p_nu; }, ref, "decoy probability"));
      k.push_back(num(party + ".p_o", [src](ScenarioConfig& c) -> double& { return src(c).p_o; }, ref, "vacuum probability, 1 - p_mu - p_nu"));
    }
    k.push_back(num("link.distance_km", [](ScenarioConfig& c) -> double& { return c.link.total_distance_km; }, design, "Alice-Bob fiber length"));
    k.push_back(num("link.loss_db_per_km", [](ScenarioConfig& c) -> double& { return c.link.loss_db_per_km; }, ref, "fiber loss"));
    k.push_back(num("link.alice_fraction", [](ScenarioConfig& c) -> double& { return c.link.alice_fraction; }, ref, "share of fiber between Alice and Charlie (symmetric split)"));
    k.push_back({"misalignment.enabled", [](const ScenarioConfig& c) { return std::string(c.misalignment.enabled ? "true" : "false"); },
                 [](ScenarioConfig& c, const std::string& v) { c.misalignment.enabled = to_bool("misalignment.enabled", v); }, design,
                 "ideal interference unless enabled"});
    k.push_back(num("misalignment.e_hom", [](ScenarioConfig& c) -> double& { return c.misalignment.e_hom; }, ref, "interference misalignment error rate"));
    k.push_back(num("misalignment.delta_f_hz", [](ScenarioConfig& c) -> double& { return c.misalignment.delta_f_hz; }, ref, "laser frequency difference"));
    k.push_back(num("misalignment.omega_fiber", [](ScenarioConfig& c) -> double& { return c.misalignment.omega_fiber; }, ref, "fiber phase drift rate, rad/s"));
    k.push_back(num("misalignment.clock_hz", [](ScenarioConfig& c) -> double& { return c.misalignment.clock_hz; }, ref, "system clock frequency"));
    k.push_back({"strategy.kind", [](const ScenarioConfig& c) { return std::string(to_string(c.strategy.kind)); },
                 [](ScenarioConfig& c, const std::string& v) { c.strategy.kind = parse_strategy(v); }, design, "original | flexible"});
    k.push_back(num("strategy.p_save", [](ScenarioConfig& c) -> double& { return c.strategy.p_save; }, design, "not fixed by the reference setup; use optimize"));
    k.push_back({"strategy.interval", [](const ScenarioConfig& c) { return std::to_string(c.strategy.interval); },
                 [](ScenarioConfig& c, const std::string& v) { c.strategy.interval = to_uint("strategy.interval", v); }, ref,
                 "maximal pairing interval l"});
    k.push_back(num("security.eps_cor", [](ScenarioConfig& c) -> double& { return c.eps.eps_cor; }, design, "correctness"));
    k.push_back(num("security.eps_prime", [](ScenarioConfig& c) -> double& { return c.eps.eps_prime; }, design, "secrecy term"));
    k.push_back(num("security.eps_hat", [](ScenarioConfig& c) -> double& { return c.eps.eps_hat; }, design, "secrecy term"));
    k.push_back(num("security.eps_pa", [](ScenarioConfig& c) -> double& { return c.eps.eps_pa; }, design, "privacy amplification"));
    k.push_back(num("security.eps_pe", [](ScenarioConfig& c) -> double& { return c.eps.eps_pe; }, design, "failure probability of each Chernoff bound"));
    k.push_back(num("protocol.rounds", [](ScenarioConfig& c) -> double& { return c.rounds; }, ref, "number of rounds N"));
    k.push_back({"protocol.phase_slices", [](const ScenarioConfig& c) { return std::to_string(c.phase_slices); },
                 [](ScenarioConfig& c, const std::string& v) {
                   const auto n = to_uint("protocol.phase_slices", v);
                   if (n > 1u << 20) throw ConfigError("protocol.phase_slices", "too large");
                   c.phase_slices = static_cast<int>(n);
                 },
                 ref, "phase slices M for X-basis sifting"});
    k.push_back(num("protocol.ec_efficiency", [](ScenarioConfig& c) -> double& { return c.ec_efficiency; }, design, "error-correction efficiency f"));
    k.push_back({"protocol.mode", [](const ScenarioConfig& c) { return std::string(to_string(c.mode)); },
                 [](ScenarioConfig& c, const std::string& v) { c.mode = parse_mode(v); }, design, "asymptotic | finite"});
    k.push_back({"protocol.x_sift", [](const ScenarioConfig& c) { return std::string(to_string(c.sift)); },
                 [](ScenarioConfig& c, const std::string& v) { c.sift = parse_sift(v); }, design,
                 "Monte Carlo X-basis phase window: matched (acceptance 2/M) | wide (window 2π/M)"});
    return k;
  }();
  return table;
}

const Key* find_key(const std::string& name) {
  for (const auto& k : keys())
    if (k.name == name) return &k;
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

void set_config_value(ScenarioConfig& c, const std::string& key, const std::string& value) {
  const Key* k = find_key(key);
  if (!k) throw ConfigError(key, "unknown key");
  k->set(c, value);
}

ScenarioConfig parse_config(std::string_view text, const std::string& origin) {
  ScenarioConfig c;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where, "expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!find_key(key)) throw ConfigError(key, "unknown key (" + where + ")");
    if (!seen.insert(key).second) throw ConfigError(key, "repeated key (" + where + ")");
    set_config_value(c, key, value);
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path.string(), "cannot open config file");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string serialize_config(const ScenarioConfig& c) {
  std::string out;
  for (const auto& k : keys()) out += k.name + " = " + k.get(c) + "\n";
  return out;
}

void save_config(const ScenarioConfig& c, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError(path.string(), "cannot write config file");
  f << serialize_config(c);
}

std::vector<DefaultInfo> explain_defaults() {
  const ScenarioConfig d;
  std::vector<DefaultInfo> out;
  for (const auto& k : keys()) out.push_back({k.name, k.get(d), k.origin, k.note});
  return out;
}

}  // namespace mpqkd
