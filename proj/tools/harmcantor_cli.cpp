// Command-line front end. A JSON config file supplies defaults; flags given
// on the command line override individual fields.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "harmcantor/driver.hpp"

namespace {

using harmcantor::ConfigError;
using nlohmann::json;

struct Flag {
  std::string name;  // command-line spelling without dashes
  std::string key;   // config field
};

const std::vector<Flag>& value_flags() {
  static const std::vector<Flag> f{
      {"d", "d"},           {"k", "k"},
      {"kernel", "kernel"}, {"polynomial", "polynomial"},
      {"mode", "mode"},     {"M", "M"},
      {"depth", "depth"},   {"inverse-radii", "inverse_radii"},
      {"m", "m"},           {"level", "level"},
      {"eps-min", "eps_min"}, {"eps-max", "eps_max"},
      {"eps-count", "eps_count"}, {"points", "points"},
      {"tol", "tol"},       {"c-open", "c_open"},
      {"seed", "seed"},     {"threads", "threads"},
      {"samples", "samples"}, {"trials", "trials"},
      {"R", "R"},           {"r", "r"},
      {"max-n", "max_n"},   {"ratio-min", "ratio_min"},
      {"ratio-max", "ratio_max"}, {"growth-bound", "growth_bound"},
      {"farfield-ceiling", "farfield_ceiling"}, {"residual-tol", "residual_tol"},
      {"out", "out"}};
  return f;
}

// Converts a flag's text to the JSON type of the field's default.
json typed_value(const std::string& key, const std::string& text, const json& like) {
  try {
    if (key == "polynomial") return json::parse(text);
    if (key == "inverse_radii") {
      json arr = json::array();
      std::size_t start = 0;
      while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!piece.empty()) arr.push_back(piece);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      return arr;
    }
    std::size_t used = 0;
    if (like.is_number_unsigned()) {
      if (!text.empty() && text[0] == '-') throw std::out_of_range("negative");
      const auto v = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing");
      return v;
    }
    if (like.is_number_integer()) {
      const auto v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing");
      return v;
    }
    if (like.is_number_float()) {
      const auto v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing");
      return v;
    }
    return text;
  } catch (const std::exception&) {
    throw ConfigError("--" + key + ": cannot parse '" + text + "'");
  }
}

const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> m{
      {"verify-identities", "exact annihilation, decomposition and the combinatorial identity"},
      {"verify-reflectionless", "ball integrals of admissible kernels vanish at interior points"},
      {"verify-packing", "grid cube packing of a ball, for a range of R/r"},
      {"build-tree", "materialize the Cantor construction"},
      {"check-structure", "distance and containment properties per generation"},
      {"growth", "mu(B(z,r)) / r^(d-1) over random balls"},
      {"compare-farfield", "empirical constant of the far-field comparison"},
      {"sweep", "max |T_eps| over eps for an admissible kernel"},
      {"riesz-contrast", "the same sweep for x_1/|x|^d"},
      {"dump-tree", "write tree.jsonl"}};
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harmonic-kernel Cantor measure experiments"};
  app.require_subcommand(1);
  std::string config_path;
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> opts;
  bool dump = false, no_validate = false;
  std::vector<CLI::App*> subs;
  for (const auto& name : harmcantor::subcommands()) {
    auto* sub = app.add_subcommand(name, descriptions().at(name));
    sub->add_option("--config", config_path, "JSON config file");
    for (const auto& f : value_flags()) opts[name + "/" + f.key] = sub->add_option("--" + f.name, raw[f.key]);
    sub->add_flag("--dump", dump, "also write tree.jsonl");
    sub->add_flag("--no-validate", no_validate, "skip the separation threshold check");
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    json cfg = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("config: cannot open " + config_path);
      try {
        cfg = json::parse(in);
      } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
      if (!cfg.is_object()) throw ConfigError("config: top level must be a JSON object");
    }
    std::string chosen;
    for (auto* s : subs)
      if (s->parsed()) chosen = s->get_name();
    if (cfg.contains("subcommand") && cfg["subcommand"] != chosen)
      std::cerr << "note: config subcommand overridden by '" << chosen << "'\n";
    cfg["subcommand"] = chosen;
    const json defaults = harmcantor::to_json(harmcantor::RunConfig{});
    for (const auto& f : value_flags()) {
      if (opts[chosen + "/" + f.key]->count() == 0) continue;
      cfg[f.key] = typed_value(f.key, raw[f.key], defaults.contains(f.key) ? defaults[f.key] : json());
    }
    if (dump) cfg["dump"] = true;
    if (no_validate) cfg["validate_schedule"] = false;
    const auto config = harmcantor::config_from_json(cfg);
    const auto res = harmcantor::run(config);
    if (res.exit_code == 0 || res.exit_code == 1) {
      std::cout << chosen << ": " << (res.exit_code == 0 ? "PASS" : "FAIL") << "  (" << config.out
                << "/report.json)\n";
    } else {
      std::cerr << chosen << ": " << res.message << '\n';
    }
    return res.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
