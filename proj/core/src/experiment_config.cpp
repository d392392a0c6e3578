#include <cmath>
#include <fstream>
#include <istream>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hessdamp/error.hpp"
#include "hessdamp/experiment.hpp"
#include "hessdamp/problems.hpp"

namespace hessdamp {

namespace {

namespace pt = boost::property_tree;

constexpr std::string_view kRunPrefix = "run:";

void reject_unknown(const pt::ptree& section, const std::string& name,
                    const std::set<std::string>& allowed) {
  for (const auto& [key, value] : section) {
    if (!allowed.count(key)) {
      throw Error(ErrorCode::kParseError, "unknown key '" + key + "' in [" + name + "]");
    }
  }
}

std::optional<std::string> get(const pt::ptree& section, const std::string& key) {
  if (auto v = section.get_child_optional(pt::ptree::path_type(key, '\0'))) return v->data();
  return std::nullopt;
}

double real(const std::string& text, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw Error(ErrorCode::kParseError, key + ": expected a number, got '" + text + "'");
  }
  return v;
}

RunSpec parse_run(const pt::ptree& section, const std::string& label, const Problem& p) {
  reject_unknown(section, std::string(kRunPrefix) + label,
                 {"algo", "alpha", "beta", "theta", "step", "x0", "x1", "tol", "max_iter",
                  "perturb"});
  RunSpec r;
  r.label = label;
  const auto algo = get(section, "algo");
  if (!algo) throw Error(ErrorCode::kParseError, "[run:" + label + "] needs 'algo'");
  r.config.variant = parse_variant(*algo);
  if (auto v = get(section, "alpha")) r.config.alpha = real(*v, "alpha");
  if (auto v = get(section, "beta")) r.config.beta = real(*v, "beta");
  if (auto v = get(section, "theta")) r.config.theta = real(*v, "theta");
  r.config.s = 1.0 / p.lipschitz();
  if (auto v = get(section, "step"); v && *v != "1/L") r.config.s = real(*v, "step");
  const auto x0 = get(section, "x0");
  if (!x0) throw Error(ErrorCode::kParseError, "[run:" + label + "] needs 'x0'");
  r.x0 = parse_point(*x0, p.dimension());
  if (auto v = get(section, "x1")) r.x1 = parse_point(*v, p.dimension());
  if (auto v = get(section, "tol")) {
    r.stop.tol = *v == "none" ? std::nullopt : std::optional<double>(real(*v, "tol"));
  }
  if (auto v = get(section, "max_iter")) {
    const double m = real(*v, "max_iter");
    if (!(m >= 1) || m != std::floor(m)) {
      throw Error(ErrorCode::kParseError, "max_iter must be a positive integer");
    }
    r.stop.max_iter = static_cast<std::int64_t>(m);
  }
  if (auto v = get(section, "perturb")) r.config.perturb = parse_perturbation(*v);
  return r;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& is) {
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kParseError, e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  ExperimentConfig cfg;
  cfg.runs.clear();
  const auto exp = tree.get_child_optional(pt::ptree::path_type("experiment", '\0'));
  if (!exp) throw Error(ErrorCode::kParseError, "missing [experiment] section");
  reject_unknown(*exp, "experiment", {"name", "problem", "seeds", "emit", "out_dir"});
  cfg.name = get(*exp, "name").value_or("custom");
  const auto problem = get(*exp, "problem");
  if (!problem) throw Error(ErrorCode::kParseError, "[experiment] needs 'problem'");
  cfg.problem = *problem;
  if (auto v = get(*exp, "seeds")) cfg.seeds = parse_seeds(*v);
  if (auto v = get(*exp, "out_dir")) cfg.outputs = *v;
  if (auto v = get(*exp, "emit")) {
    cfg.emit.clear();
    std::string_view rest = *v;
    while (!rest.empty()) {
      const auto pos = rest.find(',');
      std::string_view item = rest.substr(0, pos);
      while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
      while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
      if (!item.empty()) cfg.emit.insert(parse_emit(item));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
  }

  const Problem p = builtin_problem(cfg.problem);
  for (const auto& [name, section] : tree) {
    if (name == "experiment") continue;
    if (name.rfind(kRunPrefix, 0) != 0 || name.size() == kRunPrefix.size()) {
      throw Error(ErrorCode::kParseError, "unexpected section or key '" + name + "'");
    }
    cfg.runs.push_back(parse_run(section, name.substr(kRunPrefix.size()), p));
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  return parse_experiment_config(is);
}

}  // namespace hessdamp
