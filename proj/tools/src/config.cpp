#include "softmin/app/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "softmin/errors.hpp"

namespace softmin::app {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid config:";
  for (const auto& p : problems) out += "\n  " + p;
  return out;
}

const std::set<std::string> kTopKeys = {"experiment", "objective", "methods", "sweep",
                                        "n",          "schedule",  "integrator", "init",
                                        "stop",       "runs",      "seed",       "threads",
                                        "trace_stride", "output"};
const std::set<std::string> kScheduleKeys = {"beta0", "gamma"};
const std::set<std::string> kIntegratorKeys = {"dt", "sigma", "max_steps"};
const std::set<std::string> kInitKeys = {"kind", "center", "radius", "gauss_std", "which_minimum",
                                         "pinned"};
const std::set<std::string> kStopKeys = {"kind",    "targets", "epsilon",  "watched",
                                         "quorum",  "threshold"};

template <class E>
std::optional<E> enum_from(std::string_view s, std::initializer_list<E> values) {
  for (E v : values) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

// Collects problems while reading; every accessor returns nullopt on failure
// so parsing can continue and report everything at once.
class Reader {
 public:
  std::vector<std::string> problems;

  void problem(std::string msg) { problems.push_back(std::move(msg)); }

  void check_keys(const YAML::Node& node, const std::set<std::string>& known,
                  const std::string& prefix) {
    if (!node.IsMap()) {
      problem(prefix.empty() ? "document must be a mapping" : prefix + ": expected a mapping");
      return;
    }
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!known.contains(key)) problem("unknown key '" + prefix + (prefix.empty() ? "" : ".") + key + "'");
    }
  }

  std::optional<std::string> text(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) {
      problem(path + ": expected a string");
      return std::nullopt;
    }
    return node.as<std::string>();
  }

  std::optional<double> number(const YAML::Node& node, const std::string& path) {
    double v = 0.0;
    if (!node.IsScalar() || !YAML::convert<double>::decode(node, v) || !std::isfinite(v)) {
      problem(path + ": expected a finite number");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::int64_t> integer(const YAML::Node& node, const std::string& path) {
    const auto v = number(node, path);
    if (!v) return std::nullopt;
    if (*v != std::floor(*v) || std::abs(*v) > 9.0e15) {
      problem(path + ": expected an integer");
      return std::nullopt;
    }
    return static_cast<std::int64_t>(*v);
  }

  std::optional<std::vector<double>> numbers(const YAML::Node& node, const std::string& path) {
    if (!node.IsSequence()) {
      problem(path + ": expected a list of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
      const auto v = number(node[i], fmt::format("{}[{}]", path, i));
      if (!v) return std::nullopt;
      out.push_back(*v);
    }
    return out;
  }

  std::optional<std::vector<Point>> points(const YAML::Node& node, const std::string& path) {
    if (!node.IsSequence()) {
      problem(path + ": expected a list of points");
      return std::nullopt;
    }
    std::vector<Point> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
      auto p = numbers(node[i], fmt::format("{}[{}]", path, i));
      if (!p) return std::nullopt;
      out.push_back(std::move(*p));
    }
    return out;
  }

  // Reads `node` when present and checks `ok`, reporting `bound` otherwise.
  template <class T, class Read, class Ok>
  void bounded(const YAML::Node& node, const std::string& path, T& dst, Read read, Ok ok,
               std::string_view bound) {
    if (!node) return;
    const auto v = read(node, path);
    if (!v) return;
    if (!ok(*v)) {
      problem(fmt::format("{} = {} violates {}", path, *v, bound));
      return;
    }
    dst = static_cast<T>(*v);
  }
};

std::string fmt_number(double v) { return fmt::format("{}", v); }

std::string fmt_list(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt_number(values[i]);
  }
  return out + "]";
}

std::string fmt_points(const std::vector<Point>& points) {
  std::string out = "[";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out += ", ";
    out += fmt_list(points[i]);
  }
  return out + "]";
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

RunConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError({std::string("malformed document: ") + e.what()});
  }
  Reader rd;
  rd.check_keys(root, kTopKeys, "");
  if (!rd.problems.empty() && !root.IsMap()) throw ConfigError(rd.problems);

  for (const auto& [section, keys] :
       {std::pair{"schedule", &kScheduleKeys}, std::pair{"integrator", &kIntegratorKeys},
        std::pair{"init", &kInitKeys}, std::pair{"stop", &kStopKeys}}) {
    if (root[section]) rd.check_keys(root[section], *keys, section);
  }

  std::vector<std::string> missing;
  for (const char* key : {"experiment", "objective"}) {
    if (!root[key]) missing.push_back(key);
  }
  if (!missing.empty()) {
    std::string names;
    for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
    rd.problem("missing required key(s): " + names);
    throw ConfigError(rd.problems);
  }

  std::optional<ExperimentKind> kind;
  if (auto s = rd.text(root["experiment"], "experiment")) {
    try {
      kind = experiment_kind_from_string(*s);
    } catch (const std::exception&) {
      rd.problem("experiment: unknown experiment '" + *s +
                 "' (expected exit_time, transition_time, particle_sweep, entry_time or "
                 "single_trajectory)");
    }
  }
  std::optional<ObjectiveSpec> objective;
  if (auto s = rd.text(root["objective"], "objective")) {
    try {
      objective = parse_objective(*s);
    } catch (const std::exception& e) {
      rd.problem(std::string("objective: ") + e.what());
    }
  }
  if (!kind || !objective) throw ConfigError(rd.problems);

  RunConfig cfg;
  ExperimentSetup& s = cfg.setup;
  s = default_setup(*kind, *objective);

  if (const auto node = root["methods"]) {
    if (!node.IsSequence() || node.size() == 0) {
      rd.problem("methods: expected a non-empty list of method names");
    } else {
      std::vector<MethodSpec> methods;
      for (std::size_t i = 0; i < node.size(); ++i) {
        const auto name = rd.text(node[i], fmt::format("methods[{}]", i));
        if (!name) continue;
        try {
          methods.push_back(method_by_name(*name));
        } catch (const NotFoundError& e) {
          rd.problem(fmt::format("methods[{}]: {}", i, e.what()));
        }
      }
      s.methods = std::move(methods);
    }
  }
  if (const auto node = root["sweep"]) {
    if (auto v = rd.numbers(node, "sweep")) s.sweep = std::move(*v);
  }

  const auto read_num = [&rd](const YAML::Node& n, const std::string& p) { return rd.number(n, p); };
  const auto read_int = [&rd](const YAML::Node& n, const std::string& p) { return rd.integer(n, p); };
  const auto positive = [](auto v) { return v > 0; };
  const auto non_negative = [](auto v) { return v >= 0; };

  rd.bounded(root["n"], "n", s.n, read_int, positive, "n >= 1");
  rd.bounded(root["runs"], "runs", s.runs, read_int, positive, "runs >= 1");
  rd.bounded(root["threads"], "threads", s.threads, read_int,
             [](std::int64_t v) { return v >= 1 && v <= 1024; }, "1 <= threads <= 1024");
  rd.bounded(root["trace_stride"], "trace_stride", s.trace_stride, read_int, non_negative,
             "trace_stride >= 0");
  if (const auto node = root["seed"]) {
    std::uint64_t seed = 0;
    if (!node.IsScalar() || !YAML::convert<std::uint64_t>::decode(node, seed)) {
      rd.problem("seed: expected a non-negative 64-bit integer");
    } else {
      s.master_seed = seed;
    }
  }
  if (const auto node = root["output"]) {
    if (auto v = rd.text(node, "output")) cfg.output = *v;
  }

  if (const auto sec = root["schedule"]; sec && sec.IsMap()) {
    rd.bounded(sec["beta0"], "schedule.beta0", s.beta0, read_num, positive, "beta0 > 0");
    rd.bounded(sec["gamma"], "schedule.gamma", s.gamma, read_num, positive, "gamma > 0");
  }
  if (const auto sec = root["integrator"]; sec && sec.IsMap()) {
    rd.bounded(sec["dt"], "integrator.dt", s.dt, read_num, positive, "dt > 0");
    rd.bounded(sec["sigma"], "integrator.sigma", s.sigma, read_num, non_negative, "sigma >= 0");
    rd.bounded(sec["max_steps"], "integrator.max_steps", s.max_steps, read_int, positive,
               "max_steps >= 1");
  }
  if (const auto sec = root["init"]; sec && sec.IsMap()) {
    if (const auto node = sec["kind"]) {
      if (auto v = rd.text(node, "init.kind")) {
        if (auto k = enum_from(*v, {InitKind::ball_around_minimum, InitKind::circle_around_point,
                                    InitKind::explicit_positions})) {
          s.init.kind = *k;
        } else {
          rd.problem("init.kind: unknown kind '" + *v + "'");
        }
      }
    }
    if (const auto node = sec["which_minimum"]) {
      if (auto v = rd.text(node, "init.which_minimum")) {
        if (auto k = enum_from(*v, {MinimumSelector::first, MinimumSelector::highest,
                                    MinimumSelector::lowest})) {
          s.init.which_minimum = *k;
        } else {
          rd.problem("init.which_minimum: unknown selector '" + *v + "'");
        }
      }
    }
    if (const auto node = sec["center"]) {
      if (auto v = rd.numbers(node, "init.center")) s.init.center = std::move(*v);
    }
    rd.bounded(sec["radius"], "init.radius", s.init.radius, read_num, non_negative, "radius >= 0");
    rd.bounded(sec["gauss_std"], "init.gauss_std", s.init.gauss_std, read_num, non_negative,
               "gauss_std >= 0");
    if (const auto node = sec["pinned"]) {
      if (auto v = rd.points(node, "init.pinned")) s.init.pinned = std::move(*v);
    }
  }
  if (const auto sec = root["stop"]; sec && sec.IsMap()) {
    if (const auto node = sec["kind"]) {
      if (auto v = rd.text(node, "stop.kind")) {
        if (auto k = enum_from(*v, {StopKind::none, StopKind::enter_ball,
                                    StopKind::exit_maximizing_regime,
                                    StopKind::coordinate_threshold})) {
          s.stop.kind = *k;
        } else {
          rd.problem("stop.kind: unknown kind '" + *v + "'");
        }
      }
    }
    if (const auto node = sec["targets"]) {
      if (auto v = rd.points(node, "stop.targets")) s.stop.targets = std::move(*v);
    }
    rd.bounded(sec["epsilon"], "stop.epsilon", s.stop.epsilon, read_num, positive, "epsilon > 0");
    rd.bounded(sec["threshold"], "stop.threshold", s.stop.threshold, read_num,
               [](double) { return true; }, "");
    if (const auto node = sec["watched"]) {
      if (node.IsNull()) {
        s.stop.watched.reset();
      } else if (auto v = rd.integer(node, "stop.watched")) {
        if (*v < 0) {
          rd.problem(fmt::format("stop.watched = {} violates watched >= 0", *v));
        } else {
          s.stop.watched = static_cast<std::size_t>(*v);
        }
      }
    }
    if (const auto node = sec["quorum"]) {
      if (node.IsScalar() && node.as<std::string>() == "first_particle") {
        s.stop.quorum = 0.0;
      } else {
        rd.bounded(node, "stop.quorum", s.stop.quorum, read_num,
                   [](double v) { return v > 0.0 && v <= 1.0; },
                   "0 < quorum <= 1 (or first_particle)");
      }
    }
  }

  if (!rd.problems.empty()) throw ConfigError(rd.problems);
  try {
    softmin::validate(s);
  } catch (const ContractViolation& e) {
    throw ConfigError({e.what()});
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string normalize(const RunConfig& config) {
  const ExperimentSetup& s = config.setup;
  std::string out;
  auto line = [&out](std::string_view key, const std::string& value) {
    out += fmt::format("{}: {}\n", key, value);
  };
  auto sub = [&out](std::string_view key, const std::string& value) {
    out += fmt::format("  {}: {}\n", key, value);
  };

  line("experiment", std::string(to_string(s.kind)));
  line("objective", "\"" + objective_label(s.objective) + "\"");
  std::string methods = "[";
  for (std::size_t i = 0; i < s.methods.size(); ++i) {
    methods += (i ? ", " : "") + s.methods[i].name;
  }
  line("methods", methods + "]");
  line("sweep", fmt_list(s.sweep));
  line("n", fmt::format("{}", s.n));
  out += "schedule:\n";
  sub("beta0", fmt_number(s.beta0));
  sub("gamma", fmt_number(s.gamma));
  out += "integrator:\n";
  sub("dt", fmt_number(s.dt));
  sub("sigma", fmt_number(s.sigma));
  sub("max_steps", fmt::format("{}", s.max_steps));
  out += "init:\n";
  sub("kind", std::string(to_string(s.init.kind)));
  sub("which_minimum", std::string(to_string(s.init.which_minimum)));
  sub("center", fmt_list(s.init.center));
  sub("radius", fmt_number(s.init.radius));
  sub("gauss_std", fmt_number(s.init.gauss_std));
  sub("pinned", fmt_points(s.init.pinned));
  out += "stop:\n";
  sub("kind", std::string(to_string(s.stop.kind)));
  sub("targets", fmt_points(s.stop.targets));
  sub("epsilon", fmt_number(s.stop.epsilon));
  sub("watched", s.stop.watched ? fmt::format("{}", *s.stop.watched) : "~");
  sub("quorum", s.stop.quorum > 0.0 ? fmt_number(s.stop.quorum) : "first_particle");
  sub("threshold", fmt_number(s.stop.threshold));
  line("runs", fmt::format("{}", s.runs));
  line("seed", fmt::format("{}", s.master_seed));
  line("threads", fmt::format("{}", s.threads));
  line("trace_stride", fmt::format("{}", s.trace_stride));
  if (!config.output.empty()) line("output", "\"" + config.output + "\"");
  return out;
}

}  // namespace softmin::app
