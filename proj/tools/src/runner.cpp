#include "softmin/app/runner.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <vector>

#include <fmt/format.h>

#include "softmin/errors.hpp"
#include "softmin/theory.hpp"

#ifndef SOFTMIN_VERSION
#define SOFTMIN_VERSION "unknown"
#endif

namespace softmin::app {

namespace fs = std::filesystem;

namespace {

std::string num(double v) { return fmt::format("{}", v); }

std::string opt(const std::optional<double>& v) { return v ? num(*v) : "NA"; }

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void check_stream(const std::ofstream& out, const fs::path& path) {
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

// Releases rows to the file in plan order however trials complete.
class OrderedWriter {
 public:
  OrderedWriter(std::ofstream& out, fs::path path, std::size_t rows)
      : out_(out), path_(std::move(path)), pending_(rows) {}

  void put(std::size_t index, std::string row) {
    pending_[index] = std::move(row);
    while (next_ < pending_.size() && pending_[next_]) {
      out_ << *pending_[next_] << '\n';
      pending_[next_].reset();
      ++next_;
    }
    out_.flush();
    check_stream(out_, path_);
  }

 private:
  std::ofstream& out_;
  fs::path path_;
  std::vector<std::optional<std::string>> pending_;
  std::size_t next_ = 0;
};

void write_plots(const ExperimentSetup& s, const ExperimentResult& result, const fs::path& dir) {
  const std::string experiment(to_string(s.kind));
  const std::string xname(sweep_name(s.kind));
  for (std::size_t mi = 0; mi < s.methods.size(); ++mi) {
    const fs::path path = dir / (experiment + "_" + s.methods[mi].name + ".dat");
    std::ofstream out = open_out(path);
    if (s.kind == ExperimentKind::single_trajectory) {
      out << "# x: t, y: distance of the lowest particle to the nearest minimum\n";
      for (std::size_t i = 0; i < result.plans.size(); ++i) {
        if (result.plans[i].method_index != mi || result.plans[i].run_index != 0) continue;
        const auto& o = result.outcomes[i];
        const std::size_t m = std::min(o.trace.size(), o.trace_distance.size());
        for (std::size_t k = 0; k < m; ++k) out << num(o.trace[k].time) << ' ' << num(o.trace_distance[k]) << '\n';
        break;
      }
    } else {
      const bool log_mean = s.kind == ExperimentKind::exit_time;
      out << "# x: " << xname << ", y: " << (log_mean ? "log mean exit time" : "mean hitting time")
          << '\n';
      for (const Cell& c : result.cells) {
        if (c.method_index != mi) continue;
        std::optional<double> y = c.stats.mean_time;
        if (y && log_mean) y = std::log(*y);
        out << opt(c.sweep_key) << ' ' << opt(y) << '\n';
      }
    }
    check_stream(out, path);
  }
  if (s.kind == ExperimentKind::exit_time) {
    const fs::path path = dir / (experiment + "_theory.dat");
    std::ofstream out = open_out(path);
    out << "# x: a, y: theory exponent (f(x*) - J0 - 1/beta) / sigma\n";
    for (const Cell& c : result.cells) {
      if (c.method_index == 0) out << opt(c.sweep_key) << ' ' << opt(c.theory_exponent) << '\n';
    }
    check_stream(out, path);
  }
}

void write_trace(const ExperimentSetup& s, const ExperimentResult& result, const fs::path& dir) {
  const fs::path path = dir / "trace.csv";
  std::ofstream out = open_out(path);
  out << "method,run_index,step,time,beta,energy,min_f,distance\n";
  for (std::size_t i = 0; i < result.plans.size(); ++i) {
    const auto& plan = result.plans[i];
    const auto& o = result.outcomes[i];
    for (std::size_t k = 0; k < o.trace.size(); ++k) {
      const StepRecord& r = o.trace[k];
      out << fmt::format("{},{},{},{},{},{},{},{}\n", s.methods[plan.method_index].name,
                         plan.run_index, r.step, num(r.time), num(r.beta), num(r.energy),
                         num(r.min_f), k < o.trace_distance.size() ? num(o.trace_distance[k]) : "NA");
    }
  }
  check_stream(out, path);
}

nlohmann::json rate_fits(const ExperimentSetup& s, const ExperimentResult& result) {
  nlohmann::json fits = nlohmann::json::array();
  for (std::size_t i = 0; i < result.plans.size(); ++i) {
    const auto& plan = result.plans[i];
    const auto& o = result.outcomes[i];
    nlohmann::json entry = {{"method", s.methods[plan.method_index].name},
                            {"run_index", plan.run_index},
                            {"lambda_theory", opt_json(plan.spec.strong_convexity_lambda)}};
    std::vector<double> t;
    std::vector<double> d;
    for (std::size_t k = 0; k < std::min(o.trace.size(), o.trace_distance.size()); ++k) {
      t.push_back(o.trace[k].time);
      d.push_back(o.trace_distance[k]);
    }
    try {
      const RateFit fit = fit_convergence_rate(t, d, plan.spec.strong_convexity_lambda);
      entry["lambda_fit"] = fit.lambda_fit;
      entry["r_squared"] = fit.r_squared;
      entry["samples_used"] = fit.samples_used;
    } catch (const ContractViolation& e) {
      entry["lambda_fit"] = nullptr;
      entry["error"] = e.what();
    }
    fits.push_back(std::move(entry));
  }
  return fits;
}

}  // namespace

std::string csv_header() {
  return "experiment,objective,params,method,schedule,n,d,beta0,gamma,sigma,dt,sweep_key,"
         "run_index,seed,hit,hitting_time,steps_used,theory_exponent,censored_flag";
}

std::string format_row(const ExperimentSetup& setup, const TrialPlan& plan,
                       const TrialOutcome& outcome) {
  const TrialResult& r = outcome.result;
  const MethodSpec& method = setup.methods.at(plan.method_index);
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                     to_string(setup.kind), plan.spec.name, format_params(plan.spec), method.name,
                     to_string(plan.schedule.kind), plan.n, plan.spec.dimension,
                     num(plan.schedule.beta0), num(plan.schedule.factor), num(plan.cfg.sigma),
                     num(plan.cfg.dt), opt(plan.sweep_key), plan.run_index, plan.seed,
                     r.hit ? 1 : 0, opt(r.hitting_time), r.steps_used, opt(r.theory_exponent),
                     r.hit ? 0 : 1);
}

nlohmann::json summary_json(const RunConfig& config, const ExperimentResult& result) {
  const ExperimentSetup& s = config.setup;
  nlohmann::json cells = nlohmann::json::array();
  for (const Cell& c : result.cells) {
    cells.push_back({{"sweep", std::string(sweep_name(s.kind))},
                     {"sweep_key", opt_json(c.sweep_key)},
                     {"method", s.methods.at(c.method_index).name},
                     {"count", c.stats.count},
                     {"hits", c.stats.hits},
                     {"censored", c.stats.censored},
                     {"diverged", c.stats.diverged},
                     {"flagged", c.stats.flagged()},
                     {"mean_time", opt_json(c.stats.mean_time)},
                     {"std_time", opt_json(c.stats.std_time)},
                     {"theory_exponent", opt_json(c.theory_exponent)}});
  }
  nlohmann::json divergences = nlohmann::json::array();
  for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
    const auto& o = result.outcomes[i];
    if (!o.result.diverged) continue;
    const auto& plan = result.plans[i];
    divergences.push_back({{"row", i},
                           {"method", s.methods.at(plan.method_index).name},
                           {"sweep_key", opt_json(plan.sweep_key)},
                           {"run_index", plan.run_index},
                           {"seed", plan.seed},
                           {"step", o.result.steps_used},
                           {"message", o.error}});
  }
  nlohmann::json j = {{"version", SOFTMIN_VERSION},
                      {"config", normalize(config)},
                      {"cells", std::move(cells)},
                      {"divergences", std::move(divergences)}};
  if (s.kind == ExperimentKind::single_trajectory) j["rate_fits"] = rate_fits(s, result);
  return j;
}

int run(RunConfig config, const fs::path& out_dir, const RunOptions& options) {
  if (options.seed) config.setup.master_seed = *options.seed;
  if (options.threads) config.setup.threads = *options.threads;
  config.output = out_dir.string();
  const ExperimentSetup& s = config.setup;

  try {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

    const fs::path csv_path = out_dir / "results.csv";
    std::ofstream csv = open_out(csv_path);
    csv << csv_header() << '\n';
    check_stream(csv, csv_path);

    std::vector<TrialPlan> plans;
    try {
      plans = plan_trials(s);
    } catch (const ContractViolation& e) {
      if (options.log) *options.log << "config error: " << e.what() << '\n';
      return exit_config_error;
    }
    OrderedWriter writer(csv, csv_path, plans.size());
    const ExperimentResult result =
        run_experiment(s, [&](std::size_t i, const TrialOutcome& outcome) {
          writer.put(i, format_row(s, plans[i], outcome));
        });
    csv.close();
    check_stream(csv, csv_path);

    const fs::path json_path = out_dir / "summary.json";
    std::ofstream json = open_out(json_path);
    json << summary_json(config, result).dump(2) << '\n';
    check_stream(json, json_path);

    write_plots(s, result, out_dir);
    if (s.kind == ExperimentKind::single_trajectory) write_trace(s, result, out_dir);

    bool diverged = false;
    for (const Cell& c : result.cells) {
      diverged = diverged || c.stats.diverged > 0;
      if (options.log) {
        const auto short_num = [](const std::optional<double>& v) {
          return v ? fmt::format("{:.4g}", *v) : std::string("NA");
        };
        *options.log << fmt::format("{:>8} {:<20} hits {:>4}/{:<4} mean {:<10} std {:<10}{}\n",
                                    opt(c.sweep_key), s.methods[c.method_index].name,
                                    c.stats.hits, c.stats.count, short_num(c.stats.mean_time),
                                    short_num(c.stats.std_time),
                                    c.stats.flagged() ? " [censored]" : "");
      }
    }
    return diverged ? exit_divergence : exit_ok;
  } catch (const IoError& e) {
    if (options.log) *options.log << "i/o error: " << e.what() << '\n';
    return exit_io_failure;
  }
}

}  // namespace softmin::app
