#include "ratelab/cli.hpp"

#include <filesystem>

#include "ratelab/calibrate.hpp"
#include "ratelab/config_io.hpp"
#include "ratelab/engine.hpp"
#include "ratelab/errors.hpp"
#include "ratelab/svg_plot.hpp"

namespace ratelab::cli {

using nlohmann::json;

namespace {

// Maps the error hierarchy onto exit codes and message classes.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigNotFound& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kValidation;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kRuntime;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kRuntime;
  } catch (const SimulationError& e) {
    err << "simulation error: " << e.what() << "\n";
    return kRuntime;
  } catch (const ArithmeticOverflow& e) {
    err << "arithmetic error: " << e.what() << "\n";
    return kRuntime;
  } catch (const Error& e) {
    err << "runtime error: " << e.what() << "\n";
    return kRuntime;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return kRuntime;
  }
}

json metrics_to_json(const std::vector<Metrics>& metrics, Decimal band) {
  json j;
  j["band"] = band.to_string();
  j["strategies"] = json::array();
  for (const auto& m : metrics) {
    j["strategies"].push_back({
        {"name", m.strategy},
        {"max_rate", m.max_rate.to_string()},
        {"inflection_step", m.inflection_step},
        {"rate_at_inflection", m.rate_at_inflection.to_string()},
        {"overshoot", m.overshoot ? json(m.overshoot->to_string()) : json(nullptr)},
        {"settling_time", m.settling_time},
        {"settled", m.settled},
        {"time_above_target", m.time_above_target},
    });
  }
  return j;
}

}  // namespace

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig config = load_run_config(options.config_path);
    if (options.backend) config.backend = backend_from_string(*options.backend);
    if (options.seed) config.scenario.seed = *options.seed;
    if (options.band) {
      try {
        config.band = Decimal::parse(*options.band);
      } catch (const Error& e) {
        throw ValidationError(std::string("--band: ") + e.what());
      }
      if (config.band <= Decimal::zero()) throw ValidationError("--band must be positive");
    }
    if (options.out) config.trace_path = *options.out;
    if (!config.trace_path) {
      throw ValidationError("no trace output path: pass --out or set output.trace");
    }
    const std::filesystem::path trace_path = *config.trace_path;
    const std::filesystem::path metrics_path =
        config.metrics_path ? std::filesystem::path(*config.metrics_path)
                            : std::filesystem::path(trace_path.string() + ".metrics.json");

    const SimTrace trace = run(config.strategies, config.scenario, config.backend);
    const auto metrics = compute_metrics(trace, config.band);
    write_run_artifacts(trace_path, trace, config);
    write_file_atomic(metrics_path, metrics_to_json(metrics, config.band).dump(2) + "\n");

    out << "wrote " << trace.rows.size() << " rows to " << trace_path.string() << " (backend "
        << to_string(config.backend) << ")\n";
    for (const auto& m : metrics) {
      out << "  " << m.strategy << ": max_rate=" << m.max_rate.to_string()
          << " rate_at_inflection(step " << m.inflection_step
          << ")=" << m.rate_at_inflection.to_string()
          << " settling_time=" << m.settling_time << (m.settled ? "" : " (never settled)")
          << "\n";
    }
    return static_cast<int>(kOk);
  });
}

int cmd_plot(const std::string& trace_csv, const std::string& out_svg,
             const std::optional<std::string>& title, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SimTrace trace = trace_from_csv(read_file(trace_csv));
    PlotOptions options;
    options.title = title.value_or(std::filesystem::path(trace_csv).stem().string());
    write_file_atomic(out_svg, render_svg(trace, options));
    out << "wrote " << out_svg << " (" << trace.strategies.size() << " rate series)\n";
    return static_cast<int>(kOk);
  });
}

int cmd_calibrate(const std::string& targets_path, const std::string& space_path,
                  const std::optional<std::string>& out_path, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&] {
    const CalibrationProblem problem = calibration_problem_from_json(load_json_file(targets_path));
    const SearchSpace space = search_space_from_json(load_json_file(space_path));
    const CalibrationResult result = calibrate(problem, space);
    const std::string report = to_json(result).dump(2) + "\n";
    if (out_path) write_file_atomic(*out_path, report);

    out << "evaluated " << result.evaluated << " grid points; max relative miss "
        << result.max_miss.to_string() << (result.feasible ? "" : " (INFEASIBLE)") << "\n";
    out << "best: m=" << result.best.m.to_string() << " n=" << result.best.n.to_string()
        << " k_p=" << result.best.k_p.to_string() << " k_i=" << result.best.k_i.to_string()
        << " k_d=" << result.best.k_d.to_string() << "\n";
    for (const auto& o : result.outcomes) {
      out << "  " << (o.within ? "ok   " : "MISS ") << o.name << ": rate=" << o.rate.to_string()
          << " target=" << o.target.to_string() << " +/- " << o.tolerance.to_string() << "\n";
    }
    return static_cast<int>(kOk);
  });
}

int cmd_replay(const std::string& trace_csv, const std::optional<std::string>& backend,
               bool regen_golden, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (regen_golden) {
      if (backend) throw ValidationError("--regen-golden rewrites with the recorded backend");
      regenerate(trace_csv);
      out << "regenerated " << trace_csv << "\n";
      return static_cast<int>(kOk);
    }
    std::optional<Backend> override;
    if (backend) override = backend_from_string(*backend);
    const ReplayReport report = replay(trace_csv, override);
    if (!report.ok) {
      err << report.describe() << "\n";
      return static_cast<int>(kRuntime);
    }
    out << report.describe() << "\n";
    return static_cast<int>(kOk);
  });
}

}  // namespace ratelab::cli
