#include "whf/cli/run.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <exception>
#include <optional>

#include "whf/cli/experiments.hpp"
#include "whf/errors.hpp"
#include "whf/parallel.hpp"
#include "whf/version.hpp"

namespace whf::cli {

namespace {

struct Options {
  std::string subcommand;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool svg = false;
  std::optional<double> tolerance_scale;
  std::string model;
  std::string grid;
  std::optional<double> c;
  std::optional<std::size_t> n_paths;
  std::optional<double> dt;
  std::vector<std::string> set;
};

// Settings that cannot change any number in a CSV stay out of its header.
bool affects_results(const std::string& echo) {
  return echo.rfind("simulation.threads", 0) != 0 && echo.rfind("output.", 0) != 0;
}

void apply_set(RunConfig& cfg, const std::string& item) {
  const auto eq = item.find('=');
  const auto dot = item.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError("--set expects section.key=value, got '" + item + "'");
  }
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
    return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
  };
  cfg.apply(trim(item.substr(0, dot)), trim(item.substr(dot + 1, eq - dot - 1)), trim(item.substr(eq + 1)));
}

RunConfig build_config(const Options& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  for (const auto& s : o.set) apply_set(cfg, s);
  if (!o.model.empty()) cfg.apply("model", "spec", o.model);
  if (!o.grid.empty()) cfg.apply("experiment", "grid", o.grid);
  if (o.c) cfg.apply("experiment", "c", format_double(*o.c));
  if (o.tolerance_scale) cfg.apply("experiment", "tolerance_scale", format_double(*o.tolerance_scale));
  if (o.seed) cfg.apply("simulation", "seed", std::to_string(*o.seed));
  if (o.n_paths) cfg.apply("simulation", "n_paths", std::to_string(*o.n_paths));
  if (o.dt) cfg.apply("simulation", "dt", format_double(*o.dt));
  if (o.threads) cfg.apply("simulation", "threads", std::to_string(*o.threads));
  if (!o.out.empty()) cfg.apply("output", "dir", o.out);
  if (o.svg) cfg.apply("output", "svg", "true");
  cfg.finalize();
  if (cfg.out_dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    cfg.out_dir = env && *env ? env : "whfact_out";
  }
  return cfg;
}

struct Outcome {
  std::optional<ExperimentResult> result;
  std::exception_ptr error;
};

int classify(std::exception_ptr e, std::ostream& err) {
  try {
    std::rethrow_exception(e);
  } catch (const NumericalError& x) {
    err << "numerical failure: " << x.what() << '\n';
    return kNumericalError;
  } catch (const ConfigError& x) {
    err << "configuration error: " << x.what() << '\n';
    return kParseError;
  } catch (const UnsupportedModel& x) {
    err << "unsupported model: " << x.what() << '\n';
    return kParseError;
  } catch (const DomainError& x) {
    err << "invalid parameter: " << x.what() << '\n';
    return kParseError;
  } catch (const std::exception& x) {
    err << "error: " << x.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Wiener-Hopf factorization experiments for time-inhomogeneous diffusions", "whfact"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", std::string("whfact ") + kVersion);
  app.add_option("--config", o.config, "INI-style configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, std::string("Output directory (default $") + kOutDirEnv + " or ./whfact_out)");
  app.add_option("--seed", o.seed, "Base seed of all random streams");
  app.add_option("--threads", o.threads, "Worker threads (0 = hardware parallelism)")->check(CLI::NonNegativeNumber);
  app.add_flag("--svg", o.svg, "Also write SVG line plots");
  app.add_option("--tolerance-scale", o.tolerance_scale, "Multiply every tolerance")->check(CLI::PositiveNumber);
  app.add_option("--model", o.model, "const:v=..,sigma=.. | onejump:v0=..,v1=..,t0=.. | table1:<col> | file");
  app.add_option("--grid", o.grid, "Grid such as s=0:0.1:1,t=+0.05:+0.05:+2");
  app.add_option("--c", o.c, "Killing rate / test-function rate")->check(CLI::PositiveNumber);
  app.add_option("--n-paths", o.n_paths, "Monte Carlo paths");
  app.add_option("--dt", o.dt, "Simulation time step")->check(CLI::PositiveNumber);
  app.add_option("--set", o.set, "Override section.key=value (repeatable)");
  for (const auto& name : experiment_names()) {
    app.add_subcommand(name, "Run the " + name + " checks")->callback([&o, name] { o.subcommand = name; });
  }
  app.add_subcommand("all", "Run every experiment")->callback([&o] { o.subcommand = "all"; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "argument error: " << e.what() << '\n';
    return kParseError;
  }

  RunConfig cfg;
  try {
    cfg = build_config(o);
  } catch (...) {
    return classify(std::current_exception(), err);
  }

  const std::vector<std::string> names =
      o.subcommand == "all" ? experiment_names() : std::vector<std::string>{o.subcommand};
  const auto start = std::chrono::steady_clock::now();

  // Experiments fan out over the pool; each then runs single-threaded, so the
  // numbers do not depend on the split.
  std::vector<Outcome> outcomes(names.size());
  const unsigned workers = resolve_threads(cfg.threads);
  RunConfig inner = cfg;
  if (names.size() > 1 && workers > 1) inner.threads = 1;
  parallel_for(names.size(), names.size() > 1 ? cfg.threads : 1, [&](std::size_t i) {
    try {
      outcomes[i].result = run_experiment(names[i], inner);
    } catch (...) {
      outcomes[i].error = std::current_exception();
    }
  });
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<std::string> meta{std::string("whfact ") + kVersion, "subcommand: " + o.subcommand};
  for (const auto& e : cfg.echo) {
    if (affects_results(e)) meta.push_back("setting: " + e);
  }

  nlohmann::ordered_json manifest;
  manifest["tool"] = "whfact";
  manifest["version"] = kVersion;
  manifest["subcommand"] = o.subcommand;
  manifest["arguments"] = args;
  manifest["settings"] = cfg.echo;
  manifest["seed"] = cfg.sim.seed.value_or(SimConfig{}.seed);
  manifest["threads"] = workers;
  manifest["compiler"] = __VERSION__;
  manifest["wall_time_seconds"] = wall;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();

  int code = kPass;
  std::size_t total_failures = 0;
  try {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (outcomes[i].error) {
        const int c = classify(outcomes[i].error, err);
        err << "  in experiment " << names[i] << '\n';
        code = std::max(code, c);
        summary[names[i]] = {{"error", c}};
        continue;
      }
      const ExperimentResult& r = *outcomes[i].result;
      Table reports = report_table(r.name, r.reports);
      reports.meta = meta;
      reports.meta.push_back("experiment: " + r.name);
      files.push_back(write_text(cfg.out_dir, r.name + ".csv", render_csv(reports)).string());
      for (const Table& t : r.tables) {
        Table copy = t;
        copy.meta.insert(copy.meta.begin(), meta.begin(), meta.end());
        files.push_back(write_text(cfg.out_dir, r.name + "_" + t.name + ".csv", render_csv(copy)).string());
      }
      if (cfg.svg) {
        for (const Plot& p : r.plots) files.push_back(write_text(cfg.out_dir, p.name + ".svg", render_svg(p)).string());
      }
      const std::size_t fails = r.failures();
      total_failures += fails;
      for (const auto& rep : r.reports) {
        if (!rep.pass) {
          out << (rep.informational ? "INFO " : "FAIL ") << rep.identity << " |" << format_double(rep.abs_error)
              << "| > " << format_double(rep.tolerance) << '\n';
        }
      }
      out << r.name << ": " << r.reports.size() << " reports, " << fails << " failed\n";
      summary[r.name] = {{"reports", r.reports.size()}, {"failed", fails}};
    }
    manifest["files"] = files;
    manifest["summary"] = summary;
    write_text(cfg.out_dir, "manifest_" + o.subcommand + ".json", manifest.dump(2) + "\n");
  } catch (...) {
    return classify(std::current_exception(), err);
  }
  if (code == kPass && total_failures > 0) code = kCheckFailed;
  return code;
}

}  // namespace whf::cli
