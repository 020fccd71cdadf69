#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <thread>
#include <unistd.h>

#include "posegen/errors.hpp"
#include "posegen/eval.hpp"
#include "posegen/generator.hpp"
#include "posegen/io.hpp"

namespace posegen::cli {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

unsigned default_threads() {
  if (const char* env = std::getenv("POSEGEN_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::optional<OutputFormat> parse_format(const std::string& text) {
  if (text == "multig2o") return OutputFormat::multig2o;
  if (text == "single_g2o") return OutputFormat::single_g2o;
  if (text == "both") return OutputFormat::both;
  return std::nullopt;
}

fs::path single_g2o_path(const GenerateOptions& opts) {
  if (opts.format == OutputFormat::single_g2o) {
    return opts.out_path;
  }
  fs::path p = opts.out_path;
  p += ".g2o";
  return p;
}

namespace {

const char* format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::multig2o: return "multig2o";
    case OutputFormat::single_g2o: return "single_g2o";
    case OutputFormat::both: return "both";
  }
  return "?";
}

// Runs `body`, mapping library exceptions onto exit codes.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace

int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    GenerationConfig cfg = opts.config_path ? load_config(*opts.config_path) : GenerationConfig{};
    if (opts.seed) cfg.master_seed = *opts.seed;
    if (opts.info_mode) cfg.info_mode = *opts.info_mode;

    const auto t0 = Clock::now();
    const MultiGraph multi = generate(cfg, opts.threads);
    const double gen_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

    if (opts.format == OutputFormat::multig2o || opts.format == OutputFormat::both) {
      write_multig2o(multi, opts.out_path, opts.overwrite);
    }
    if (opts.format == OutputFormat::single_g2o || opts.format == OutputFormat::both) {
      const fs::path single = single_g2o_path(opts);
      std::error_code ec;
      if (fs::exists(single, ec) && !opts.overwrite) {
        throw IoError("output file exists (pass --overwrite to replace)", single);
      }
      if (single.has_parent_path()) {
        fs::create_directories(single.parent_path(), ec);
      }
      write_concatenated_g2o(multi, single);
    }

    const DatasetStats stats = dataset_stats(multi);
    nlohmann::json summary = {
        {"command", "generate"},
        {"agents", cfg.n_agents},
        {"steps", cfg.n_steps},
        {"seed", cfg.master_seed},
        {"info_mode", to_string(cfg.info_mode)},
        {"format", format_name(opts.format)},
        {"odometry_edges", stats.odometry_edges},
        {"intra_lc", stats.intra_lc_count},
        {"inter_lc", stats.inter_lc_count},
        {"total_constraints", stats.total_constraints},
        {"generation_seconds", gen_seconds},
    };
    out << summary.dump() << '\n';
    out << "generated " << cfg.n_agents << " agent(s) x " << cfg.n_steps << " steps (seed "
        << cfg.master_seed << "): " << stats.total_constraints << " constraints, "
        << stats.loop_closures() << " loop closures, in " << std::fixed << std::setprecision(3)
        << gen_seconds << " s\n";
    return static_cast<int>(kOk);
  });
}

int cmd_stats(const fs::path& dataset, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MultiGraph multi = parse_multig2o(dataset);
    const DatasetStats stats = dataset_stats(multi);

    nlohmann::json per_agent = nlohmann::json::array();
    double pooled_sum = 0.0;
    std::size_t pooled_n = 0;
    bool all_truth = !multi.agents.empty();
    out << "agents: " << multi.agents.size() << '\n';
    for (std::size_t a = 0; a < multi.agents.size(); ++a) {
      const auto& agent = multi.agents[a];
      out << "agent" << a + 1 << ": nodes=" << agent.node_count()
          << " odometry=" << agent.odometry.size() << " intra_lc=" << agent.intra_lc.size();
      nlohmann::json row = {{"agent", a + 1},
                            {"nodes", agent.node_count()},
                            {"odometry_edges", agent.odometry.size()},
                            {"intra_lc", agent.intra_lc.size()}};
      if (agent.ground_truth.empty()) {
        all_truth = false;
        out << " odometry_ape=unavailable\n";
        row["odometry_ape"] = nullptr;
      } else {
        std::vector<ScaledPose> truth;
        for (const auto& p : agent.ground_truth) truth.push_back(to_scaled(p, multi.scale));
        const auto est = dead_reckon(std::span<const Edge>(agent.odometry), truth.front());
        const double ape = mean_ape_translation(est, truth);
        pooled_sum += ape * static_cast<double>(truth.size());
        pooled_n += truth.size();
        out << " odometry_ape=" << std::setprecision(6) << std::fixed << ape << '\n';
        row["odometry_ape"] = ape;
      }
      per_agent.push_back(row);
    }
    out << "odometry edges: " << stats.odometry_edges << '\n'
        << "intra-agent loop closures: " << stats.intra_lc_count << '\n'
        << "inter-agent loop closures: " << stats.inter_lc_count << '\n'
        << "total constraints: " << stats.total_constraints << '\n';
    nlohmann::json summary = {{"command", "stats"},
                              {"agents", multi.agents.size()},
                              {"odometry_edges", stats.odometry_edges},
                              {"intra_lc", stats.intra_lc_count},
                              {"inter_lc", stats.inter_lc_count},
                              {"total_constraints", stats.total_constraints},
                              {"per_agent", per_agent}};
    if (pooled_n > 0 && all_truth) {
      const double pooled = pooled_sum / static_cast<double>(pooled_n);
      out << "odometry APE (pooled): " << std::setprecision(6) << std::fixed << pooled << '\n';
      summary["odometry_ape"] = pooled;
    } else {
      out << "odometry APE (pooled): unavailable\n";
      summary["odometry_ape"] = nullptr;
    }
    out << summary.dump() << '\n';
    return static_cast<int>(kOk);
  });
}

std::optional<SweepKind> parse_sweep(const std::string& text) {
  if (text == "agents") return SweepKind::agents;
  if (text == "steps") return SweepKind::steps;
  if (text == "radius") return SweepKind::radius;
  return std::nullopt;
}

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::agents: return "agents";
    case SweepKind::steps: return "steps";
    case SweepKind::radius: return "radius";
  }
  return "?";
}

namespace {

GenerationConfig apply_sweep(GenerationConfig cfg, SweepKind kind, double value) {
  switch (kind) {
    case SweepKind::agents:
      cfg.n_agents = static_cast<std::size_t>(value);
      cfg.initial_poses.clear();
      break;
    case SweepKind::steps:
      cfg.n_steps = static_cast<std::size_t>(value);
      break;
    case SweepKind::radius:
      cfg.intra_lc.radius = value;
      cfg.inter_lc.radius = value;
      break;
  }
  return cfg;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchOptions& opts) {
  const std::size_t reps = std::max<std::size_t>(1, opts.repetitions);
  const fs::path scratch =
      fs::temp_directory_path() / ("posegen-bench-" + std::to_string(::getpid()));
  std::vector<GenerationConfig> configs;
  for (double value : opts.values) configs.push_back(apply_sweep(opts.base, opts.sweep, value));

  std::vector<std::vector<double>> times(configs.size());
  std::vector<std::size_t> constraints(configs.size(), 0);
  auto run_once = [&](std::size_t i) {
    const auto t0 = Clock::now();
    const MultiGraph multi = generate(configs[i], opts.threads);
    if (opts.include_io) {
      write_multig2o(multi, scratch, true);
    }
    const double t = std::chrono::duration<double>(Clock::now() - t0).count();
    constraints[i] = dataset_stats(multi).total_constraints;
    return t;
  };
  // One untimed pass, then repetitions interleaved across sweep points so
  // that slow phases of the machine do not land on a single point.
  for (std::size_t i = 0; i < configs.size(); ++i) run_once(i);
  for (std::size_t r = 0; r < reps; ++r) {
    for (std::size_t i = 0; i < configs.size(); ++i) times[i].push_back(run_once(i));
  }

  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto& t = times[i];
    rows.push_back({opts.values[i], median(t), *std::min_element(t.begin(), t.end()),
                    *std::max_element(t.begin(), t.end()), constraints[i]});
  }
  if (opts.include_io) {
    std::error_code ec;
    fs::remove_all(scratch, ec);
  }
  return rows;
}

void write_bench_csv(const BenchOptions& opts, const std::vector<BenchRow>& rows,
                     std::ostream& out) {
  out << "sweep,value,repetitions,median_seconds,min_seconds,max_seconds,total_constraints\n";
  for (const auto& row : rows) {
    out << to_string(opts.sweep) << ',' << row.value << ',' << opts.repetitions << ','
        << std::setprecision(9) << row.median_seconds << ',' << row.min_seconds << ','
        << row.max_seconds << ',' << row.total_constraints << '\n';
    out << std::defaultfloat << std::setprecision(6);
  }
}

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    write_bench_csv(opts, run_bench(opts), out);
    return static_cast<int>(kOk);
  });
}

}  // namespace posegen::cli
