#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "commands.hpp"

namespace {

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace posegen;
  using namespace posegen::cli;

  CLI::App app{"posegen: collaborative pose-graph dataset generator"};
  app.require_subcommand(1);

  unsigned threads = default_threads();
  app.add_option("--threads", threads, "Worker threads (default: $POSEGEN_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a dataset from a JSON config");
  GenerateOptions gopts;
  std::string config_path, format = "multig2o", info_mode;
  std::uint64_t seed = 0;
  gen->add_option("-c,--config", config_path, "JSON config (defaults when omitted)")
      ->check(CLI::ExistingFile);
  gen->add_option("-o,--out", gopts.out_path, "Output directory (multig2o) or file (single_g2o)")
      ->required();
  gen->add_option("-f,--format", format, "multig2o | single_g2o | both")
      ->check(CLI::IsMember({"multig2o", "single_g2o", "both"}));
  gen->add_option("--info-mode", info_mode, "exact | diagonal (overrides config)")
      ->check(CLI::IsMember({"exact", "diagonal"}));
  auto* seed_opt = gen->add_option("-s,--seed", seed, "Master seed (overrides config)");
  gen->add_flag("--overwrite", gopts.overwrite, "Replace an existing dataset");

  // stats
  auto* stats = app.add_subcommand("stats", "Report counts and odometry APE of a multi-g2o tree");
  std::string dataset;
  stats->add_option("dataset", dataset, "multi-g2o root directory")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Time generation over a parameter sweep (CSV)");
  BenchOptions bopts;
  std::string sweep = "agents", values = "1,2,4,8";
  bench->add_option("--sweep", sweep, "agents | steps | radius")
      ->check(CLI::IsMember({"agents", "steps", "radius"}));
  bench->add_option("--values", values, "Comma-separated sweep values");
  bench->add_option("-r,--repetitions", bopts.repetitions, "Runs per sweep point (median reported)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--agents", bopts.base.n_agents, "Agents when not swept");
  bench->add_option("--steps", bopts.base.n_steps, "Steps when not swept");
  double radius = 1.0;
  auto* radius_opt = bench->add_option("--radius", radius, "Loop-closure radius when not swept");
  bench->add_option("--seed", bopts.base.master_seed, "Master seed");
  bench->add_flag("--include-io", bopts.include_io, "Include writing the multi-g2o tree");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    if (!config_path.empty()) gopts.config_path = config_path;
    gopts.format = *parse_format(format);
    if (!info_mode.empty()) gopts.info_mode = parse_info_mode(info_mode);
    if (seed_opt->count() > 0) gopts.seed = seed;
    gopts.threads = threads;
    return cmd_generate(gopts, std::cout, std::cerr);
  }
  if (stats->parsed()) {
    return cmd_stats(dataset, std::cout, std::cerr);
  }
  if (bench->parsed()) {
    bopts.sweep = *parse_sweep(sweep);
    try {
      bopts.values = parse_values(values);
    } catch (const std::exception&) {
      std::cerr << "invalid --values list: " << values << '\n';
      return kFailure;
    }
    if (radius_opt->count() > 0) {
      bopts.base.intra_lc.radius = radius;
      bopts.base.inter_lc.radius = radius;
    }
    bopts.threads = threads;
    return cmd_bench(bopts, std::cout, std::cerr);
  }
  return kFailure;
}
