#pragma once

// Subcommands behind the posegen executable. Kept in a library so tests can
// call them directly.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "posegen/model.hpp"

namespace posegen::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kIoError = 3,
  kParseError = 4,
};

/// Thread count from POSEGEN_THREADS, else the hardware concurrency.
unsigned default_threads();

enum class OutputFormat { multig2o, single_g2o, both };
std::optional<OutputFormat> parse_format(const std::string& text);

struct GenerateOptions {
  std::optional<std::filesystem::path> config_path;  // defaults when unset
  std::filesystem::path out_path;
  OutputFormat format = OutputFormat::multig2o;
  std::optional<InfoMode> info_mode;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool overwrite = false;
};

/// Path of the concatenated .g2o for a given output path and format.
std::filesystem::path single_g2o_path(const GenerateOptions& opts);

int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err);

int cmd_stats(const std::filesystem::path& dataset, std::ostream& out, std::ostream& err);

enum class SweepKind { agents, steps, radius };
std::optional<SweepKind> parse_sweep(const std::string& text);
std::string to_string(SweepKind kind);

struct BenchOptions {
  SweepKind sweep = SweepKind::agents;
  std::vector<double> values;
  std::size_t repetitions = 3;
  GenerationConfig base;  // every non-swept parameter
  bool include_io = false;
  unsigned threads = 1;
};

struct BenchRow {
  double value = 0.0;
  double median_seconds = 0.0;
  double min_seconds = 0.0;
  double max_seconds = 0.0;
  std::size_t total_constraints = 0;
};

/// Times generation (and optionally writing) at every sweep point.
std::vector<BenchRow> run_bench(const BenchOptions& opts);

void write_bench_csv(const BenchOptions& opts, const std::vector<BenchRow>& rows,
                     std::ostream& out);

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace posegen::cli
