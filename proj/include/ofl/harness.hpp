#pragma once

// Experiment harness: dataset ingestion, batching, predictor sweeps and
// result tables.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ofl/kernels.hpp"
#include "ofl/metric.hpp"
#include "ofl/online.hpp"
#include "ofl/predictors.hpp"

namespace ofl::harness {

/// Which columns of a delimited file become coordinates. Ranges are
/// inclusive, zero-based, e.g. "0-53" or "0,2,5-7". Negative numbers count
/// from the end ("-1" is the last column) and may only appear in `drop`.
struct ColumnMask {
  std::string keep;  // empty: all columns
  std::string drop;  // applied after keep

  std::vector<std::size_t> resolve(std::size_t columns) const;
};

struct IngestOptions {
  std::size_t limit = std::numeric_limits<std::size_t>::max();
  char delimiter = 0;  // 0: auto-detect from the first data row
  ColumnMask columns;
  bool header = false;
};

std::vector<Location> ingest_points(std::istream& in, const IngestOptions& options = {});
std::vector<Location> ingest_points_file(const std::string& path, const IngestOptions& options = {});

/// n points uniform on [0, extent]^2.
std::vector<Location> synth_uniform(std::size_t n, double extent, std::uint64_t seed);

/// k tight clusters: centers spaced `separation` apart on a line, points
/// uniform in a square of side `spread` around each center, emitted in
/// random interleaved order.
std::vector<Location> synth_clusters(std::size_t k, std::size_t per_cluster, double spread, double separation,
                                     std::uint64_t seed);

/// Dataset source: a file path, "uniform:<n>[:<extent>]" or
/// "clusters:<k>:<per_cluster>:<spread>:<separation>".
std::vector<Location> load_dataset(const std::string& source, const IngestOptions& options, std::uint64_t seed);

enum class Aggregation { Max, Mean, Both };

struct ExperimentConfig {
  std::string dataset = "uniform:2000:1000000";
  std::string dataset_name;  // defaults to `dataset`
  IngestOptions ingest;
  std::size_t batch_size = 1000;
  std::optional<double> facility_cost;  // unset: batch diameter / 10
  std::vector<Algorithm> algorithms{Algorithm::Meyerson, Algorithm::PredFL};
  std::vector<PredictorKind> predictors{PredictorKind::Alpha};
  std::vector<double> alphas{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> stds{0.0};
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  Aggregation aggregation = Aggregation::Both;
  std::size_t exact_limit = 16;  // batches up to this size are solved exactly
  bool record_time = false;
  kernels::Exec exec = kernels::Exec::Parallel;

  void validate() const;
};

struct ResultRow {
  std::string dataset;
  std::size_t batch = 0;
  std::string algorithm;
  std::string predictor;
  double alpha = 0.0;
  double std = 0.0;
  std::size_t trials = 0;
  double ratio_max = 0.0;
  double ratio_mean = 0.0;
  double eta1 = 0.0;
  double eta_inf = 0.0;
  double err1 = 0.0;
  double err_inf = 0.0;
  double opt_total = 0.0;
  std::string opt_exactness;
  double wall_time = 0.0;
  double facility_cost = 0.0;
  std::string error;  // empty when the cell ran

  bool operator==(const ResultRow&) const = default;
};

/// Header line of the CSV form, in ResultRow field order.
const std::vector<std::string>& csv_columns();

/// Seed of trial `trial` in batch `batch`; shared by every algorithm and
/// predictor cell of the batch.
std::uint64_t trial_seed(std::uint64_t master, std::size_t batch, std::size_t trial) noexcept;
std::uint64_t prediction_seed(std::uint64_t master, std::size_t batch, const PredictorSpec& spec) noexcept;

/// Facility cost a batch uses when none is configured.
double default_facility_cost(const MetricSpace& space, std::span<const Location> points, kernels::Exec exec);

/// Runs the sweep; `sink` receives rows in config order as cells finish.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config,
                                      const std::function<void(const ResultRow&)>& sink = {});

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_json(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(std::istream& in);
std::vector<ResultRow> read_json(std::istream& in);

enum class Format { Csv, Json };
/// Writes rows to `path` ("-" for stdout). Throws Error on I/O failure.
void emit(const std::vector<ResultRow>& rows, Format format, const std::string& path);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace ofl::harness
