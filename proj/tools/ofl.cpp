// ofl: command-line driver for experiment sweeps, offline solving,
// lower-bound instance export and replay.

#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ofl/adversary.hpp"
#include "ofl/combiner.hpp"
#include "ofl/error.hpp"
#include "ofl/harness.hpp"
#include "ofl/io.hpp"
#include "ofl/text.hpp"

namespace {

using namespace ofl;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto part : text::split(s, ',')) {
    part = text::trim(part);
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const auto& p : split_list(s)) {
    const auto v = text::parse_double(p);
    if (!v) throw InvalidArgument(std::string("bad value '") + p + "' in --" + what);
    out.push_back(*v);
  }
  return out;
}

// Reads flat key=value lines and turns every key the command line does not
// already set into a "--key=value" argument.
std::vector<std::string> config_args(const std::string& path, const std::vector<std::string>& given) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path);
  std::set<std::string> present;
  for (const auto& a : given) {
    if (a.rfind("--", 0) != 0) continue;
    present.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  std::vector<std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected key=value");
    std::string key(text::trim(body.substr(0, eq)));
    std::string value(text::trim(body.substr(eq + 1)));
    for (auto& c : key)
      if (c == '_') c = '-';
    if (key == "config") throw ParseError(path + ": nested config files are not supported");
    if (present.count(key)) continue;
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

struct RunFlags {
  std::string dataset = "uniform:2000:1000000";
  std::string dataset_name;
  std::size_t limit = 0;
  std::size_t batch_size = 1000;
  double facility_cost = 0.0;
  std::string algorithms = "meyerson,predfl";
  std::string predictor = "alpha";
  std::string alphas = "0,0.25,0.5,0.75,1";
  std::string stds = "0";
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  std::string agg = "both";
  std::string out = "-";
  std::string format = "csv";
  std::string keep_columns;
  std::string drop_columns;
  bool header = false;
  std::string delimiter;
  std::size_t exact_limit = 16;
  bool record_time = false;
  bool serial = false;
};

void add_dataset_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--dataset", f.dataset, "CSV path, uniform:<n>[:<extent>] or clusters:<k>:<per>:<spread>:<sep>");
  cmd->add_option("--dataset-name", f.dataset_name, "Name recorded in result rows");
  cmd->add_option("--limit", f.limit, "Use at most this many points (0: all)");
  cmd->add_option("--batch-size", f.batch_size, "Points per batch");
  cmd->add_option("--facility-cost", f.facility_cost, "Facility opening cost (0: batch diameter / 10)");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--keep-columns", f.keep_columns, "Columns used as coordinates, e.g. 0-53");
  cmd->add_option("--drop-columns", f.drop_columns, "Columns dropped after --keep-columns, e.g. -1");
  cmd->add_flag("--header", f.header, "First row is a header");
  cmd->add_option("--delimiter", f.delimiter, "Field delimiter (default: auto-detect)");
  cmd->add_option("--exact-limit", f.exact_limit, "Batches up to this size are solved exactly");
  cmd->add_flag("--serial", f.serial, "Disable OpenMP parallelism");
}

harness::ExperimentConfig to_config(const RunFlags& f) {
  harness::ExperimentConfig c;
  c.dataset = f.dataset;
  c.dataset_name = f.dataset_name;
  if (f.limit > 0) c.ingest.limit = f.limit;
  c.ingest.columns.keep = f.keep_columns;
  c.ingest.columns.drop = f.drop_columns;
  c.ingest.header = f.header;
  if (!f.delimiter.empty()) {
    if (f.delimiter == "tab" || f.delimiter == "\\t") c.ingest.delimiter = '\t';
    else if (f.delimiter == "space") c.ingest.delimiter = ' ';
    else if (f.delimiter.size() == 1) c.ingest.delimiter = f.delimiter[0];
    else throw InvalidArgument("--delimiter must be a single character, tab or space");
  }
  c.batch_size = f.batch_size;
  if (f.facility_cost > 0.0) c.facility_cost = f.facility_cost;
  else if (f.facility_cost < 0.0) throw InvalidArgument("--facility-cost must be positive");
  c.algorithms.clear();
  for (const auto& a : split_list(f.algorithms)) c.algorithms.push_back(parse_algorithm(a));
  c.predictors.clear();
  for (const auto& p : split_list(f.predictor)) c.predictors.push_back(parse_predictor_kind(p));
  c.alphas = parse_doubles(f.alphas, "alphas");
  c.stds = parse_doubles(f.stds, "stds");
  c.trials = f.trials;
  c.seed = f.seed;
  if (f.agg == "max") c.aggregation = harness::Aggregation::Max;
  else if (f.agg == "mean") c.aggregation = harness::Aggregation::Mean;
  else if (f.agg == "both") c.aggregation = harness::Aggregation::Both;
  else throw InvalidArgument("--agg must be max, mean or both");
  c.exact_limit = f.exact_limit;
  c.record_time = f.record_time;
  c.exec = f.serial ? kernels::Exec::Serial : kernels::Exec::Parallel;
  c.validate();
  return c;
}

harness::Format parse_format(const std::string& s) {
  if (s == "csv") return harness::Format::Csv;
  if (s == "json") return harness::Format::Json;
  throw InvalidArgument("--format must be csv or json");
}

int cmd_run(const RunFlags& f) {
  const auto config = to_config(f);
  const auto format = parse_format(f.format);
  const auto rows = harness::run_experiment(config);
  harness::emit(rows, format, f.out);
  std::size_t failed = 0;
  for (const auto& r : rows)
    if (!r.error.empty()) ++failed;
  if (failed) std::cerr << "ofl: " << failed << " of " << rows.size() << " rows reported errors\n";
  return 0;
}

int cmd_solve_offline(const RunFlags& f, std::size_t batch) {
  const auto config = to_config(f);
  const auto points = harness::load_dataset(config.dataset, config.ingest, config.seed);
  const std::size_t first = batch * config.batch_size;
  if (first >= points.size())
    throw InvalidArgument("batch " + std::to_string(batch) + " is past the end of the dataset");
  const std::size_t last = std::min(points.size(), first + config.batch_size);
  const auto dim = std::get<EuclideanPoint>(points.front()).coords.size();
  Instance inst{MetricSpace::euclidean(dim),
                std::vector<Location>(points.begin() + static_cast<std::ptrdiff_t>(first),
                                      points.begin() + static_cast<std::ptrdiff_t>(last)),
                1.0};
  inst.facility_cost = config.facility_cost
                           ? *config.facility_cost
                           : harness::default_facility_cost(inst.space, inst.demands, config.exec);
  OfflineSolution sol;
  if (inst.size() <= config.exact_limit) {
    sol = solve_exact(inst, config.exact_limit, config.exec);
  } else {
    LocalSearchOptions ls;
    ls.seed = derive_seed(config.seed, {tag_of("offline"), batch});
    ls.exec = config.exec;
    sol = solve_local_search(inst, ls);
  }
  auto j = io::solution_to_json(sol);
  j["batch"] = batch;
  j["facility_cost"] = inst.facility_cost;
  j["n"] = inst.size();
  io::write_json_file(j, f.out);
  return 0;
}

int cmd_gen_lb(int m, const std::string& alpha, std::uint64_t seed, const std::string& out) {
  const auto hst = generate_lower_bound_instance(m, Rational::parse(alpha), seed);
  io::InstanceFile file{hst.instance, hst.predictions.locations, hst.predictions.label};
  auto j = io::instance_to_json(file);
  j["lower_bound"] = {{"m", m},
                      {"alpha", hst.alpha.str()},
                      {"lambda", hst.lambda},
                      {"demand_multiplier", hst.demand_multiplier},
                      {"path", hst.path},
                      {"phase_sizes", hst.phase_sizes},
                      {"single_center_total", hst.single_center.total},
                      {"opt_bound", hst.opt_bound},
                      {"eta1", hst.declared_eta1}};
  io::write_json_file(j, out);
  return 0;
}

struct ReplayFlags {
  std::string instance;
  std::string predictions;
  std::string algorithms = "meyerson,predfl";
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  bool trace = false;
  bool combine = false;
  std::string out = "-";
};

int cmd_replay(const ReplayFlags& f) {
  auto file = io::load_instance(f.instance);
  if (!f.predictions.empty()) {
    std::ifstream in(f.predictions);
    if (!in) throw ParseError("cannot open " + f.predictions);
    file.predictions = read_predictions(in);
    for (const auto& p : file.predictions) file.instance.space.validate(p);
    if (file.predictions.size() != file.instance.size())
      throw ParseError("predictions and demands differ in length");
  }
  std::vector<Algorithm> algs;
  for (const auto& a : split_list(f.algorithms)) algs.push_back(parse_algorithm(a));
  if (algs.empty()) throw InvalidArgument("--algorithms is empty");
  if (f.trials == 0) throw InvalidArgument("--trials must be >= 1");
  if (f.combine && algs.size() != 2) throw InvalidArgument("--combine needs exactly two algorithms");

  io::Json runs = io::Json::array();
  for (std::size_t t = 0; t < f.trials; ++t) {
    const auto seed = derive_seed(f.seed, {tag_of("replay"), t});
    if (f.combine) {
      runs.push_back(io::combiner_to_json(min_combine(file.instance, file.predictions, algs[0], algs[1], seed,
                                                      RunOptions{f.trace}),
                                          f.trace));
    } else {
      for (auto a : algs)
        runs.push_back(io::result_to_json(run(a, file.instance, file.predictions, seed, RunOptions{f.trace}),
                                          f.trace));
    }
  }
  io::Json j{{"instance", f.instance}, {"label", file.label}, {"runs", runs}};
  io::write_json_file(j, f.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online facility location with predictions"};
  app.require_subcommand(1);

  std::string config_path;
  RunFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Experiment sweep; rows go to --out as CSV or JSON");
  add_dataset_flags(run_cmd, run_flags);
  run_cmd->add_option("--algorithms", run_flags.algorithms, "Comma list of meyerson, predfl");
  run_cmd->add_option("--predictor", run_flags.predictor,
                      "Comma list of alpha, alpha_gaussian, perturb_gaussian, random_alpha, random_perturb");
  run_cmd->add_option("--alphas", run_flags.alphas, "Comma list of alpha values in [0, 1]");
  run_cmd->add_option("--stds", run_flags.stds, "Comma list of Gaussian std values");
  run_cmd->add_option("--trials", run_flags.trials, "Seeds per cell");
  run_cmd->add_option("--agg", run_flags.agg, "Ratio aggregation: max, mean or both");
  run_cmd->add_option("--out", run_flags.out, "Output path, - for stdout");
  run_cmd->add_option("--format", run_flags.format, "csv or json");
  run_cmd->add_flag("--record-time", run_flags.record_time, "Fill wall_time (output is then not reproducible)");
  run_cmd->add_option("--config", config_path, "File of key=value lines mirroring the flags");

  RunFlags solve_flags;
  std::size_t solve_batch = 0;
  auto* solve_cmd = app.add_subcommand("solve-offline", "Solve one batch offline and print the solution JSON");
  add_dataset_flags(solve_cmd, solve_flags);
  solve_cmd->add_option("--batch", solve_batch, "Batch index");
  solve_cmd->add_option("--out", solve_flags.out, "Output path, - for stdout");

  int lb_m = 2;
  std::string lb_alpha = "1/2";
  std::uint64_t lb_seed = 1;
  std::string lb_out = "-";
  auto* lb_cmd = app.add_subcommand("gen-lb", "Export a lower-bound HST instance with adversarial predictions");
  lb_cmd->add_option("--m", lb_m, "Branching parameter m >= 2");
  lb_cmd->add_option("--alpha", lb_alpha, "Rational alpha, e.g. 1/2 or 3");
  lb_cmd->add_option("--seed", lb_seed, "Seed for the random root-to-leaf path");
  lb_cmd->add_option("--out", lb_out, "Output path, - for stdout");

  ReplayFlags replay_flags;
  auto* replay_cmd = app.add_subcommand("replay", "Run algorithms on an exported instance");
  replay_cmd->add_option("--instance", replay_flags.instance, "Instance JSON")->required();
  replay_cmd->add_option("--predictions", replay_flags.predictions, "Prediction file, one location per line");
  replay_cmd->add_option("--algorithms", replay_flags.algorithms, "Comma list of meyerson, predfl");
  replay_cmd->add_option("--trials", replay_flags.trials, "Number of seeded runs");
  replay_cmd->add_option("--seed", replay_flags.seed, "Master seed");
  replay_cmd->add_flag("--trace", replay_flags.trace, "Include per-demand decisions");
  replay_cmd->add_flag("--combine", replay_flags.combine, "Run the MIN combiner over the two algorithms");
  replay_cmd->add_option("--out", replay_flags.out, "Output path, - for stdout");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    // The config file is expanded into flags before the real parse.
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      std::size_t consumed = 0;
      if (args[i] == "--config" && i + 1 < args.size()) {
        path = args[i + 1];
        consumed = 2;
      } else if (args[i].rfind("--config=", 0) == 0) {
        path = args[i].substr(9);
        consumed = 1;
      }
      if (consumed == 0) continue;
      std::vector<std::string> rest(args.begin(), args.end());
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i),
                 rest.begin() + static_cast<std::ptrdiff_t>(i + consumed));
      const auto extra = config_args(path, rest);
      rest.insert(rest.end(), extra.begin(), extra.end());
      args = std::move(rest);
      break;
    }
  } catch (const std::exception& e) {
    std::cerr << "ofl: " << e.what() << '\n';
    return 1;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run_cmd) return cmd_run(run_flags);
    if (*solve_cmd) return cmd_solve_offline(solve_flags, solve_batch);
    if (*lb_cmd) return cmd_gen_lb(lb_m, lb_alpha, lb_seed, lb_out);
    if (*replay_cmd) return cmd_replay(replay_flags);
  } catch (const std::exception& e) {
    std::cerr << "ofl: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
