#include "ofl/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "ofl/error.hpp"
#include "ofl/offline.hpp"
#include "ofl/rng.hpp"
#include "ofl/text.hpp"

namespace ofl::harness {

// --- ingestion -----------------------------------------------------------------

namespace {

void parse_ranges(std::string_view spec, std::size_t columns, bool allow_negative, std::vector<char>& mark) {
  for (auto part : text::split(spec, ',')) {
    if (part.empty()) continue;
    auto resolve = [&](std::string_view s) -> std::size_t {
      const auto v = text::parse_int(s);
      if (!v) throw ParseError("bad column index '" + std::string(s) + "'");
      if (*v < 0) {
        if (!allow_negative) throw ParseError("negative column index only allowed in drop masks");
        if (static_cast<std::size_t>(-*v) > columns) throw ParseError("column index out of range");
        return columns - static_cast<std::size_t>(-*v);
      }
      if (static_cast<std::size_t>(*v) >= columns) throw ParseError("column index out of range");
      return static_cast<std::size_t>(*v);
    };
    // A leading '-' is a sign, so look for the range dash after the first char.
    const auto dash = part.find('-', 1);
    if (dash == std::string_view::npos) {
      mark[resolve(part)] = 1;
    } else {
      const auto lo = resolve(part.substr(0, dash));
      const auto hi = resolve(part.substr(dash + 1));
      if (lo > hi) throw ParseError("empty column range");
      for (auto c = lo; c <= hi; ++c) mark[c] = 1;
    }
  }
}

}  // namespace

std::vector<std::size_t> ColumnMask::resolve(std::size_t columns) const {
  std::vector<char> keep_mark(columns, keep.empty() ? 1 : 0);
  if (!keep.empty()) parse_ranges(keep, columns, false, keep_mark);
  std::vector<char> drop_mark(columns, 0);
  if (!drop.empty()) parse_ranges(drop, columns, true, drop_mark);
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < columns; ++c)
    if (keep_mark[c] && !drop_mark[c]) out.push_back(c);
  if (out.empty()) throw ParseError("column mask keeps no columns");
  return out;
}

std::vector<Location> ingest_points(std::istream& in, const IngestOptions& options) {
  std::vector<Location> points;
  std::string line;
  char delim = options.delimiter;
  std::size_t columns = 0;
  std::vector<std::size_t> kept;
  bool skipped_header = !options.header;
  std::size_t line_no = 0;
  while (points.size() < options.limit && std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    if (delim == 0) delim = text::detect_delimiter(line);
    const auto fields = text::split(line, delim);
    if (columns == 0) {
      columns = fields.size();
      kept = options.columns.resolve(columns);
    } else if (fields.size() != columns) {
      throw ParseError("ragged row at line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                       " fields, got " + std::to_string(fields.size()));
    }
    EuclideanPoint p;
    p.coords.reserve(kept.size());
    for (auto c : kept) {
      const auto v = text::parse_double(fields[c]);
      if (!v || !std::isfinite(*v))
        throw ParseError("non-numeric cell '" + std::string(fields[c]) + "' at line " + std::to_string(line_no) +
                         ", column " + std::to_string(c));
      p.coords.push_back(*v);
    }
    points.emplace_back(std::move(p));
  }
  if (points.empty() && options.limit > 0) throw ParseError("no data rows");
  return points;
}

std::vector<Location> ingest_points_file(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset " + path);
  return ingest_points(in, options);
}

std::vector<Location> synth_uniform(std::size_t n, double extent, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("synth_uniform: n must be >= 1");
  Rng rng(derive_seed(seed, {tag_of("synth-uniform")}));
  std::vector<Location> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform() * extent;
    const double y = rng.uniform() * extent;
    out.push_back(EuclideanPoint{{x, y}});
  }
  return out;
}

std::vector<Location> synth_clusters(std::size_t k, std::size_t per_cluster, double spread, double separation,
                                     std::uint64_t seed) {
  if (k == 0 || per_cluster == 0) throw InvalidArgument("synth_clusters: empty cluster spec");
  Rng rng(derive_seed(seed, {tag_of("synth-clusters")}));
  std::vector<Location> out;
  out.reserve(k * per_cluster);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < per_cluster; ++i) {
      const double x = static_cast<double>(c) * separation + (rng.uniform() - 0.5) * spread;
      const double y = (rng.uniform() - 0.5) * spread;
      out.push_back(EuclideanPoint{{x, y}});
    }
  }
  // Fisher-Yates with our own stream so the order is platform independent.
  for (std::size_t i = out.size(); i > 1; --i) std::swap(out[i - 1], out[rng.bits() % i]);
  return out;
}

std::vector<Location> load_dataset(const std::string& source, const IngestOptions& options, std::uint64_t seed) {
  const auto fields = text::split(source, ':');
  auto num = [&](std::size_t i, double fallback) {
    if (i >= fields.size()) return fallback;
    const auto v = text::parse_double(fields[i]);
    if (!v) throw ParseError("bad synthetic dataset parameter '" + std::string(fields[i]) + "'");
    return *v;
  };
  std::vector<Location> pts;
  if (fields.front() == "uniform") {
    pts = synth_uniform(static_cast<std::size_t>(num(1, 2000)), num(2, 1e6), seed);
  } else if (fields.front() == "clusters") {
    pts = synth_clusters(static_cast<std::size_t>(num(1, 3)), static_cast<std::size_t>(num(2, 5)), num(3, 1.0),
                         num(4, 1000.0), seed);
  } else {
    return ingest_points_file(source, options);
  }
  if (pts.size() > options.limit) pts.resize(options.limit);
  return pts;
}

// --- experiment ----------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (batch_size < 1) throw InvalidArgument("batch size must be >= 1");
  if (facility_cost && !(*facility_cost > 0.0)) throw InvalidArgument("facility cost must be positive");
  if (algorithms.empty() || predictors.empty() || alphas.empty()) throw InvalidArgument("empty sweep");
  for (double a : alphas)
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("alpha values must lie in [0, 1]");
  for (double s : stds)
    if (!(s >= 0.0)) throw InvalidArgument("std values must be >= 0");
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "dataset", "batch",   "algorithm", "predictor", "alpha",     "std",           "trials",
      "ratio_max", "ratio_mean", "eta1",  "eta_inf",   "err1",      "err_inf",       "opt_total",
      "opt_exactness", "wall_time", "facility_cost", "error"};
  return cols;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t batch, std::size_t trial) noexcept {
  return derive_seed(master, {tag_of("trial"), batch, trial});
}

std::uint64_t prediction_seed(std::uint64_t master, std::size_t batch, const PredictorSpec& spec) noexcept {
  return derive_seed(master, {tag_of("predict"), batch, tag_of(to_string(spec.kind)), double_bits(spec.alpha),
                              double_bits(spec.std)});
}

double default_facility_cost(const MetricSpace& space, std::span<const Location> points, kernels::Exec exec) {
  const auto dm = kernels::pairwise_distances(space, points, exec);
  const double diameter = kernels::max_entry(dm, exec);
  return diameter > 0.0 ? diameter / 10.0 : 1.0;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config,
                                      const std::function<void(const ResultRow&)>& sink) {
  config.validate();
  const auto points = load_dataset(config.dataset, config.ingest, config.seed);
  const std::size_t dim = std::get<EuclideanPoint>(points.front()).coords.size();
  const auto space = MetricSpace::euclidean(dim);
  const std::string name = config.dataset_name.empty() ? config.dataset : config.dataset_name;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<ResultRow> rows;
  auto push = [&](ResultRow row) {
    if (sink) sink(row);
    rows.push_back(std::move(row));
  };

  struct Cell {
    PredictorSpec spec;
  };
  std::vector<Cell> cells;
  for (auto kind : config.predictors)
    for (double a : config.alphas) {
      if (is_gaussian(kind)) {
        for (double s : config.stds) cells.push_back({{kind, a, s}});
      } else {
        cells.push_back({{kind, a, 0.0}});
      }
    }

  const std::size_t batches = (points.size() + config.batch_size - 1) / config.batch_size;
  for (std::size_t b = 0; b < batches; ++b) {
    const auto first = points.begin() + static_cast<std::ptrdiff_t>(b * config.batch_size);
    const auto last = points.begin() + static_cast<std::ptrdiff_t>(std::min(points.size(), (b + 1) * config.batch_size));
    Instance inst{space, std::vector<Location>(first, last), 1.0};

    auto base_row = [&](const PredictorSpec& spec, Algorithm alg) {
      ResultRow row;
      row.dataset = name;
      row.batch = b;
      row.algorithm = std::string(to_string(alg));
      row.predictor = std::string(to_string(spec.kind));
      row.alpha = spec.alpha;
      row.std = spec.std;
      row.trials = config.trials;
      return row;
    };

    OfflineSolution offline;
    try {
      inst.facility_cost = config.facility_cost ? *config.facility_cost
                                                : default_facility_cost(space, inst.demands, config.exec);
      if (inst.demands.size() <= config.exact_limit) {
        offline = solve_exact(inst, config.exact_limit, config.exec);
      } else {
        LocalSearchOptions ls;
        ls.seed = derive_seed(config.seed, {tag_of("offline"), b});
        ls.exec = config.exec;
        offline = solve_local_search(inst, ls);
      }
    } catch (const std::exception& e) {
      for (const auto& cell : cells)
        for (auto alg : config.algorithms) {
          auto row = base_row(cell.spec, alg);
          row.ratio_max = row.ratio_mean = nan;
          row.facility_cost = inst.facility_cost;
          row.error = e.what();
          push(std::move(row));
        }
      continue;
    }

    for (const auto& cell : cells) {
      const auto t0 = std::chrono::steady_clock::now();
      PredictionSequence preds;
      ErrorProfile errors;
      std::string failure;
      try {
        preds = generate_predictions(inst, offline, cell.spec, prediction_seed(config.seed, b, cell.spec));
        errors = compute_errors(inst, offline, preds.locations);
      } catch (const std::exception& e) {
        failure = e.what();
      }
      for (auto alg : config.algorithms) {
        auto row = base_row(cell.spec, alg);
        row.opt_total = offline.total;
        row.opt_exactness = std::string(to_string(offline.exactness));
        row.facility_cost = inst.facility_cost;
        if (!failure.empty()) {
          row.ratio_max = row.ratio_mean = nan;
          row.error = failure;
          push(std::move(row));
          continue;
        }
        row.eta1 = errors.eta1;
        row.eta_inf = errors.eta_inf;
        row.err1 = errors.err1;
        row.err_inf = errors.err_inf;

        std::vector<double> ratios(config.trials, 0.0);
        kernels::for_each_index(config.trials, config.exec, [&](std::size_t t) {
          const auto res = run(alg, inst, preds.locations, trial_seed(config.seed, b, t), RunOptions{false});
          ratios[t] = competitive_ratio(res, offline);
        });
        double sum = 0.0, mx = 0.0;
        for (double r : ratios) {
          sum += r;
          mx = std::max(mx, r);
        }
        row.ratio_max = config.aggregation == Aggregation::Mean ? nan : mx;
        row.ratio_mean = config.aggregation == Aggregation::Max ? nan : sum / static_cast<double>(ratios.size());
        if (config.record_time)
          row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        push(std::move(row));
      }
    }
  }
  return rows;
}

// --- serialization ---------------------------------------------------------------

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

double num_field(const std::string& s) {
  const auto v = text::parse_double(s);
  if (!v) throw ParseError("bad numeric field '" + s + "'");
  return *v;
}

std::size_t count_field(const std::string& s) {
  const auto v = text::parse_int(s);
  if (!v || *v < 0) throw ParseError("bad count field '" + s + "'");
  return static_cast<std::size_t>(*v);
}

nlohmann::json num_json(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }
double json_num(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  using text::format_double;
  for (const auto& r : rows) {
    out << csv_field(r.dataset) << ',' << r.batch << ',' << csv_field(r.algorithm) << ',' << csv_field(r.predictor)
        << ',' << format_double(r.alpha) << ',' << format_double(r.std) << ',' << r.trials << ','
        << format_double(r.ratio_max) << ',' << format_double(r.ratio_mean) << ',' << format_double(r.eta1) << ','
        << format_double(r.eta_inf) << ',' << format_double(r.err1) << ',' << format_double(r.err_inf) << ','
        << format_double(r.opt_total) << ',' << csv_field(r.opt_exactness) << ',' << format_double(r.wall_time)
        << ',' << format_double(r.facility_cost) << ',' << csv_field(r.error) << '\n';
  }
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV");
  const auto header = csv_split(line);
  if (header != csv_columns()) throw ParseError("unexpected CSV header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv_split(line);
    if (f.size() != header.size()) throw ParseError("CSV row has " + std::to_string(f.size()) + " fields");
    ResultRow r;
    r.dataset = f[0];
    r.batch = count_field(f[1]);
    r.algorithm = f[2];
    r.predictor = f[3];
    r.alpha = num_field(f[4]);
    r.std = num_field(f[5]);
    r.trials = count_field(f[6]);
    r.ratio_max = num_field(f[7]);
    r.ratio_mean = num_field(f[8]);
    r.eta1 = num_field(f[9]);
    r.eta_inf = num_field(f[10]);
    r.err1 = num_field(f[11]);
    r.err_inf = num_field(f[12]);
    r.opt_total = num_field(f[13]);
    r.opt_exactness = f[14];
    r.wall_time = num_field(f[15]);
    r.facility_cost = num_field(f[16]);
    r.error = f[17];
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_json(std::ostream& out, const std::vector<ResultRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"dataset", r.dataset},
                   {"batch", r.batch},
                   {"algorithm", r.algorithm},
                   {"predictor", r.predictor},
                   {"alpha", r.alpha},
                   {"std", r.std},
                   {"trials", r.trials},
                   {"ratio_max", num_json(r.ratio_max)},
                   {"ratio_mean", num_json(r.ratio_mean)},
                   {"eta1", num_json(r.eta1)},
                   {"eta_inf", num_json(r.eta_inf)},
                   {"err1", num_json(r.err1)},
                   {"err_inf", num_json(r.err_inf)},
                   {"opt_total", num_json(r.opt_total)},
                   {"opt_exactness", r.opt_exactness},
                   {"wall_time", r.wall_time},
                   {"facility_cost", num_json(r.facility_cost)},
                   {"error", r.error}});
  }
  out << arr.dump(2) << '\n';
}

std::vector<ResultRow> read_json(std::istream& in) {
  nlohmann::json arr;
  try {
    in >> arr;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
  if (!arr.is_array()) throw ParseError("expected a JSON array of rows");
  std::vector<ResultRow> rows;
  for (const auto& j : arr) {
    ResultRow r;
    r.dataset = j.at("dataset").get<std::string>();
    r.batch = j.at("batch").get<std::size_t>();
    r.algorithm = j.at("algorithm").get<std::string>();
    r.predictor = j.at("predictor").get<std::string>();
    r.alpha = j.at("alpha").get<double>();
    r.std = j.at("std").get<double>();
    r.trials = j.at("trials").get<std::size_t>();
    r.ratio_max = json_num(j.at("ratio_max"));
    r.ratio_mean = json_num(j.at("ratio_mean"));
    r.eta1 = json_num(j.at("eta1"));
    r.eta_inf = json_num(j.at("eta_inf"));
    r.err1 = json_num(j.at("err1"));
    r.err_inf = json_num(j.at("err_inf"));
    r.opt_total = json_num(j.at("opt_total"));
    r.opt_exactness = j.at("opt_exactness").get<std::string>();
    r.wall_time = j.at("wall_time").get<double>();
    r.facility_cost = json_num(j.at("facility_cost"));
    r.error = j.at("error").get<std::string>();
    rows.push_back(std::move(r));
  }
  return rows;
}

void emit(const std::vector<ResultRow>& rows, Format format, const std::string& path) {
  auto write = [&](std::ostream& out) {
    if (format == Format::Csv) write_csv(out, rows);
    else write_json(out, rows);
  };
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write(out);
  out.flush();
  if (!out) throw Error("failed writing " + path);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("spearman: need two equal-length samples");
  auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace ofl::harness
