#include "ofl/io.hpp"

#include <fstream>
#include <iostream>

#include "ofl/error.hpp"

namespace ofl::io {

Json space_to_json(const MetricSpace& space) {
  switch (space.kind()) {
    case SpaceKind::Euclidean:
      return {{"kind", "euclidean"}, {"dimension", space.size()}};
    case SpaceKind::Matrix: {
      const auto e = space.matrix_entries();
      return {{"kind", "matrix"}, {"n", space.size()}, {"entries", std::vector<double>(e.begin(), e.end())}};
    }
    case SpaceKind::Tree: {
      Json parent = Json::array();
      for (auto p : space.parents()) parent.push_back(p == kNoParent ? Json(-1) : Json(p));
      const auto len = space.edge_lengths();
      return {{"kind", "tree"}, {"parent", parent}, {"length", std::vector<double>(len.begin(), len.end())}};
    }
  }
  throw InvalidMetric("unknown space kind");
}

MetricSpace space_from_json(const Json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "euclidean") return MetricSpace::euclidean(j.at("dimension").get<std::size_t>());
    if (kind == "matrix")
      return MetricSpace::matrix(j.at("n").get<std::size_t>(), j.at("entries").get<std::vector<double>>());
    if (kind == "tree") {
      std::vector<std::uint32_t> parent;
      for (const auto& p : j.at("parent")) {
        const auto v = p.get<long long>();
        parent.push_back(v < 0 ? kNoParent : static_cast<std::uint32_t>(v));
      }
      return MetricSpace::tree(std::move(parent), j.at("length").get<std::vector<double>>());
    }
    throw ParseError("unknown space kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad space description: ") + e.what());
  }
}

namespace {

Json locations_to_json(const std::vector<Location>& locs) {
  Json arr = Json::array();
  for (const auto& l : locs) arr.push_back(to_string(l));
  return arr;
}

std::vector<Location> locations_from_json(const Json& arr) {
  std::vector<Location> out;
  out.reserve(arr.size());
  for (const auto& s : arr) out.push_back(parse_location(s.get<std::string>()));
  return out;
}

}  // namespace

Json instance_to_json(const InstanceFile& file) {
  Json j{{"space", space_to_json(file.instance.space)},
         {"facility_cost", file.instance.facility_cost},
         {"demands", locations_to_json(file.instance.demands)}};
  if (!file.predictions.empty()) j["predictions"] = locations_to_json(file.predictions);
  if (!file.label.empty()) j["label"] = file.label;
  return j;
}

InstanceFile instance_from_json(const Json& j) {
  InstanceFile file;
  try {
    file.instance.space = space_from_json(j.at("space"));
    file.instance.facility_cost = j.at("facility_cost").get<double>();
    file.instance.demands = locations_from_json(j.at("demands"));
    if (j.contains("predictions")) file.predictions = locations_from_json(j.at("predictions"));
    if (j.contains("label")) file.label = j.at("label").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad instance file: ") + e.what());
  }
  file.instance.validate();
  for (const auto& p : file.predictions) file.instance.space.validate(p);
  if (!file.predictions.empty() && file.predictions.size() != file.instance.size())
    throw ParseError("instance file: predictions and demands differ in length");
  return file;
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return instance_from_json(j);
}

void save_instance(const InstanceFile& file, const std::string& path) { write_json_file(instance_to_json(file), path); }

Json solution_to_json(const OfflineSolution& s) {
  return {{"centers", locations_to_json(s.centers)},
          {"assignment", s.assignment},
          {"facility_cost_total", s.facility_cost_total},
          {"assignment_cost_total", s.assignment_cost_total},
          {"total", s.total},
          {"exactness", std::string(to_string(s.exactness))}};
}

Json result_to_json(const RunResult& r, bool with_trace) {
  Json j{{"algorithm", r.algorithm}, {"seed", r.seed},         {"total", r.total},
         {"fcost", r.fcost},         {"acost", r.acost},       {"n_opened", r.n_opened}};
  if (with_trace) {
    Json trace = Json::array();
    for (const auto& d : r.trace) {
      trace.push_back({{"demand", d.demand_index},
                       {"opened", d.opened ? Json(to_string(*d.opened)) : Json(nullptr)},
                       {"assigned_to", to_string(d.assigned_to)},
                       {"step_cost", d.step_cost},
                       {"open_probability", d.open_probability}});
    }
    j["trace"] = std::move(trace);
  }
  return j;
}

Json combiner_to_json(const CombinerResult& r, bool with_trace) {
  Json j = result_to_json(r.result, false);
  j["charged_total"] = r.charged_total;
  j["switch_total"] = r.switch_total;
  j["final_ell"] = r.final_ell;
  j["shadows"] = Json::array({result_to_json(r.shadows[0], with_trace), result_to_json(r.shadows[1], with_trace)});
  if (with_trace) {
    Json steps = Json::array();
    for (const auto& s : r.steps)
      steps.push_back({{"demand", s.demand_index},
                       {"followed", s.followed},
                       {"charged", s.charged},
                       {"switch_payment", s.switch_payment},
                       {"switches", s.switches},
                       {"ell", s.ell}});
    j["steps"] = std::move(steps);
  }
  return j;
}

void write_json_file(const Json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing " + path);
}

}  // namespace ofl::io
