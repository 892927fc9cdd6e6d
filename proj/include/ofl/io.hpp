#pragma once

// JSON forms of instances, offline solutions and run results.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "ofl/combiner.hpp"
#include "ofl/offline.hpp"
#include "ofl/online.hpp"

namespace ofl::io {

using Json = nlohmann::json;

Json space_to_json(const MetricSpace& space);
MetricSpace space_from_json(const Json& j);

/// An instance plus an optional prediction per demand.
struct InstanceFile {
  Instance instance;
  std::vector<Location> predictions;
  std::string label;
};

Json instance_to_json(const InstanceFile& file);
InstanceFile instance_from_json(const Json& j);

InstanceFile load_instance(const std::string& path);
void save_instance(const InstanceFile& file, const std::string& path);

Json solution_to_json(const OfflineSolution& solution);
Json result_to_json(const RunResult& result, bool with_trace);
Json combiner_to_json(const CombinerResult& result, bool with_trace);

/// Writes `j` followed by a newline to `path` ("-" for stdout).
void write_json_file(const Json& j, const std::string& path);

}  // namespace ofl::io
