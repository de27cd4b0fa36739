#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stw/gadgets.hpp"
#include "stw/graph.hpp"

namespace stw {

/// Line-oriented instance format, 1-indexed, '#' or 'c' comments:
///   p grl <n> <m>
///   e u v        edge
///   vw v w       vertex weight (default 1)
///   vs v         S-vertex
///   vt v         terminal
///   es u v       S-edge
///   vf v         forced-keep vertex
LabeledInstance load_instance(const std::string& text);
std::string serialize_instance(const LabeledInstance& inst);

LabeledInstance load_instance_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

struct ResultRecord {
    std::string problem;
    std::string status;  // optimal | infeasible | budget-exceeded | error
    Weight optimum_weight = 0;
    std::vector<int> deletion_vertices;              // 0-indexed internally
    std::vector<std::pair<int, int>> deletion_edges;
    std::optional<Weight> budget;
    int decomposition_width_used = -1;
    long long dp_nodes = 0;
    long long max_classes_per_bag = 0;
    double wall_seconds = 0.0;
    std::string message;

    std::string to_text() const;   // key: value lines, 1-indexed sets
    std::string to_json() const;
};

/// Sidecar metadata for generated instances (JSON).
std::string sidecar_json(const GeneratedInstance& gen, const std::string& instance_file,
                         const std::string& witness_file, uint64_t seed);

}  // namespace stw
