#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace nodeforge {

enum class NodeType {
    LLM_Generator,
    Retrieval_RAG,
};

std::string to_string(NodeType type);

/// Throws SchemaError when `text` names no known node type; `path` is the
/// document location reported in the error.
NodeType node_type_from_string(const std::string& text, const std::string& path = "node_type");

/// One node of a pipeline. Immutable value; validation is a separate pass so
/// malformed Designer output can be inspected and re-prompted.
struct NodeBlueprint {
    std::string node_name;
    NodeType node_type = NodeType::LLM_Generator;
    std::string description;
    std::vector<std::string> dependencies;
    std::vector<std::string> input_keys;
    std::vector<std::string> output_keys;
    std::string constraints;
    std::string logic_description;
    std::string prompt_template;
    std::vector<std::string> tools_needed;
    std::string all_code;  // metadata only, never executed
    std::int64_t version = 0;

    bool operator==(const NodeBlueprint&) const = default;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;

    std::string to_string() const;
};

/// node_name -> (input_key -> source). Sources follow the grammar
/// `input.<field>`, `<node>.<output_key>`, or `<node>.*`.
using ConnectionsPlan = std::map<std::string, std::map<std::string, std::string>>;

struct WiringSource {
    enum class Kind { initial_input, node_key, node_whole };
    Kind kind = Kind::initial_input;
    std::string node;  // producer node (node_key / node_whole)
    std::string key;   // field name (initial_input / node_key)
};

/// Parses a wiring source string. Throws WiringError on grammar violations.
WiringSource parse_wiring_source(const std::string& source);

struct Provenance {
    std::string dataset;
    std::string designer;
    std::uint64_t seed = 0;

    bool operator==(const Provenance&) const = default;
};

struct NodeLibrary {
    std::string pipeline_description;
    std::vector<NodeBlueprint> nodes;
    ConnectionsPlan connections_plan;
    std::int64_t epoch = 0;
    Provenance provenance;

    bool operator==(const NodeLibrary&) const = default;

    const NodeBlueprint* find(const std::string& node_name) const;
};

struct PipelineGraph {
    std::vector<std::string> ordered_nodes;
    std::set<std::pair<std::string, std::string>> edges;  // (from, to)

    bool operator==(const PipelineGraph&) const = default;
};

ValidationReport validate_blueprint(const NodeBlueprint& blueprint);

/// Checks all library invariants: per-node validity, unique names, dangling
/// dependencies, acyclicity, wiring resolvability, single sink.
ValidationReport validate_library(const NodeLibrary& library);

/// Deterministic topological order: among ready nodes, lexicographically
/// smallest node_name first. Throws CycleError / DanglingDependencyError.
PipelineGraph build_pipeline_graph(const NodeLibrary& library);

/// Transitive dependencies (ancestors) of `node_name`, including indirect ones.
std::set<std::string> transitive_dependencies(const NodeLibrary& library,
                                              const std::string& node_name);

/// The unique node no other node depends on. Throws ValidationError when the
/// sink is not unique or the library is empty.
const NodeBlueprint& sink_node(const NodeLibrary& library);

/// Key holding the pipeline's final answer: the sink's "final_answer" output
/// key when present, otherwise the sink's first output key.
std::string final_answer_key(const NodeLibrary& library);

nlohmann::json node_to_json(const NodeBlueprint& node);
NodeBlueprint node_from_json(const nlohmann::json& document, const std::string& path = "$");

nlohmann::json library_to_json(const NodeLibrary& library);
NodeLibrary library_from_json(const nlohmann::json& document);

/// Canonical document: sorted keys, two-space indent, trailing newline.
/// Byte-stable for equal libraries.
std::string serialize_library(const NodeLibrary& library);

/// Throws SchemaError carrying the path of the offending field.
NodeLibrary deserialize_library(const std::string& document);

}  // namespace nodeforge
