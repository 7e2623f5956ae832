#include "nodeforge/blueprint.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <queue>
#include <sstream>

#include "nodeforge/errors.hpp"
#include "nodeforge/util.hpp"

namespace nodeforge {

namespace {

constexpr const char* kSystemMarker = "System Prompt:";
constexpr const char* kUserMarker = "User Prompt:";
constexpr const char* kReservedSlot = "retrieved_context";

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

}  // namespace

std::string to_string(NodeType type) {
    switch (type) {
        case NodeType::LLM_Generator: return "LLM_Generator";
        case NodeType::Retrieval_RAG: return "Retrieval_RAG";
    }
    return "LLM_Generator";
}

NodeType node_type_from_string(const std::string& text, const std::string& path) {
    if (text == "LLM_Generator") return NodeType::LLM_Generator;
    if (text == "Retrieval_RAG") return NodeType::Retrieval_RAG;
    throw SchemaError(path, "expected LLM_Generator or Retrieval_RAG, got \"" + text + "\"");
}

std::string ValidationReport::to_string() const {
    if (ok) return "ok";
    std::string out;
    for (const auto& v : violations) {
        out += "- " + v + "\n";
    }
    return out;
}

WiringSource parse_wiring_source(const std::string& source) {
    auto dot = source.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 >= source.size()) {
        throw WiringError("malformed wiring source \"" + source +
                          "\" (expected input.<field>, <node>.<key>, or <node>.*)");
    }
    std::string head = source.substr(0, dot);
    std::string tail = source.substr(dot + 1);
    if (!is_identifier(head)) {
        throw WiringError("malformed wiring source \"" + source + "\" (bad producer name)");
    }
    WiringSource ws;
    if (head == "input") {
        if (!is_identifier(tail)) {
            throw WiringError("malformed wiring source \"" + source + "\" (bad input field)");
        }
        ws.kind = WiringSource::Kind::initial_input;
        ws.key = tail;
        return ws;
    }
    ws.node = head;
    if (tail == "*") {
        ws.kind = WiringSource::Kind::node_whole;
        return ws;
    }
    if (!is_identifier(tail)) {
        throw WiringError("malformed wiring source \"" + source + "\" (bad output key)");
    }
    ws.kind = WiringSource::Kind::node_key;
    ws.key = tail;
    return ws;
}

const NodeBlueprint* NodeLibrary::find(const std::string& node_name) const {
    for (const auto& n : nodes) {
        if (n.node_name == node_name) return &n;
    }
    return nullptr;
}

ValidationReport validate_blueprint(const NodeBlueprint& blueprint) {
    ValidationReport report;
    auto flag = [&](std::string v) {
        report.ok = false;
        report.violations.push_back(std::move(v));
    };

    if (!is_identifier(blueprint.node_name)) {
        flag("invalid node name: \"" + blueprint.node_name + "\"");
    }
    if (blueprint.node_type != NodeType::LLM_Generator &&
        blueprint.node_type != NodeType::Retrieval_RAG) {
        flag("unknown node type");
    }
    if (blueprint.prompt_template.find(kSystemMarker) == std::string::npos) {
        flag(std::string("missing prompt section: \"") + kSystemMarker + "\"");
    }
    if (blueprint.prompt_template.find(kUserMarker) == std::string::npos) {
        flag(std::string("missing prompt section: \"") + kUserMarker + "\"");
    }

    const bool is_rag = blueprint.node_type == NodeType::Retrieval_RAG;
    const std::vector<std::string> rag_tools = {"Search"};
    if (is_rag && blueprint.tools_needed != rag_tools) {
        flag("tools/type mismatch: Retrieval_RAG requires tools_needed [\"Search\"], got [" +
             join(blueprint.tools_needed, ", ") + "]");
    }
    if (!is_rag && !blueprint.tools_needed.empty()) {
        flag("tools/type mismatch: LLM_Generator requires empty tools_needed, got [" +
             join(blueprint.tools_needed, ", ") + "]");
    }

    for (const auto& name : brace_placeholders(blueprint.prompt_template)) {
        bool declared = std::find(blueprint.input_keys.begin(), blueprint.input_keys.end(),
                                  name) != blueprint.input_keys.end();
        if (!declared && name != kReservedSlot) {
            flag("unknown placeholder: {" + name + "} is not an input key or reserved slot");
        }
    }

    if (blueprint.version < 0) {
        flag("negative version");
    }
    return report;
}

ValidationReport validate_library(const NodeLibrary& library) {
    ValidationReport report;
    auto flag = [&](std::string v) {
        report.ok = false;
        report.violations.push_back(std::move(v));
    };

    std::set<std::string> names;
    std::set<std::string> duplicates;
    for (const auto& node : library.nodes) {
        if (!names.insert(node.node_name).second) duplicates.insert(node.node_name);
    }
    for (const auto& d : duplicates) {
        flag("duplicate node name: " + d);
    }

    for (const auto& node : library.nodes) {
        auto node_report = validate_blueprint(node);
        for (const auto& v : node_report.violations) {
            flag("node " + node.node_name + ": " + v);
        }
        for (const auto& dep : node.dependencies) {
            if (!names.count(dep)) {
                flag("dangling dependency: " + node.node_name + " depends on missing " + dep);
            }
        }
    }

    // Cycle check over edges whose endpoints exist (dangling edges already flagged).
    if (duplicates.empty()) {
        std::map<std::string, int> indegree;
        std::map<std::string, std::vector<std::string>> out_edges;
        for (const auto& node : library.nodes) indegree[node.node_name] = 0;
        for (const auto& node : library.nodes) {
            for (const auto& dep : node.dependencies) {
                if (!names.count(dep)) continue;
                out_edges[dep].push_back(node.node_name);
                ++indegree[node.node_name];
            }
        }
        std::deque<std::string> ready;
        for (const auto& [name, deg] : indegree) {
            if (deg == 0) ready.push_back(name);
        }
        std::size_t processed = 0;
        while (!ready.empty()) {
            std::string n = ready.front();
            ready.pop_front();
            ++processed;
            for (const auto& to : out_edges[n]) {
                if (--indegree[to] == 0) ready.push_back(to);
            }
        }
        if (processed < library.nodes.size()) {
            std::vector<std::string> stuck;
            for (const auto& [name, deg] : indegree) {
                if (deg > 0) stuck.push_back(name);
            }
            flag("dependency cycle involving: " + join(stuck, ", "));
        }
    }

    // Wiring: every declared input resolvable, every source well-formed and
    // produced by a transitive dependency.
    for (const auto& node : library.nodes) {
        std::map<std::string, std::string> wiring;
        auto it = library.connections_plan.find(node.node_name);
        if (it != library.connections_plan.end()) wiring = it->second;

        for (const auto& key : node.input_keys) {
            if (!wiring.count(key)) {
                flag("unresolvable input: " + node.node_name + "." + key +
                     " has no source in connections_plan");
            }
        }
        std::set<std::string> declared(node.input_keys.begin(), node.input_keys.end());
        auto ancestors = transitive_dependencies(library, node.node_name);
        for (const auto& [key, source] : wiring) {
            if (!declared.count(key)) {
                flag("wiring for undeclared input: " + node.node_name + "." + key);
                continue;
            }
            WiringSource ws;
            try {
                ws = parse_wiring_source(source);
            } catch (const WiringError& e) {
                flag("node " + node.node_name + ": " + e.what());
                continue;
            }
            if (ws.kind == WiringSource::Kind::initial_input) continue;
            const NodeBlueprint* producer = library.find(ws.node);
            if (!producer) {
                flag("wiring source unknown node: " + node.node_name + "." + key + " <- " +
                     source);
                continue;
            }
            if (!ancestors.count(ws.node)) {
                flag("wiring source not a dependency: " + node.node_name + "." + key + " <- " +
                     source);
            }
            if (ws.kind == WiringSource::Kind::node_key) {
                bool has = std::find(producer->output_keys.begin(), producer->output_keys.end(),
                                     ws.key) != producer->output_keys.end();
                if (!has) {
                    flag("wiring source unknown output key: " + node.node_name + "." + key +
                         " <- " + source);
                }
            }
        }
    }

    // Sink uniqueness.
    std::set<std::string> has_dependent;
    for (const auto& node : library.nodes) {
        for (const auto& dep : node.dependencies) has_dependent.insert(dep);
    }
    std::vector<std::string> sinks;
    for (const auto& node : library.nodes) {
        if (!has_dependent.count(node.node_name)) sinks.push_back(node.node_name);
    }
    if (sinks.size() != 1) {
        flag("expected exactly one sink, found " + std::to_string(sinks.size()) + " [" +
             join(sinks, ", ") + "]");
    }
    return report;
}

PipelineGraph build_pipeline_graph(const NodeLibrary& library) {
    std::set<std::string> names;
    for (const auto& node : library.nodes) {
        if (!names.insert(node.node_name).second) {
            throw PreconditionError("duplicate node name: " + node.node_name);
        }
    }

    PipelineGraph graph;
    std::map<std::string, int> indegree;
    std::map<std::string, std::vector<std::string>> out_edges;
    for (const auto& node : library.nodes) indegree[node.node_name] = 0;
    for (const auto& node : library.nodes) {
        for (const auto& dep : node.dependencies) {
            if (!names.count(dep)) {
                throw DanglingDependencyError("node " + node.node_name +
                                              " depends on missing " + dep);
            }
            if (graph.edges.insert({dep, node.node_name}).second) {
                out_edges[dep].push_back(node.node_name);
                ++indegree[node.node_name];
            }
        }
    }

    std::priority_queue<std::string, std::vector<std::string>, std::greater<std::string>> ready;
    for (const auto& [name, deg] : indegree) {
        if (deg == 0) ready.push(name);
    }
    while (!ready.empty()) {
        std::string n = ready.top();
        ready.pop();
        graph.ordered_nodes.push_back(n);
        for (const auto& to : out_edges[n]) {
            if (--indegree[to] == 0) ready.push(to);
        }
    }
    if (graph.ordered_nodes.size() < library.nodes.size()) {
        std::vector<std::string> stuck;
        for (const auto& [name, deg] : indegree) {
            if (deg > 0) stuck.push_back(name);
        }
        throw CycleError("dependency cycle involving: " + join(stuck, ", "));
    }
    return graph;
}

std::set<std::string> transitive_dependencies(const NodeLibrary& library,
                                              const std::string& node_name) {
    std::set<std::string> seen;
    std::deque<std::string> frontier;
    const NodeBlueprint* start = library.find(node_name);
    if (!start) return seen;
    for (const auto& dep : start->dependencies) frontier.push_back(dep);
    while (!frontier.empty()) {
        std::string n = frontier.front();
        frontier.pop_front();
        if (!seen.insert(n).second) continue;
        const NodeBlueprint* bp = library.find(n);
        if (!bp) continue;
        for (const auto& dep : bp->dependencies) frontier.push_back(dep);
    }
    return seen;
}

const NodeBlueprint& sink_node(const NodeLibrary& library) {
    std::set<std::string> has_dependent;
    for (const auto& node : library.nodes) {
        for (const auto& dep : node.dependencies) has_dependent.insert(dep);
    }
    const NodeBlueprint* sink = nullptr;
    int count = 0;
    for (const auto& node : library.nodes) {
        if (!has_dependent.count(node.node_name)) {
            sink = &node;
            ++count;
        }
    }
    if (count != 1 || !sink) {
        throw ValidationError("expected exactly one sink, found " + std::to_string(count));
    }
    return *sink;
}

std::string final_answer_key(const NodeLibrary& library) {
    const NodeBlueprint& sink = sink_node(library);
    if (sink.output_keys.empty()) {
        throw ValidationError("sink node " + sink.node_name + " has no output keys");
    }
    auto it = std::find(sink.output_keys.begin(), sink.output_keys.end(), "final_answer");
    if (it != sink.output_keys.end()) return *it;
    return sink.output_keys.front();
}

using nlohmann::json;

nlohmann::json node_to_json(const NodeBlueprint& node) {
    json j;
    j["node_name"] = node.node_name;
    j["node_type"] = to_string(node.node_type);
    j["description"] = node.description;
    j["dependencies"] = node.dependencies;
    j["input"] = node.input_keys;
    j["output"] = node.output_keys;
    j["constraints"] = node.constraints;
    j["implementation"] = {
        {"logic_description", node.logic_description},
        {"prompt_template", node.prompt_template},
        {"tools_needed", node.tools_needed},
    };
    j["all_code"] = node.all_code;
    j["version"] = node.version;
    return j;
}

namespace {

const json& expect_member(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw SchemaError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path + "." + key, "missing field");
    return *it;
}

std::string get_string(const json& obj, const std::string& key, const std::string& path) {
    const json& v = expect_member(obj, key, path);
    if (!v.is_string()) throw SchemaError(path + "." + key, "expected a string");
    return v.get<std::string>();
}

std::vector<std::string> get_string_array(const json& obj, const std::string& key,
                                          const std::string& path) {
    const json& v = expect_member(obj, key, path);
    if (!v.is_array()) throw SchemaError(path + "." + key, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) {
            throw SchemaError(path + "." + key + "[" + std::to_string(i) + "]",
                              "expected a string");
        }
        out.push_back(v[i].get<std::string>());
    }
    return out;
}

std::int64_t get_int(const json& obj, const std::string& key, const std::string& path) {
    const json& v = expect_member(obj, key, path);
    if (!v.is_number_integer()) throw SchemaError(path + "." + key, "expected an integer");
    return v.get<std::int64_t>();
}

}  // namespace

NodeBlueprint node_from_json(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    NodeBlueprint node;
    node.node_name = get_string(j, "node_name", path);
    node.node_type = node_type_from_string(get_string(j, "node_type", path),
                                           path + ".node_type");
    node.description = get_string(j, "description", path);
    node.dependencies = get_string_array(j, "dependencies", path);
    node.input_keys = get_string_array(j, "input", path);
    node.output_keys = get_string_array(j, "output", path);
    node.constraints = get_string(j, "constraints", path);
    const json& impl = expect_member(j, "implementation", path);
    node.logic_description = get_string(impl, "logic_description", path + ".implementation");
    node.prompt_template = get_string(impl, "prompt_template", path + ".implementation");
    node.tools_needed = get_string_array(impl, "tools_needed", path + ".implementation");
    node.all_code = get_string(j, "all_code", path);
    node.version = get_int(j, "version", path);
    if (node.version < 0) throw SchemaError(path + ".version", "expected an integer >= 0");
    return node;
}

nlohmann::json library_to_json(const NodeLibrary& library) {
    json j;
    j["pipeline_description"] = library.pipeline_description;
    j["nodes"] = json::array();
    for (const auto& node : library.nodes) {
        j["nodes"].push_back(node_to_json(node));
    }
    j["connections_plan"] = json::object();
    for (const auto& [node, wiring] : library.connections_plan) {
        json w = json::object();
        for (const auto& [key, source] : wiring) w[key] = source;
        j["connections_plan"][node] = std::move(w);
    }
    j["epoch"] = library.epoch;
    j["provenance"] = {
        {"dataset", library.provenance.dataset},
        {"designer", library.provenance.designer},
        {"seed", library.provenance.seed},
    };
    return j;
}

NodeLibrary library_from_json(const nlohmann::json& document) {
    if (!document.is_object()) throw SchemaError("$", "expected an object");
    NodeLibrary lib;
    lib.pipeline_description = get_string(document, "pipeline_description", "$");
    const json& nodes = expect_member(document, "nodes", "$");
    if (!nodes.is_array()) throw SchemaError("$.nodes", "expected an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        lib.nodes.push_back(node_from_json(nodes[i], "nodes[" + std::to_string(i) + "]"));
    }
    const json& plan = expect_member(document, "connections_plan", "$");
    if (!plan.is_object()) throw SchemaError("$.connections_plan", "expected an object");
    for (const auto& [node, wiring] : plan.items()) {
        if (!wiring.is_object()) {
            throw SchemaError("connections_plan." + node, "expected an object");
        }
        for (const auto& [key, source] : wiring.items()) {
            if (!source.is_string()) {
                throw SchemaError("connections_plan." + node + "." + key, "expected a string");
            }
            lib.connections_plan[node][key] = source.get<std::string>();
        }
    }
    lib.epoch = get_int(document, "epoch", "$");
    if (lib.epoch < 0) throw SchemaError("$.epoch", "expected an integer >= 0");
    const json& prov = expect_member(document, "provenance", "$");
    lib.provenance.dataset = get_string(prov, "dataset", "provenance");
    lib.provenance.designer = get_string(prov, "designer", "provenance");
    const json& seed = expect_member(prov, "seed", "provenance");
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
        throw SchemaError("provenance.seed", "expected an integer");
    }
    lib.provenance.seed = seed.get<std::uint64_t>();
    return lib;
}

std::string serialize_library(const NodeLibrary& library) {
    return library_to_json(library).dump(2) + "\n";
}

NodeLibrary deserialize_library(const std::string& document) {
    json j = json::parse(document, nullptr, false);
    if (j.is_discarded()) throw SchemaError("$", "document is not well-formed");
    return library_from_json(j);
}

}  // namespace nodeforge
