#include "nodeforge/synthesis.hpp"

#include <sstream>

#include "nodeforge/errors.hpp"
#include "nodeforge/util.hpp"

namespace nodeforge {
namespace {

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

std::string render_task_samples_section(const std::vector<QaPair>& previews,
                                        const SynthesisOptions& options) {
    std::ostringstream out;
    out << "Task Samples:\n";
    int count = 0;
    for (const QaPair& sample : previews) {
        if (count >= options.sample_previews) break;
        ++count;
        out << "Sample " << count << ":\n";
        out << "Question: " << truncate_chars(sample.question, options.preview_char_budget)
            << "\n";
        out << "Answer: " << truncate_chars(sample.answer, options.preview_char_budget)
            << "\n\n";
    }
    return out.str();
}

std::string render_strategy_analyses(const std::vector<StrategyAnalysis>& analyses) {
    std::ostringstream out;
    for (const StrategyAnalysis& analysis : analyses) {
        out << "Strategy_" << to_string(analysis.strategy) << " ("
            << to_string(intent_of(analysis.strategy)) << "):\n";
        out << analysis.payload.dump(2) << "\n\n";
    }
    return out.str();
}

std::vector<std::string> parse_string_list(const nlohmann::json& value) {
    std::vector<std::string> items;
    if (value.is_string()) {
        if (!value.get<std::string>().empty()) items.push_back(value.get<std::string>());
        return items;
    }
    if (value.is_array()) {
        for (const auto& entry : value) {
            if (entry.is_string()) {
                items.push_back(entry.get<std::string>());
            } else {
                items.push_back(entry.dump());
            }
        }
    }
    return items;
}

std::string as_text(const nlohmann::json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_null()) return "";
    return value.dump();
}

struct ParsedGeneration {
    NodeLibrary library;
    std::vector<std::string> violations;  // parse-level, merged into validation
    std::string connections_code;
};

ParsedGeneration parse_generation_reply(const nlohmann::json& reply,
                                        const Provenance& provenance) {
    ParsedGeneration parsed;
    parsed.library.epoch = 0;
    parsed.library.provenance = provenance;
    if (!reply.is_object()) {
        parsed.violations.push_back("reply is not a JSON object");
        return parsed;
    }
    parsed.library.pipeline_description = as_text(reply.value("pipeline_description",
                                                              nlohmann::json("")));
    if (reply.contains("Connections")) {
        parsed.connections_code = as_text(reply.at("Connections"));
    } else if (reply.contains("connections")) {
        parsed.connections_code = as_text(reply.at("connections"));
    } else {
        parsed.violations.push_back("missing Connections code");
    }
    if (!reply.contains("nodes") || !reply.at("nodes").is_array() || reply.at("nodes").empty()) {
        parsed.violations.push_back("missing or empty nodes array");
        return parsed;
    }
    std::size_t index = 0;
    for (const auto& entry : reply.at("nodes")) {
        NodeBlueprint node;
        std::string label = "node at index " + std::to_string(index);
        if (!entry.is_object()) {
            parsed.violations.push_back(label + ": not an object");
            ++index;
            continue;
        }
        node.node_name = as_text(entry.value("node_name", nlohmann::json("")));
        if (node.node_name.empty()) {
            parsed.violations.push_back(label + ": missing node_name");
            node.node_name = "unnamed_" + std::to_string(index);
        } else {
            label = "node " + node.node_name;
        }
        std::string type_text = as_text(entry.value("node_type", nlohmann::json("")));
        if (type_text == "LLM_Generator") {
            node.node_type = NodeType::LLM_Generator;
        } else if (type_text == "Retrieval_RAG") {
            node.node_type = NodeType::Retrieval_RAG;
        } else {
            parsed.violations.push_back(label + ": unknown node type \"" + type_text + "\"");
        }
        node.description = as_text(entry.value("description", nlohmann::json("")));
        node.dependencies = parse_string_list(entry.value("dependencies", nlohmann::json::array()));
        node.input_keys = parse_string_list(entry.value("input", nlohmann::json::array()));
        node.output_keys = parse_string_list(entry.value("output", nlohmann::json::array()));
        if (entry.contains("constraints") && entry.at("constraints").is_array()) {
            std::string joined;
            for (const std::string& item : parse_string_list(entry.at("constraints"))) {
                if (!joined.empty()) joined += "; ";
                joined += item;
            }
            node.constraints = joined;
        } else {
            node.constraints = as_text(entry.value("constraints", nlohmann::json("")));
        }
        const nlohmann::json impl = entry.value("implementation", nlohmann::json::object());
        if (impl.is_object()) {
            node.logic_description = as_text(impl.value("logic_description", nlohmann::json("")));
            node.prompt_template = as_text(impl.value("prompt_template", nlohmann::json("")));
            node.tools_needed = parse_string_list(impl.value("tools_needed",
                                                             nlohmann::json::array()));
        } else {
            parsed.violations.push_back(label + ": implementation is not an object");
        }
        node.prompt_template = replace_all(node.prompt_template, "{retrieved_chunks}",
                                           "{retrieved_context}");
        node.all_code = as_text(entry.value("all_code", nlohmann::json("")));
        node.version = 0;
        parsed.library.nodes.push_back(std::move(node));
        ++index;
    }
    return parsed;
}

std::string render_nodes_overview(const NodeLibrary& library) {
    std::ostringstream out;
    for (const NodeBlueprint& node : library.nodes) {
        out << "- " << node.node_name << " | inputs: [";
        for (std::size_t i = 0; i < node.input_keys.size(); ++i) {
            if (i) out << ", ";
            out << node.input_keys[i];
        }
        out << "] | outputs: [";
        for (std::size_t i = 0; i < node.output_keys.size(); ++i) {
            if (i) out << ", ";
            out << node.output_keys[i];
        }
        out << "] | dependencies: [";
        for (std::size_t i = 0; i < node.dependencies.size(); ++i) {
            if (i) out << ", ";
            out << node.dependencies[i];
        }
        out << "]\n";
    }
    return out.str();
}

/// One follow-up Designer call: Connections code to declarative wiring map.
ConnectionsPlan reemit_wiring(const NodeLibrary& library, const std::string& connections_code,
                              LlmGateway& designer, const PromptLibrary& prompts) {
    const nlohmann::json reply = designer.chat_json(prompts.messages(
        "wiring_reemit", {{"nodes_overview", render_nodes_overview(library)},
                          {"connections_code", connections_code}}));
    ConnectionsPlan plan;
    for (const auto& [node_name, wiring] : reply.items()) {
        if (!wiring.is_object()) {
            throw MalformedOutputError("wiring for node " + node_name + " is not an object");
        }
        for (const auto& [input_key, source] : wiring.items()) {
            if (!source.is_string()) {
                throw MalformedOutputError("wiring source " + node_name + "." + input_key +
                                           " is not a string");
            }
            plan[node_name][input_key] = source.get<std::string>();
        }
    }
    return plan;
}

struct Attempt {
    NodeLibrary library;
    ValidationReport report;
    std::string raw_reply;
};

Attempt attempt_from_reply(const std::string& raw_reply, LlmGateway& designer,
                           const PromptLibrary& prompts, const Provenance& provenance) {
    Attempt attempt;
    attempt.raw_reply = raw_reply;
    nlohmann::json reply;
    try {
        reply = nlohmann::json::parse(raw_reply);
    } catch (const nlohmann::json::parse_error&) {
        attempt.report.ok = false;
        attempt.report.violations.push_back("reply is not well-formed JSON");
        return attempt;
    }
    ParsedGeneration parsed = parse_generation_reply(reply, provenance);
    attempt.library = std::move(parsed.library);
    ValidationReport report;
    report.violations = parsed.violations;
    if (!attempt.library.nodes.empty() && parsed.violations.empty()) {
        attempt.library.connections_plan =
            reemit_wiring(attempt.library, parsed.connections_code, designer, prompts);
    }
    const ValidationReport structural = validate_library(attempt.library);
    report.violations.insert(report.violations.end(), structural.violations.begin(),
                             structural.violations.end());
    report.ok = report.violations.empty();
    attempt.report = std::move(report);
    return attempt;
}

std::string part1_system(const PromptLibrary& prompts) {
    return split_system_user(prompts.raw("node_generation_part1")).first;
}

}  // namespace

NodeLibrary generate_initial_nodes(const std::string& task_thinking,
                                   const std::vector<QaPair>& sample_previews,
                                   const std::vector<StrategyAnalysis>& analyses,
                                   LlmGateway& designer, const PromptLibrary& prompts,
                                   const Provenance& provenance,
                                   const SynthesisOptions& options) {
    if (analyses.empty()) {
        throw PreconditionError("node generation requires at least one strategy analysis");
    }
    const std::string part1 = prompts.render(
        "node_generation_part1",
        {{"task_thinking", task_thinking},
         {"task_samples_section", render_task_samples_section(sample_previews, options)},
         {"strategy_analysis", render_strategy_analyses(analyses)},
         {"code_template", prompts.raw("node_template")}});
    const auto [system_text, user_text] = split_system_user(part1);
    std::vector<ChatMessage> messages;
    if (!system_text.empty()) messages.push_back({Role::system, system_text});
    messages.push_back({Role::user, user_text + "\n\n" + prompts.raw("node_generation_part2")});
    const auto [raw_reply, usage] = designer.chat(messages, ResponseFormat::json_object);
    (void)usage;

    Attempt first = attempt_from_reply(raw_reply, designer, prompts, provenance);
    if (first.report.ok) return first.library;

    try {
        return regenerate_on_failure(first.raw_reply, first.report, designer, prompts,
                                     provenance);
    } catch (const ValidationError& second) {
        throw ValidationError("initial node generation failed validation\nfirst attempt:\n" +
                              first.report.to_string() + "\n" + second.what());
    }
}

NodeLibrary regenerate_on_failure(const std::string& previous_output,
                                  const ValidationReport& violations, LlmGateway& designer,
                                  const PromptLibrary& prompts, const Provenance& provenance) {
    if (violations.ok || violations.violations.empty()) {
        throw PreconditionError("regeneration requires a non-empty violation report");
    }
    std::vector<ChatMessage> messages;
    const std::string system_text = part1_system(prompts);
    if (!system_text.empty()) messages.push_back({Role::system, system_text});
    messages.push_back({Role::user, prompts.render("regenerate_fix",
                                                   {{"previous_output", previous_output},
                                                    {"violations", violations.to_string()}})});
    const auto [raw_reply, usage] = designer.chat(messages, ResponseFormat::json_object);
    (void)usage;
    Attempt attempt = attempt_from_reply(raw_reply, designer, prompts, provenance);
    if (attempt.report.ok) return attempt.library;
    throw ValidationError("regenerated output failed validation:\n" +
                          attempt.report.to_string());
}

}  // namespace nodeforge
