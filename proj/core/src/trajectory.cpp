#include "nodeforge/trajectory.hpp"

#include <sstream>

#include "nodeforge/errors.hpp"
#include "nodeforge/util.hpp"

namespace nodeforge {
namespace {

std::string trim_copy(const std::string& text) {
    std::size_t begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

std::vector<ChatMessage> render_template_messages(const NodeBlueprint& blueprint,
                                                  const std::map<std::string, std::string>& slots) {
    const auto [system_raw, user_raw] = split_system_user(blueprint.prompt_template);
    std::vector<ChatMessage> messages;
    if (!system_raw.empty()) {
        messages.push_back({Role::system, render_braces(system_raw, slots)});
    }
    messages.push_back({Role::user, render_braces(user_raw, slots)});
    return messages;
}

ResponseFormat format_for(const NodeBlueprint& blueprint) {
    if (blueprint.output_keys.size() > 1) return ResponseFormat::json_object;
    if (contains_ci(blueprint.prompt_template, "json")) return ResponseFormat::json_object;
    if (contains_ci(blueprint.constraints, "json")) return ResponseFormat::json_object;
    return ResponseFormat::normal;
}

std::string json_value_text(const nlohmann::json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_null()) return "";
    return value.dump();
}

std::map<std::string, std::string> map_reply(const NodeBlueprint& blueprint,
                                             const std::string& reply, ResponseFormat format) {
    std::map<std::string, std::string> output;
    if (format == ResponseFormat::normal) {
        output[blueprint.output_keys.front()] = reply;
        return output;
    }
    const nlohmann::json parsed = nlohmann::json::parse(reply);
    for (const std::string& key : blueprint.output_keys) {
        if (!parsed.contains(key)) {
            throw MalformedOutputError("node " + blueprint.node_name + " output lacks key " +
                                       key);
        }
        output[key] = json_value_text(parsed.at(key));
    }
    return output;
}

/// Designer call deriving what knowledge to retrieve; never the raw input.
std::string derive_retrieval_target(const NodeBlueprint& blueprint,
                                    const std::map<std::string, std::string>& inputs,
                                    RuntimeEnv& env) {
    std::ostringstream inputs_text;
    for (const auto& [key, value] : inputs) {
        inputs_text << key << ": " << truncate_chars(value, 2000) << "\n";
    }
    const nlohmann::json reply = env.designer.chat_json(env.prompts.messages(
        "retrieval_target", {{"logic_description", blueprint.logic_description},
                             {"inputs_text", inputs_text.str()}}));
    std::string target;
    if (reply.contains("target_description")) {
        target = trim_copy(json_value_text(reply.at("target_description")));
    }
    if (target.empty()) {
        throw MalformedOutputError("node " + blueprint.node_name +
                                   " retrieval target derivation returned no target");
    }
    for (const auto& [key, value] : inputs) {
        if (target == trim_copy(value)) {
            target = "background knowledge for: " +
                     truncate_chars(blueprint.logic_description, 300);
            break;
        }
    }
    return target;
}

std::string render_retrieved_context(const SearchSession& session, std::size_t budget) {
    std::ostringstream out;
    if (!session.final_summary.empty()) out << session.final_summary << "\n";
    out << "\nSearch results:\n";
    for (const SearchRound& round : session.rounds) {
        for (const SearchHit& hit : round.results) {
            out << "- " << hit.title << " (" << hit.url << "): " << hit.snippet << "\n";
        }
    }
    return truncate_chars(out.str(), budget);
}

std::string render_output_body(const NodeBlueprint& blueprint,
                               const std::map<std::string, std::string>& output) {
    if (blueprint.output_keys.size() == 1) {
        return output.at(blueprint.output_keys.front());
    }
    std::ostringstream out;
    for (const std::string& key : blueprint.output_keys) {
        out << key << ": " << output.at(key) << "\n";
    }
    return out.str();
}

std::string rendered_block(const std::string& node_name, const std::string& body) {
    std::string trimmed = body;
    while (!trimmed.empty() && (trimmed.back() == '\n' || trimmed.back() == '\r')) {
        trimmed.pop_back();
    }
    return "### Output of " + node_name + "\n" + trimmed + "\n";
}

struct NodeResult {
    bool failed = false;
    std::string placeholder;
    std::map<std::string, std::string> output;
    std::string body;
};

}  // namespace

std::map<std::string, std::string> execute_node(const NodeBlueprint& blueprint,
                                                const std::map<std::string, std::string>& inputs,
                                                RuntimeEnv& env) {
    for (const std::string& key : blueprint.input_keys) {
        if (!inputs.count(key)) {
            throw MissingInputError("node " + blueprint.node_name + " requires input " + key);
        }
    }
    std::map<std::string, std::string> slots = inputs;
    if (blueprint.node_type == NodeType::Retrieval_RAG) {
        const std::string target = derive_retrieval_target(blueprint, inputs, env);
        const SearchSession session =
            run_multi_turn_search(target, env.search, env.node_search_engine, env.executor,
                                  env.prompts, env.max_search_rounds);
        slots["retrieved_context"] =
            render_retrieved_context(session, env.retrieved_context_budget);
    }
    const ResponseFormat format = format_for(blueprint);
    const auto [reply, usage] = env.executor.chat(render_template_messages(blueprint, slots),
                                                  format);
    (void)usage;
    return map_reply(blueprint, reply, format);
}

Trajectory run_pipeline(const NodeLibrary& library, const QaPair& sample,
                        const std::string& sample_id, RuntimeEnv& env) {
    const PipelineGraph graph = build_pipeline_graph(library);
    const std::map<std::string, std::string> initial_fields = {{"question", sample.question}};

    Trajectory trajectory;
    trajectory.sample_id = sample_id;
    trajectory.question = sample.question;
    trajectory.ground_truth = sample.answer;
    trajectory.accumulated.push_back("");

    std::map<std::string, NodeResult> results;
    for (const std::string& node_name : graph.ordered_nodes) {
        const NodeBlueprint& blueprint = *library.find(node_name);
        std::map<std::string, std::string> inputs;
        auto wiring_it = library.connections_plan.find(node_name);
        for (const std::string& key : blueprint.input_keys) {
            if (wiring_it == library.connections_plan.end() ||
                !wiring_it->second.count(key)) {
                throw WiringError("no wiring for " + node_name + "." + key);
            }
            const WiringSource source = parse_wiring_source(wiring_it->second.at(key));
            switch (source.kind) {
                case WiringSource::Kind::initial_input: {
                    auto field = initial_fields.find(source.key);
                    if (field == initial_fields.end()) {
                        throw WiringError("initial input has no field " + source.key);
                    }
                    inputs[key] = field->second;
                    break;
                }
                case WiringSource::Kind::node_key: {
                    const NodeResult& producer = results.at(source.node);
                    if (producer.failed) {
                        inputs[key] = producer.placeholder;
                    } else {
                        auto value = producer.output.find(source.key);
                        if (value == producer.output.end()) {
                            throw WiringError("node " + source.node + " produced no key " +
                                              source.key);
                        }
                        inputs[key] = value->second;
                    }
                    break;
                }
                case WiringSource::Kind::node_whole: {
                    const NodeResult& producer = results.at(source.node);
                    inputs[key] = producer.failed ? producer.placeholder : producer.body;
                    break;
                }
            }
        }

        NodeResult result;
        TrajectoryStep step;
        step.node_name = node_name;
        try {
            result.output = execute_node(blueprint, inputs, env);
            result.body = render_output_body(blueprint, result.output);
        } catch (const WiringError&) {
            throw;
        } catch (const Error& error) {
            result.failed = true;
            result.placeholder = "[node " + node_name + " failed: " + error.what() + "]";
            step.failed = true;
            step.failure_note = error.what();
        }
        step.output = result.output;
        step.rendered = rendered_block(node_name, result.failed ? result.placeholder
                                                                : result.body);
        trajectory.accumulated.push_back(trajectory.accumulated.back() + step.rendered);
        trajectory.steps.push_back(step);
        results.emplace(node_name, std::move(result));
    }

    const NodeBlueprint& sink = sink_node(library);
    const NodeResult& sink_result = results.at(sink.node_name);
    if (sink_result.failed) {
        trajectory.final_answer = sink_result.placeholder;
    } else {
        trajectory.final_answer = sink_result.output.at(final_answer_key(library));
    }
    return trajectory;
}

nlohmann::json trajectory_to_json(const Trajectory& trajectory) {
    nlohmann::json steps = nlohmann::json::array();
    for (const TrajectoryStep& step : trajectory.steps) {
        steps.push_back({{"node_name", step.node_name},
                         {"output", step.output},
                         {"rendered", step.rendered},
                         {"failed", step.failed},
                         {"failure_note", step.failure_note}});
    }
    return {{"sample_id", trajectory.sample_id},
            {"question", trajectory.question},
            {"ground_truth", trajectory.ground_truth},
            {"steps", steps},
            {"accumulated", trajectory.accumulated},
            {"final_answer", trajectory.final_answer}};
}

namespace {

const nlohmann::json& expect(const nlohmann::json& document, const std::string& key,
                             const std::string& path) {
    if (!document.is_object() || !document.contains(key)) {
        throw SchemaError(path + "." + key, "missing member");
    }
    return document.at(key);
}

}  // namespace

Trajectory trajectory_from_json(const nlohmann::json& document) {
    Trajectory trajectory;
    trajectory.sample_id = expect(document, "sample_id", "$").get<std::string>();
    trajectory.question = expect(document, "question", "$").get<std::string>();
    trajectory.ground_truth = expect(document, "ground_truth", "$").get<std::string>();
    const nlohmann::json& steps = expect(document, "steps", "$");
    if (!steps.is_array()) throw SchemaError("$.steps", "expected an array");
    std::size_t index = 0;
    for (const auto& entry : steps) {
        const std::string path = "$.steps[" + std::to_string(index) + "]";
        TrajectoryStep step;
        step.node_name = expect(entry, "node_name", path).get<std::string>();
        const nlohmann::json& output = expect(entry, "output", path);
        if (!output.is_object()) throw SchemaError(path + ".output", "expected an object");
        for (const auto& [key, value] : output.items()) {
            step.output[key] = value.get<std::string>();
        }
        step.rendered = expect(entry, "rendered", path).get<std::string>();
        step.failed = expect(entry, "failed", path).get<bool>();
        step.failure_note = expect(entry, "failure_note", path).get<std::string>();
        trajectory.steps.push_back(std::move(step));
        ++index;
    }
    const nlohmann::json& accumulated = expect(document, "accumulated", "$");
    if (!accumulated.is_array()) throw SchemaError("$.accumulated", "expected an array");
    for (const auto& entry : accumulated) {
        trajectory.accumulated.push_back(entry.get<std::string>());
    }
    if (trajectory.accumulated.size() != trajectory.steps.size() + 1) {
        throw SchemaError("$.accumulated", "expected steps + 1 entries");
    }
    trajectory.final_answer = expect(document, "final_answer", "$").get<std::string>();
    return trajectory;
}

std::string serialize_trajectory(const Trajectory& trajectory) {
    return trajectory_to_json(trajectory).dump(2) + "\n";
}

Trajectory deserialize_trajectory(const std::string& document) {
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error&) {
        throw SchemaError("$", "document is not well-formed");
    }
    return trajectory_from_json(parsed);
}

}  // namespace nodeforge
