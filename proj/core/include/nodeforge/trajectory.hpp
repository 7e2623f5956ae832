#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nodeforge/blueprint.hpp"
#include "nodeforge/harvest.hpp"
#include "nodeforge/llm.hpp"
#include "nodeforge/prompts.hpp"
#include "nodeforge/search.hpp"

namespace nodeforge {

struct TrajectoryStep {
    std::string node_name;
    std::map<std::string, std::string> output;  // output_key -> value, empty when failed
    std::string rendered;                       // "### Output of <name>\n...\n"
    bool failed = false;
    std::string failure_note;

    bool operator==(const TrajectoryStep&) const = default;
};

/// One pipeline execution over one sample. accumulated[0] is the empty
/// baseline A_0; accumulated[t] appends step t's rendered block, so every
/// A_{t-1} is a prefix of A_t. The question travels separately and never
/// enters the accumulated context.
struct Trajectory {
    std::string sample_id;
    std::string question;
    std::string ground_truth;
    std::vector<TrajectoryStep> steps;
    std::vector<std::string> accumulated;  // size steps.size() + 1
    std::string final_answer;

    bool operator==(const Trajectory&) const = default;
};

struct RuntimeEnv {
    LlmGateway& executor;
    LlmGateway& designer;
    SearchBackend& search;
    const PromptLibrary& prompts;
    int max_search_rounds = 10;
    EngineKind node_search_engine = EngineKind::general_web;
    std::size_t retrieved_context_budget = 8000;
};

/// Runs one node in isolation. LLM_Generator renders the prompt template with
/// the inputs and chats once; Retrieval_RAG derives a retrieval target
/// (Designer), runs one search session (Executor controller), then one
/// summarization chat with {retrieved_context} bound.
std::map<std::string, std::string> execute_node(const NodeBlueprint& blueprint,
                                                const std::map<std::string, std::string>& inputs,
                                                RuntimeEnv& env);

/// Executes the whole library in pipeline order. Failed nodes yield a
/// placeholder block and execution continues; only unresolvable wiring
/// aborts.
Trajectory run_pipeline(const NodeLibrary& library, const QaPair& sample,
                        const std::string& sample_id, RuntimeEnv& env);

nlohmann::json trajectory_to_json(const Trajectory& trajectory);
Trajectory trajectory_from_json(const nlohmann::json& document);
std::string serialize_trajectory(const Trajectory& trajectory);
Trajectory deserialize_trajectory(const std::string& document);

}  // namespace nodeforge
