#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nodeforge/blueprint.hpp"
#include "nodeforge/reward.hpp"
#include "nodeforge/trajectory.hpp"

namespace nodeforge {

/// One failing sample shown to the Designer during refinement.
struct EvidenceSample {
    std::string sample_id;
    std::string question;
    std::string answer;
    std::string intermediate_context;  // rendered step outputs
    double node_reward = 0.0;          // bottleneck reward on this sample
};

enum class SelectionPolicy {
    last_epoch,
    best_mean_reward,
};

std::string to_string(SelectionPolicy policy);
SelectionPolicy selection_policy_from_string(const std::string& text);

struct OptimizeOptions {
    int epochs = 10;
    double alpha = 0.6;
    int n_refine = 3;
    DeltaMode delta_mode = DeltaMode::magnitude;
    int jobs = 1;
    SelectionPolicy selection = SelectionPolicy::last_epoch;
    std::size_t evidence_context_budget = 12000;
};

struct EpochReport {
    std::int64_t epoch = 0;
    RewardLedger ledger;
    std::string refined_node;              // empty when nothing was replaced
    std::string blueprint_before_digest;
    std::string blueprint_after_digest;
    std::string designer_analysis;
    std::string refinement_failure;        // non-empty when the old blueprint was kept
    bool refinement_succeeded = false;
};

struct OptimizationRun {
    std::vector<NodeLibrary> snapshots;  // [0] initial, [k] after epoch k
    std::vector<EpochReport> reports;
    std::vector<std::vector<Trajectory>> trajectories;  // per epoch, sample order
    NodeLibrary final_library;
    SelectionPolicy policy = SelectionPolicy::last_epoch;
    std::int64_t chosen_epoch = 0;  // snapshot index the final library came from
};

/// Designer refinement of one blueprint. The interface (name, type,
/// dependencies, IO keys, tools) is frozen; drift triggers one corrective
/// re-prompt, then InterfaceDriftError. Success returns the new blueprint
/// with version + 1.
NodeBlueprint refine_node(const NodeBlueprint& blueprint, const std::vector<EvidenceSample>& evidence,
                          double node_mean_reward, const NodeLibrary& library,
                          LlmGateway& designer, const PromptLibrary& prompts,
                          std::string* analysis_out = nullptr,
                          std::string* explanation_out = nullptr);

/// One epoch: run every sample, score, aggregate, refine at most the
/// bottleneck. No rollback; a failed refinement keeps the library unchanged.
std::pair<NodeLibrary, EpochReport> run_epoch(
    const NodeLibrary& library, const std::vector<QaPair>& samples,
    const std::vector<std::string>& sample_ids, RuntimeEnv& env, const OptimizeOptions& options,
    std::map<std::string, double>& baseline_cache, std::int64_t epoch,
    std::vector<Trajectory>* trajectories_out = nullptr);

using EpochHook = std::function<void(std::int64_t epoch, const NodeLibrary& snapshot,
                                     const EpochReport& report,
                                     const std::vector<Trajectory>& trajectories)>;

/// K epochs with per-epoch snapshots, then final selection by policy.
/// J_0 is cached per sample across epochs.
OptimizationRun optimize(const NodeLibrary& initial, const std::vector<QaPair>& samples,
                         const std::vector<std::string>& sample_ids, RuntimeEnv& env,
                         const OptimizeOptions& options, const EpochHook& on_epoch = {});

std::string blueprint_digest(const NodeBlueprint& blueprint);

nlohmann::json report_to_json(const EpochReport& report);
EpochReport report_from_json(const nlohmann::json& document);

}  // namespace nodeforge
