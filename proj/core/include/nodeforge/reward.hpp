#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nodeforge/blueprint.hpp"
#include "nodeforge/llm.hpp"
#include "nodeforge/prompts.hpp"
#include "nodeforge/trajectory.hpp"

namespace nodeforge {

/// How the relative gain handles the sign of J_0. `magnitude` divides by
/// max(|J_0|, eps) so that rising J always means positive delta; `literal`
/// divides by the signed J_0.
enum class DeltaMode {
    magnitude,
    literal,
};

std::string to_string(DeltaMode mode);
DeltaMode delta_mode_from_string(const std::string& text);

/// Length-normalized sequence log-probability: mean token logprob, <= 0.
/// Perplexity is exp(-J). Throws EmptyTargetError on an empty token list.
double objective_value(const CompletionScore& score);
double perplexity(double objective);

/// delta_t, clamped to |delta| <= 10 before tanh.
double relative_gain(double j_t, double j_0, DeltaMode mode = DeltaMode::magnitude);

/// S_i = tanh(delta + 1), in (-1, 1), strictly increasing in delta.
double improvement_score(double delta);

/// S_c: Kendall tau-a between J_1..J_t and their indices; 0 when t == 1.
double consistency_score(const std::vector<double>& objectives);

/// S_t = (1 - alpha) * S_i + alpha * S_c. Throws AlphaRangeError.
double quality_score(double improvement, double consistency, double alpha);

/// Telescoping rewards: r_1 = S_1, r_t = S_t - S_{t-1}. Their sum is S_m.
std::vector<double> step_rewards(const std::vector<double>& qualities);

struct StepScore {
    int t = 0;  // 1-based step index
    double objective = 0.0;
    double delta = 0.0;
    double improvement = 0.0;
    double consistency = 0.0;
    double quality = 0.0;
    double reward = 0.0;
    bool scoring_failed = false;
};

struct TrajectoryScore {
    double baseline_objective = 0.0;  // J_0
    std::vector<StepScore> steps;
};

/// The frozen scoring prompt around the question and accumulated context.
std::string build_scoring_prompt(const PromptLibrary& prompts, const std::string& question,
                                 const std::string& accumulated);

/// m + 1 score_completion calls (baseline plus one per step); a cached J_0
/// saves the baseline call. A step whose scoring fails carries reward 0 and
/// a flag, and its objective carries the previous value forward.
TrajectoryScore score_trajectory(const Trajectory& trajectory, double alpha,
                                 LlmGateway& executor, const PromptLibrary& prompts,
                                 DeltaMode mode = DeltaMode::magnitude,
                                 std::optional<double> cached_baseline = std::nullopt);

struct RewardLedger {
    std::int64_t epoch = 0;
    std::vector<std::string> node_order;                     // pipeline order
    std::map<std::string, TrajectoryScore> per_sample;       // sample_id -> scores
    std::map<std::string, double> per_node_mean;
    std::string bottleneck;
    std::vector<std::string> refinement_sample_ids;          // worst first, <= n_refine
    std::map<std::string, double> refinement_rewards;        // bottleneck reward per kept id
    DeltaMode delta_mode = DeltaMode::magnitude;
};

/// Means per node, bottleneck argmin (earliest in pipeline order on ties),
/// and the refinement set: samples where the bottleneck's reward is the
/// strict per-sample minimum, ascending by that reward, truncated to
/// n_refine. Throws AlignmentError when step counts disagree with the
/// library.
RewardLedger aggregate_epoch(const std::map<std::string, TrajectoryScore>& scores,
                             const NodeLibrary& library, int n_refine = 3,
                             std::int64_t epoch = 0,
                             DeltaMode mode = DeltaMode::magnitude);

nlohmann::json trajectory_score_to_json(const TrajectoryScore& score);
TrajectoryScore trajectory_score_from_json(const nlohmann::json& document);

nlohmann::json ledger_to_json(const RewardLedger& ledger);
RewardLedger ledger_from_json(const nlohmann::json& document);

}  // namespace nodeforge
