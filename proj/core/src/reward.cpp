#include "nodeforge/reward.hpp"

#include <algorithm>
#include <cmath>

#include "nodeforge/errors.hpp"

namespace nodeforge {

std::string to_string(DeltaMode mode) {
    return mode == DeltaMode::literal ? "literal" : "magnitude";
}

DeltaMode delta_mode_from_string(const std::string& text) {
    if (text == "magnitude") return DeltaMode::magnitude;
    if (text == "literal") return DeltaMode::literal;
    throw ConfigError("unknown delta mode: " + text);
}

double objective_value(const CompletionScore& score) {
    if (score.tokens.empty()) {
        throw EmptyTargetError("objective requires at least one scored token");
    }
    double sum = 0.0;
    for (const ScoredToken& token : score.tokens) sum += token.logprob;
    return sum / static_cast<double>(score.tokens.size());
}

double perplexity(double objective) { return std::exp(-objective); }

double relative_gain(double j_t, double j_0, DeltaMode mode) {
    constexpr double kEpsilon = 1e-6;
    constexpr double kClamp = 10.0;
    double denominator;
    if (mode == DeltaMode::magnitude) {
        denominator = std::max(std::abs(j_0), kEpsilon);
    } else {
        denominator = j_0 == 0.0 ? kEpsilon : j_0;
    }
    const double delta = (j_t - j_0) / denominator;
    return std::clamp(delta, -kClamp, kClamp);
}

double improvement_score(double delta) { return std::tanh(delta + 1.0); }

double consistency_score(const std::vector<double>& objectives) {
    if (objectives.empty()) {
        throw PreconditionError("consistency requires at least one objective");
    }
    const std::size_t t = objectives.size();
    if (t == 1) return 0.0;
    long concordant = 0;
    long discordant = 0;
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = i + 1; j < t; ++j) {
            if (objectives[j] > objectives[i]) {
                ++concordant;
            } else if (objectives[j] < objectives[i]) {
                ++discordant;
            }
        }
    }
    const double pairs = static_cast<double>(t) * static_cast<double>(t - 1) / 2.0;
    return static_cast<double>(concordant - discordant) / pairs;
}

double quality_score(double improvement, double consistency, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw AlphaRangeError("alpha must be within [0, 1], got " + std::to_string(alpha));
    }
    return (1.0 - alpha) * improvement + alpha * consistency;
}

std::vector<double> step_rewards(const std::vector<double>& qualities) {
    if (qualities.empty()) {
        throw PreconditionError("step rewards require at least one quality score");
    }
    std::vector<double> rewards;
    rewards.reserve(qualities.size());
    rewards.push_back(qualities.front());
    for (std::size_t t = 1; t < qualities.size(); ++t) {
        rewards.push_back(qualities[t] - qualities[t - 1]);
    }
    return rewards;
}

std::string build_scoring_prompt(const PromptLibrary& prompts, const std::string& question,
                                 const std::string& accumulated) {
    std::string prompt = prompts.render("scoring_frame", {{"question", question},
                                                          {"reasoning", accumulated}});
    while (!prompt.empty() && (prompt.back() == '\n' || prompt.back() == '\r')) {
        prompt.pop_back();
    }
    return prompt;
}

TrajectoryScore score_trajectory(const Trajectory& trajectory, double alpha,
                                 LlmGateway& executor, const PromptLibrary& prompts,
                                 DeltaMode mode, std::optional<double> cached_baseline) {
    if (trajectory.steps.empty()) {
        throw PreconditionError("trajectory has no steps to score");
    }
    if (trajectory.accumulated.size() != trajectory.steps.size() + 1) {
        throw AlignmentError("trajectory holds " + std::to_string(trajectory.steps.size()) +
                             " steps but " + std::to_string(trajectory.accumulated.size()) +
                             " accumulated contexts");
    }
    if (trajectory.ground_truth.empty()) {
        throw EmptyTargetError("trajectory has an empty ground truth");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw AlphaRangeError("alpha must be within [0, 1], got " + std::to_string(alpha));
    }

    TrajectoryScore result;
    if (cached_baseline) {
        result.baseline_objective = *cached_baseline;
    } else {
        const std::string prompt =
            build_scoring_prompt(prompts, trajectory.question, trajectory.accumulated[0]);
        result.baseline_objective =
            objective_value(executor.score_completion(prompt, trajectory.ground_truth));
    }

    const std::size_t m = trajectory.steps.size();
    std::vector<double> objectives;
    std::vector<double> qualities;
    std::vector<bool> failed(m, false);
    objectives.reserve(m);
    double previous = result.baseline_objective;
    for (std::size_t t = 1; t <= m; ++t) {
        double j_t = previous;
        try {
            const std::string prompt =
                build_scoring_prompt(prompts, trajectory.question, trajectory.accumulated[t]);
            j_t = objective_value(executor.score_completion(prompt, trajectory.ground_truth));
        } catch (const Error&) {
            failed[t - 1] = true;  // carry J forward, reward zeroed below
        }
        objectives.push_back(j_t);
        previous = j_t;

        StepScore step;
        step.t = static_cast<int>(t);
        step.objective = j_t;
        step.delta = relative_gain(j_t, result.baseline_objective, mode);
        step.improvement = improvement_score(step.delta);
        step.consistency = consistency_score(objectives);
        step.quality = quality_score(step.improvement, step.consistency, alpha);
        step.scoring_failed = failed[t - 1];
        qualities.push_back(step.quality);
        result.steps.push_back(step);
    }

    const std::vector<double> rewards = step_rewards(qualities);
    for (std::size_t i = 0; i < m; ++i) {
        result.steps[i].reward = failed[i] ? 0.0 : rewards[i];
    }
    return result;
}

RewardLedger aggregate_epoch(const std::map<std::string, TrajectoryScore>& scores,
                             const NodeLibrary& library, int n_refine, std::int64_t epoch,
                             DeltaMode mode) {
    if (scores.empty()) {
        throw PreconditionError("epoch aggregation requires at least one scored sample");
    }
    if (n_refine < 0) {
        throw PreconditionError("n_refine must be non-negative");
    }
    RewardLedger ledger;
    ledger.epoch = epoch;
    ledger.delta_mode = mode;
    ledger.node_order = build_pipeline_graph(library).ordered_nodes;
    ledger.per_sample = scores;

    const std::size_t m = ledger.node_order.size();
    for (const auto& [sample_id, score] : scores) {
        if (score.steps.size() != m) {
            throw AlignmentError("sample " + sample_id + " holds " +
                                 std::to_string(score.steps.size()) +
                                 " step scores but the library holds " + std::to_string(m) +
                                 " nodes");
        }
    }

    for (std::size_t i = 0; i < m; ++i) {
        double sum = 0.0;
        for (const auto& [sample_id, score] : scores) sum += score.steps[i].reward;
        ledger.per_node_mean[ledger.node_order[i]] =
            sum / static_cast<double>(scores.size());
    }

    std::size_t bottleneck_index = 0;
    for (std::size_t i = 1; i < m; ++i) {
        if (ledger.per_node_mean.at(ledger.node_order[i]) <
            ledger.per_node_mean.at(ledger.node_order[bottleneck_index])) {
            bottleneck_index = i;
        }
    }
    ledger.bottleneck = ledger.node_order[bottleneck_index];

    std::vector<std::pair<double, std::string>> candidates;
    for (const auto& [sample_id, score] : scores) {
        const double bottleneck_reward = score.steps[bottleneck_index].reward;
        bool strict_minimum = true;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == bottleneck_index) continue;
            if (score.steps[i].reward <= bottleneck_reward) {
                strict_minimum = false;
                break;
            }
        }
        if (strict_minimum) candidates.emplace_back(bottleneck_reward, sample_id);
    }
    std::sort(candidates.begin(), candidates.end());
    if (candidates.size() > static_cast<std::size_t>(n_refine)) {
        candidates.resize(static_cast<std::size_t>(n_refine));
    }
    for (const auto& [reward, sample_id] : candidates) {
        ledger.refinement_sample_ids.push_back(sample_id);
        ledger.refinement_rewards[sample_id] = reward;
    }
    return ledger;
}

nlohmann::json trajectory_score_to_json(const TrajectoryScore& score) {
    nlohmann::json steps = nlohmann::json::array();
    for (const StepScore& step : score.steps) {
        steps.push_back({{"t", step.t},
                         {"objective", step.objective},
                         {"delta", step.delta},
                         {"improvement", step.improvement},
                         {"consistency", step.consistency},
                         {"quality", step.quality},
                         {"reward", step.reward},
                         {"scoring_failed", step.scoring_failed}});
    }
    return {{"baseline_objective", score.baseline_objective}, {"steps", steps}};
}

TrajectoryScore trajectory_score_from_json(const nlohmann::json& document) {
    TrajectoryScore score;
    score.baseline_objective = document.at("baseline_objective").get<double>();
    for (const auto& row : document.at("steps")) {
        StepScore step;
        step.t = row.at("t").get<int>();
        step.objective = row.at("objective").get<double>();
        step.delta = row.at("delta").get<double>();
        step.improvement = row.at("improvement").get<double>();
        step.consistency = row.at("consistency").get<double>();
        step.quality = row.at("quality").get<double>();
        step.reward = row.at("reward").get<double>();
        step.scoring_failed = row.at("scoring_failed").get<bool>();
        score.steps.push_back(step);
    }
    return score;
}

nlohmann::json ledger_to_json(const RewardLedger& ledger) {
    nlohmann::json per_sample = nlohmann::json::object();
    for (const auto& [sample_id, score] : ledger.per_sample) {
        per_sample[sample_id] = trajectory_score_to_json(score);
    }
    return {{"epoch", ledger.epoch},
            {"delta_mode", to_string(ledger.delta_mode)},
            {"node_order", ledger.node_order},
            {"per_node_mean", ledger.per_node_mean},
            {"bottleneck", ledger.bottleneck},
            {"refinement_sample_ids", ledger.refinement_sample_ids},
            {"refinement_rewards", ledger.refinement_rewards},
            {"per_sample", per_sample}};
}

RewardLedger ledger_from_json(const nlohmann::json& document) {
    RewardLedger ledger;
    ledger.epoch = document.at("epoch").get<std::int64_t>();
    ledger.delta_mode = delta_mode_from_string(document.at("delta_mode").get<std::string>());
    ledger.node_order = document.at("node_order").get<std::vector<std::string>>();
    ledger.bottleneck = document.at("bottleneck").get<std::string>();
    ledger.per_node_mean =
        document.at("per_node_mean").get<std::map<std::string, double>>();
    ledger.refinement_sample_ids =
        document.at("refinement_sample_ids").get<std::vector<std::string>>();
    ledger.refinement_rewards =
        document.at("refinement_rewards").get<std::map<std::string, double>>();
    for (const auto& [sample_id, entry] : document.at("per_sample").items()) {
        ledger.per_sample[sample_id] = trajectory_score_from_json(entry);
    }
    return ledger;
}

}  // namespace nodeforge
