#include "nodeforge/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include "nodeforge/errors.hpp"
#include "nodeforge/util.hpp"

namespace nodeforge {
namespace {

constexpr const char* kOptimizationFocus =
    "Propose the most effective prompt and logic changes to raise this node's reward. "
    "The node's interface (name, type, dependencies, input, output, tools) must stay "
    "exactly as it is.";

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

std::string join_samples(const std::vector<EvidenceSample>& evidence,
                         const std::function<const std::string&(const EvidenceSample&)>& pick) {
    if (evidence.size() == 1) return pick(evidence.front());
    std::ostringstream out;
    for (std::size_t i = 0; i < evidence.size(); ++i) {
        if (i) out << "\n";
        out << "[Sample " << (i + 1) << "] " << pick(evidence[i]);
    }
    return out.str();
}

std::string join_contexts(const std::vector<EvidenceSample>& evidence) {
    if (evidence.size() == 1) return evidence.front().intermediate_context;
    std::ostringstream out;
    for (std::size_t i = 0; i < evidence.size(); ++i) {
        out << "[Sample " << (i + 1) << "]\n" << evidence[i].intermediate_context << "\n\n";
    }
    return out.str();
}

std::string number_text(double value) { return nlohmann::json(value).dump(); }

std::string json_text(const nlohmann::json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_null()) return "";
    return value.dump();
}

int node_position(const NodeLibrary& library, const std::string& node_name) {
    const PipelineGraph graph = build_pipeline_graph(library);
    auto it = std::find(graph.ordered_nodes.begin(), graph.ordered_nodes.end(), node_name);
    return static_cast<int>(it - graph.ordered_nodes.begin()) + 1;
}

struct CandidateCheck {
    NodeBlueprint blueprint;
    std::vector<std::string> drift;
    std::vector<std::string> malformed;
    std::string analysis;
    std::string explanation;
};

bool same_strings(const std::vector<std::string>& a, const nlohmann::json& b) {
    if (!b.is_array() || b.size() != a.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!b[i].is_string() || b[i].get<std::string>() != a[i]) return false;
    }
    return true;
}

void check_frozen_field(const nlohmann::json& source, const char* key,
                        const NodeBlueprint& original, std::vector<std::string>& drift) {
    if (!source.is_object() || !source.contains(key)) return;
    const nlohmann::json& value = source.at(key);
    const std::string field = key;
    if (field == "node_name") {
        if (json_text(value) != original.node_name) drift.push_back("changed node_name");
    } else if (field == "node_type") {
        if (json_text(value) != to_string(original.node_type)) drift.push_back("changed node_type");
    } else if (field == "dependencies") {
        if (!same_strings(original.dependencies, value)) drift.push_back("changed dependencies");
    } else if (field == "input") {
        if (!same_strings(original.input_keys, value)) drift.push_back("changed input keys");
    } else if (field == "output") {
        if (!same_strings(original.output_keys, value)) drift.push_back("changed output keys");
    }
}

void check_tools(const nlohmann::json& impl, const NodeBlueprint& original,
                 std::vector<std::string>& drift) {
    if (!impl.is_object() || !impl.contains("tools_needed")) return;
    const nlohmann::json& tools = impl.at("tools_needed");
    if (tools.is_array()) {
        if (!same_strings(original.tools_needed, tools)) drift.push_back("changed tools_needed");
        return;
    }
    if (tools.is_string()) {
        const bool wants_search = tools.get<std::string>().find("Search") != std::string::npos;
        const bool has_search = !original.tools_needed.empty();
        if (wants_search != has_search) drift.push_back("changed tools_needed");
        return;
    }
    if (!tools.is_null()) drift.push_back("changed tools_needed");
}

CandidateCheck check_reply(const nlohmann::json& reply, const NodeBlueprint& original) {
    CandidateCheck check;
    check.blueprint = original;
    if (!reply.is_object()) {
        check.malformed.push_back("reply is not a JSON object");
        return check;
    }
    check_frozen_field(reply, "node_name", original, check.drift);
    check_frozen_field(reply, "node_type", original, check.drift);
    check_frozen_field(reply, "dependencies", original, check.drift);
    check_frozen_field(reply, "input", original, check.drift);
    check_frozen_field(reply, "output", original, check.drift);

    if (!reply.contains("optimized_implementation") ||
        !reply.at("optimized_implementation").is_object()) {
        check.malformed.push_back("missing optimized_implementation object");
        return check;
    }
    const nlohmann::json& impl = reply.at("optimized_implementation");
    check_frozen_field(impl, "node_name", original, check.drift);
    check_frozen_field(impl, "node_type", original, check.drift);
    check_frozen_field(impl, "dependencies", original, check.drift);
    check_frozen_field(impl, "input", original, check.drift);
    check_frozen_field(impl, "output", original, check.drift);
    check_tools(impl, original, check.drift);

    if (impl.contains("prompt_template") && impl.at("prompt_template").is_string() &&
        !impl.at("prompt_template").get<std::string>().empty()) {
        check.blueprint.prompt_template = replace_all(
            impl.at("prompt_template").get<std::string>(), "{retrieved_chunks}",
            "{retrieved_context}");
    }
    if (impl.contains("logic_description") && impl.at("logic_description").is_string() &&
        !impl.at("logic_description").get<std::string>().empty()) {
        check.blueprint.logic_description = impl.at("logic_description").get<std::string>();
    }
    if (reply.contains("optimized_all_code") && reply.at("optimized_all_code").is_string() &&
        !reply.at("optimized_all_code").get<std::string>().empty()) {
        check.blueprint.all_code = reply.at("optimized_all_code").get<std::string>();
    }
    check.blueprint.version = original.version + 1;

    const ValidationReport report = validate_blueprint(check.blueprint);
    for (const std::string& violation : report.violations) {
        check.malformed.push_back("invalid optimized node: " + violation);
    }
    check.analysis = reply.contains("analysis") ? reply.at("analysis").dump() : "";
    check.explanation = json_text(reply.value("optimization_explanation", nlohmann::json("")));
    return check;
}

}  // namespace

std::string to_string(SelectionPolicy policy) {
    return policy == SelectionPolicy::best_mean_reward ? "best_mean_reward" : "last_epoch";
}

SelectionPolicy selection_policy_from_string(const std::string& text) {
    if (text == "last_epoch") return SelectionPolicy::last_epoch;
    if (text == "best_mean_reward") return SelectionPolicy::best_mean_reward;
    throw ConfigError("unknown selection policy: " + text);
}

std::string blueprint_digest(const NodeBlueprint& blueprint) {
    return fnv1a64_hex(node_to_json(blueprint).dump());
}

NodeBlueprint refine_node(const NodeBlueprint& blueprint, const std::vector<EvidenceSample>& evidence,
                          double node_mean_reward, const NodeLibrary& library,
                          LlmGateway& designer, const PromptLibrary& prompts,
                          std::string* analysis_out, std::string* explanation_out) {
    if (evidence.empty()) {
        throw PreconditionError("refinement requires at least one evidence sample");
    }
    const nlohmann::json implementation = {
        {"logic_description", blueprint.logic_description},
        {"prompt_template", blueprint.prompt_template},
        {"tools_needed", blueprint.tools_needed},
    };
    std::vector<ChatMessage> messages = prompts.messages(
        "node_optimization",
        {{"question", join_samples(evidence, [](const EvidenceSample& e) -> const std::string& {
              return e.question;
          })},
         {"answer", join_samples(evidence, [](const EvidenceSample& e) -> const std::string& {
              return e.answer;
          })},
         {"node_name", blueprint.node_name},
         {"node_type", to_string(blueprint.node_type)},
         {"node_description", blueprint.description},
         {"node_reward", number_text(node_mean_reward)},
         {"node_position", std::to_string(node_position(library, blueprint.node_name))},
         {"node_implementation", implementation.dump(2)},
         {"node_all_code", blueprint.all_code},
         {"intermediate_context", join_contexts(evidence)},
         {"optimization_focus", kOptimizationFocus}});

    auto [raw_reply, usage] = designer.chat(messages, ResponseFormat::json_object);
    (void)usage;
    CandidateCheck check = check_reply(nlohmann::json::parse(raw_reply), blueprint);
    if (!check.drift.empty() || !check.malformed.empty()) {
        std::string problems;
        for (const std::string& item : check.drift) problems += item + "; ";
        for (const std::string& item : check.malformed) problems += item + "; ";
        messages.push_back({Role::assistant, raw_reply});
        messages.push_back({Role::user,
                            "Your optimized node failed interface checks: " + problems +
                                "Re-emit the full JSON object, keeping node_name, node_type, "
                                "dependencies, input, output, and tools_needed exactly "
                                "unchanged, with a complete optimized_implementation."});
        auto [retry_reply, retry_usage] = designer.chat(messages, ResponseFormat::json_object);
        (void)retry_usage;
        check = check_reply(nlohmann::json::parse(retry_reply), blueprint);
        if (!check.drift.empty()) {
            std::string joined;
            for (const std::string& item : check.drift) {
                if (!joined.empty()) joined += "; ";
                joined += item;
            }
            throw InterfaceDriftError("node " + blueprint.node_name +
                                      " refinement drifted after one re-prompt: " + joined);
        }
        if (!check.malformed.empty()) {
            std::string joined;
            for (const std::string& item : check.malformed) {
                if (!joined.empty()) joined += "; ";
                joined += item;
            }
            throw MalformedOutputError("node " + blueprint.node_name +
                                       " refinement stayed malformed after one re-prompt: " +
                                       joined);
        }
    }
    if (analysis_out) *analysis_out = check.analysis;
    if (explanation_out) *explanation_out = check.explanation;
    return check.blueprint;
}

std::pair<NodeLibrary, EpochReport> run_epoch(
    const NodeLibrary& library, const std::vector<QaPair>& samples,
    const std::vector<std::string>& sample_ids, RuntimeEnv& env, const OptimizeOptions& options,
    std::map<std::string, double>& baseline_cache, std::int64_t epoch,
    std::vector<Trajectory>* trajectories_out) {
    if (samples.empty()) throw PreconditionError("epoch requires at least one sample");
    if (samples.size() != sample_ids.size()) {
        throw PreconditionError("sample ids and samples differ in length");
    }

    std::vector<Trajectory> trajectories(samples.size());
    const int jobs = std::max(1, options.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            trajectories[i] = run_pipeline(library, samples[i], sample_ids[i], env);
        }
    } else {
        std::vector<std::thread> workers;
        std::atomic<std::size_t> next{0};
        std::mutex error_mutex;
        std::exception_ptr first_error;
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < samples.size();
                     i = next.fetch_add(1)) {
                    try {
                        trajectories[i] = run_pipeline(library, samples[i], sample_ids[i], env);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (std::thread& worker : workers) worker.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    std::map<std::string, TrajectoryScore> scores;
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
        std::optional<double> cached;
        auto it = baseline_cache.find(sample_ids[i]);
        if (it != baseline_cache.end()) cached = it->second;
        TrajectoryScore score = score_trajectory(trajectories[i], options.alpha, env.executor,
                                                 env.prompts, options.delta_mode, cached);
        baseline_cache[sample_ids[i]] = score.baseline_objective;
        scores[sample_ids[i]] = std::move(score);
    }
    if (trajectories_out) *trajectories_out = trajectories;

    EpochReport report;
    report.epoch = epoch;
    report.ledger =
        aggregate_epoch(scores, library, options.n_refine, epoch, options.delta_mode);

    const std::string& bottleneck = report.ledger.bottleneck;
    const NodeBlueprint& before = *library.find(bottleneck);
    report.blueprint_before_digest = blueprint_digest(before);
    report.blueprint_after_digest = report.blueprint_before_digest;

    if (report.ledger.refinement_sample_ids.empty()) {
        report.refinement_failure =
            "no refinement evidence: the bottleneck reward is never the strict per-sample "
            "minimum";
        return {library, report};
    }

    std::vector<EvidenceSample> evidence;
    for (const std::string& sample_id : report.ledger.refinement_sample_ids) {
        auto it = std::find(sample_ids.begin(), sample_ids.end(), sample_id);
        const Trajectory& trajectory = trajectories[it - sample_ids.begin()];
        EvidenceSample item;
        item.sample_id = sample_id;
        item.question = trajectory.question;
        item.answer = trajectory.ground_truth;
        item.intermediate_context =
            truncate_chars(trajectory.accumulated.back(), options.evidence_context_budget);
        item.node_reward = report.ledger.refinement_rewards.at(sample_id);
        evidence.push_back(std::move(item));
    }

    NodeLibrary next = library;
    try {
        std::string analysis;
        std::string explanation;
        const NodeBlueprint refined =
            refine_node(before, evidence, report.ledger.per_node_mean.at(bottleneck), library,
                        env.designer, env.prompts, &analysis, &explanation);
        for (NodeBlueprint& node : next.nodes) {
            if (node.node_name == bottleneck) {
                node = refined;
                break;
            }
        }
        report.refined_node = bottleneck;
        report.blueprint_after_digest = blueprint_digest(refined);
        report.designer_analysis = analysis;
        report.refinement_succeeded = true;
    } catch (const Error& error) {
        report.refinement_failure = error.what();
        return {library, report};
    }
    return {next, report};
}

OptimizationRun optimize(const NodeLibrary& initial, const std::vector<QaPair>& samples,
                         const std::vector<std::string>& sample_ids, RuntimeEnv& env,
                         const OptimizeOptions& options, const EpochHook& on_epoch) {
    if (options.epochs < 1) throw PreconditionError("optimization requires at least one epoch");
    OptimizationRun run;
    run.policy = options.selection;
    run.snapshots.push_back(initial);
    std::map<std::string, double> baseline_cache;
    for (int k = 1; k <= options.epochs; ++k) {
        std::vector<Trajectory> trajectories;
        auto [next, report] = run_epoch(run.snapshots.back(), samples, sample_ids, env, options,
                                        baseline_cache, k, &trajectories);
        run.snapshots.push_back(std::move(next));
        run.reports.push_back(report);
        run.trajectories.push_back(trajectories);
        if (on_epoch) on_epoch(k, run.snapshots.back(), run.reports.back(), trajectories);
    }
    if (options.selection == SelectionPolicy::last_epoch) {
        run.chosen_epoch = static_cast<std::int64_t>(run.snapshots.size()) - 1;
    } else {
        std::size_t best = 0;
        double best_mean = 0.0;
        for (std::size_t i = 0; i < run.reports.size(); ++i) {
            double sum = 0.0;
            for (const auto& [node, mean] : run.reports[i].ledger.per_node_mean) sum += mean;
            const double mean = sum / static_cast<double>(
                                          run.reports[i].ledger.per_node_mean.size());
            if (i == 0 || mean > best_mean) {
                best = i;
                best_mean = mean;
            }
        }
        run.chosen_epoch = static_cast<std::int64_t>(best);  // library entering best epoch
    }
    run.final_library = run.snapshots[static_cast<std::size_t>(run.chosen_epoch)];
    return run;
}

nlohmann::json report_to_json(const EpochReport& report) {
    return {{"epoch", report.epoch},
            {"ledger", ledger_to_json(report.ledger)},
            {"refined_node", report.refined_node},
            {"blueprint_before_digest", report.blueprint_before_digest},
            {"blueprint_after_digest", report.blueprint_after_digest},
            {"designer_analysis", report.designer_analysis},
            {"refinement_failure", report.refinement_failure},
            {"refinement_succeeded", report.refinement_succeeded}};
}

EpochReport report_from_json(const nlohmann::json& document) {
    EpochReport report;
    report.epoch = document.at("epoch").get<std::int64_t>();
    report.ledger = ledger_from_json(document.at("ledger"));
    report.refined_node = document.at("refined_node").get<std::string>();
    report.blueprint_before_digest = document.at("blueprint_before_digest").get<std::string>();
    report.blueprint_after_digest = document.at("blueprint_after_digest").get<std::string>();
    report.designer_analysis = document.at("designer_analysis").get<std::string>();
    report.refinement_failure = document.at("refinement_failure").get<std::string>();
    report.refinement_succeeded = document.at("refinement_succeeded").get<bool>();
    return report;
}

}  // namespace nodeforge
