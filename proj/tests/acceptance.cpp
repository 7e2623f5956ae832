// Acceptance suite: one pass/fail line per criterion, offline and
// deterministic (mock providers, fixture search). Exits nonzero on any
// failure.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "nodeforge/commands.hpp"
#include "nodeforge/config.hpp"
#include "nodeforge/errors.hpp"
#include "nodeforge/optimizer.hpp"
#include "nodeforge/reward.hpp"
#include "nodeforge/trajectory.hpp"
#include "nodeforge/util.hpp"
#include "support.hpp"

using namespace nodeforge;
using testsupport::assets_dir;
using testsupport::cli_path;
using testsupport::fixtures_dir;
using testsupport::make_chain_library;

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Criterion {
    int number;
    std::string name;
    std::vector<std::string> problems;

    void require(bool ok, const std::string& problem) {
        if (!ok) problems.push_back(problem);
    }
};

bool finish(const Criterion& criterion) {
    const bool passed = criterion.problems.empty();
    std::cout << (passed ? "[PASS]" : "[FAIL]") << " criterion " << criterion.number << ": "
              << criterion.name << "\n";
    for (const std::string& problem : criterion.problems) {
        std::cout << "       - " << problem << "\n";
    }
    return passed;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("nodeforge_acceptance_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string fixture(const std::string& name) {
    return (fs::path(fixtures_dir()) / name).string();
}

/// Golden judicial run: fixture dataset, scripted mocks, recorded search.
RunConfig golden_config(const std::string& out_dir, int epochs) {
    RunConfig config;
    config.dataset = fixture("dataset_judicial.jsonl");
    config.n = 4;
    config.rounds = 3;
    config.epochs = epochs;
    config.seed = 17;
    config.assets_dir = assets_dir();
    config.designer.kind = "mock";
    config.designer.script = fixture("mock_designer.json");
    config.executor.kind = "mock";
    config.executor.script = fixture("mock_executor.json");
    config.search.kind = "fixture";
    config.search.fixtures_dir = fixture("search");
    config.out = out_dir;
    return config;
}

int run_cli(const std::string& args) {
    const std::string command = cli_path() + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(command.c_str()));
}

std::map<std::string, std::string> directory_snapshot(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        files[fs::relative(entry.path(), root).string()] = read_text_file(entry.path());
    }
    return files;
}

double brute_force_tau(const std::vector<double>& objectives) {
    const std::size_t t = objectives.size();
    if (t == 1) return 0.0;
    long total = 0;
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = i + 1; j < t; ++j) {
            if (objectives[j] > objectives[i]) ++total;
            if (objectives[j] < objectives[i]) --total;
        }
    }
    const double pairs = static_cast<double>(t) * static_cast<double>(t - 1) / 2.0;
    return static_cast<double>(total) / pairs;
}

// ---- criterion 3 scaffolding: scripted 3-node, 4-sample scenario ----

constexpr const char* kFirstHeader = "### Output of First_Node";
constexpr const char* kMiddleHeader = "### Output of Middle_Node";
constexpr const char* kLastHeader = "### Output of Last_Node";

class NullBackend : public SearchBackend {
public:
    std::vector<SearchHit> search(const std::string&, EngineKind) override { return {}; }
    std::string name() const override { return "null"; }
};

void add_sample_scores(MockProvider& mock, const std::string& question, const std::string& truth,
                       double j0, double j1, double j2, double j3) {
    mock.add_score_rule({{question}, {kFirstHeader}, truth, {}, {{truth, j0}}});
    mock.add_score_rule({{question, kFirstHeader}, {kMiddleHeader}, truth, {}, {{truth, j1}}});
    mock.add_score_rule({{question, kMiddleHeader}, {kLastHeader}, truth, {}, {{truth, j2}}});
    mock.add_score_rule({{question, kLastHeader}, {}, truth, {}, {{truth, j3}}});
}

std::string middle_refine_reply() {
    const nlohmann::json reply = {
        {"analysis",
         {{"problem_identification", "review is too shallow"},
          {"root_cause", "prompt lacks strictness"},
          {"optimization_strategy", "tighten the instruction"}}},
        {"optimized_implementation",
         {{"prompt_template",
           "System Prompt:\nYou are the improved Middle_Node stage.\n\nUser Prompt:\n"
           "Draft: {draft}\nAssess strictly."},
          {"tools_needed", "No tools needed"},
          {"logic_description", "stricter single-pass prompt"}}},
        {"optimized_all_code", "def run(self, input_data):\n    return refined_output"},
        {"optimization_explanation", "tightened the prompt"}};
    return reply.dump();
}

// ---- criterion 5 scaffolding: random library generator ----

NodeLibrary random_library(std::mt19937_64& rng, bool& cyclic) {
    std::uniform_int_distribution<int> node_count_dist(1, 8);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const int node_count = node_count_dist(rng);

    NodeLibrary library;
    library.pipeline_description = "random pipeline";
    for (int i = 0; i < node_count; ++i) {
        NodeBlueprint node;
        node.node_name = "Stage_" + std::to_string(i);
        node.node_type = coin(rng) < 0.8 ? NodeType::LLM_Generator : NodeType::Retrieval_RAG;
        if (node.node_type == NodeType::Retrieval_RAG) node.tools_needed = {"Search"};
        node.description = "random stage " + std::to_string(i);
        node.input_keys = {"field_" + std::to_string(i)};
        node.output_keys = {"out_" + std::to_string(i)};
        node.logic_description = "compute stage " + std::to_string(i);
        node.prompt_template = "System Prompt:\nStage " + std::to_string(i) +
                               ".\n\nUser Prompt:\nUse {field_" + std::to_string(i) + "}.";
        node.version = static_cast<std::int64_t>(rng() % 5);
        for (int j = 0; j < i; ++j) {
            if (coin(rng) < 0.35) node.dependencies.push_back("Stage_" + std::to_string(j));
        }
        library.nodes.push_back(std::move(node));
    }
    library.provenance = {"random", "mock", rng()};

    cyclic = coin(rng) < 0.4;
    if (cyclic) {
        if (node_count == 1 || coin(rng) < 0.3) {
            NodeBlueprint& node = library.nodes[rng() % library.nodes.size()];
            node.dependencies.push_back(node.node_name);  // self loop
        } else {
            const std::size_t a = rng() % (library.nodes.size() - 1);
            const std::size_t b = a + 1 + rng() % (library.nodes.size() - a - 1);
            library.nodes[a].dependencies.push_back(library.nodes[b].node_name);
            library.nodes[b].dependencies.push_back(library.nodes[a].node_name);
        }
    }
    return library;
}

// ---- the eight criteria ----

bool criterion_reward_math_oracles() {
    Criterion criterion{1, "reward math oracle suite"};
    const auto start = Clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> objective_dist(-5.0, 0.0);
    std::uniform_real_distribution<double> quality_dist(-1.0, 1.0);
    std::uniform_real_distribution<double> delta_dist(-10.0, 10.0);

    for (int round = 0; round < 1000; ++round) {
        std::vector<double> objectives(2 + rng() % 9);
        for (double& value : objectives) value = objective_dist(rng);
        if (consistency_score(objectives) != brute_force_tau(objectives)) {
            criterion.require(false, "consistency_score diverged from pair enumeration");
            break;
        }
    }

    for (int round = 0; round < 1000; ++round) {
        std::vector<double> qualities(1 + rng() % 10);
        for (double& value : qualities) value = quality_dist(rng);
        const std::vector<double> rewards = step_rewards(qualities);
        double total = 0.0;
        for (double reward : rewards) total += reward;
        if (std::fabs(total - qualities.back()) > 1e-12) {
            criterion.require(false, "telescoping sum drifted from the final quality");
            break;
        }
    }

    for (int round = 0; round < 10000; ++round) {
        const double low = delta_dist(rng);
        const double high = delta_dist(rng);
        const double score_low = improvement_score(std::min(low, high));
        const double score_high = improvement_score(std::max(low, high));
        const bool bounded = score_low > -1.0 && score_low < 1.0 && score_high > -1.0 &&
                             score_high < 1.0;
        const bool monotone = low == high ? score_low == score_high : score_low < score_high;
        if (!bounded || !monotone) {
            criterion.require(false, "improvement_score bounds or monotonicity broken");
            break;
        }
    }

    const double elapsed = seconds_since(start);
    criterion.require(elapsed < 5.0, "oracle suite took " + std::to_string(elapsed) + "s");
    return finish(criterion);
}

bool criterion_hand_computed_fixtures() {
    Criterion criterion{2, "hand-computed fixtures"};

    const CompletionScore two_tokens{{{"a", -0.5}, {"b", -1.5}}, ""};
    const double objective = objective_value(two_tokens);
    criterion.require(std::fabs(objective - (-1.0)) <= 1e-9, "objective([-0.5,-1.5]) != -1.0");
    criterion.require(std::fabs(perplexity(objective) - std::exp(1.0)) <= 1e-9,
                      "perplexity(-1.0) != e");

    criterion.require(std::fabs(quality_score(0.5, 1.0 / 3.0, 0.6) - 0.4) <= 1e-12,
                      "quality_score(0.5, 1/3, 0.6) != 0.4");
    criterion.require(consistency_score({-2.0, -1.5, -1.8}) == 1.0 / 3.0,
                      "consistency_score([-2.0,-1.5,-1.8]) != 1/3");

    auto mock = std::make_shared<MockProvider>();
    mock->add_score_rule({{"single question"}, {"Only_Node"}, "truth", {}, {{"truth", -2.0}}});
    mock->add_score_rule({{"single question", "Only_Node"}, {}, "truth", {}, {{"truth", -1.0}}});
    LlmGateway executor(mock);
    const PromptLibrary prompts(assets_dir());

    Trajectory trajectory;
    trajectory.sample_id = "fixture";
    trajectory.question = "single question";
    trajectory.ground_truth = "truth";
    TrajectoryStep step;
    step.node_name = "Only_Node";
    step.output = {{"answer", "answer text"}};
    step.rendered = "### Output of Only_Node\nanswer text\n";
    trajectory.steps.push_back(step);
    trajectory.accumulated = {"", step.rendered};
    trajectory.final_answer = "answer text";

    const TrajectoryScore score = score_trajectory(trajectory, 0.6, executor, prompts);
    criterion.require(std::fabs(score.baseline_objective - (-2.0)) <= 1e-9,
                      "composed fixture baseline != -2.0");
    criterion.require(score.steps.size() == 1, "composed fixture lost its single step");
    if (score.steps.size() == 1) {
        criterion.require(std::fabs(score.steps[0].delta - 0.5) <= 1e-9,
                          "composed fixture delta != 0.5");
        criterion.require(std::fabs(score.steps[0].reward - 0.362059) <= 1e-6,
                          "composed fixture r_1 != 0.362059");
    }
    return finish(criterion);
}

bool criterion_algorithm_conformance() {
    Criterion criterion{3, "refinement loop conformance"};
    const auto start = Clock::now();

    auto executor_mock = testsupport::chain_executor_mock();
    const std::vector<QaPair> samples = {{"why alpha", "GT-A"},
                                         {"why bravo", "GT-B"},
                                         {"why charlie", "GT-C"},
                                         {"why delta", "GT-D"}};
    const std::vector<std::string> ids = {"s0000", "s0001", "s0002", "s0003"};
    add_sample_scores(*executor_mock, "why alpha", "GT-A", -2.0, -1.0, -1.8, -0.5);
    add_sample_scores(*executor_mock, "why bravo", "GT-B", -2.0, -1.2, -1.6, -0.6);
    add_sample_scores(*executor_mock, "why charlie", "GT-C", -2.0, -0.9, -1.9, -0.4);
    add_sample_scores(*executor_mock, "why delta", "GT-D", -2.0, -1.0, -0.8, -1.9);

    auto designer_mock = std::make_shared<MockProvider>();
    designer_mock->add_chat_rule({{"Node Name: Middle_Node"}, {}, middle_refine_reply(), -1});

    LlmGateway executor(executor_mock);
    LlmGateway designer(designer_mock);
    NullBackend backend;
    const PromptLibrary prompts(assets_dir());
    RuntimeEnv env{executor, designer, backend, prompts};

    OptimizeOptions options;
    options.epochs = 2;
    options.alpha = 0.6;
    options.n_refine = 3;

    std::vector<std::size_t> score_counts;
    const auto hook = [&](std::int64_t, const NodeLibrary&, const EpochReport&,
                          const std::vector<Trajectory>&) {
        score_counts.push_back(executor_mock->score_call_count());
    };
    const OptimizationRun run =
        optimize(make_chain_library(), samples, ids, env, options, hook);

    // m + 1 = 4 score calls per trajectory; epoch two reuses cached baselines.
    criterion.require(score_counts.size() == 2 && score_counts[0] == 16,
                      "epoch one issued a different score-call count than 4 * (m + 1)");
    criterion.require(score_counts.size() == 2 && score_counts[1] == 28,
                      "epoch two did not reuse the cached baselines");

    criterion.require(run.reports.size() == 2, "expected two epoch reports");
    for (const EpochReport& report : run.reports) {
        criterion.require(report.ledger.bottleneck == "Middle_Node",
                          "scripted-worst node was not the bottleneck in epoch " +
                              std::to_string(report.epoch));
        criterion.require(report.refined_node == "Middle_Node" && report.refinement_succeeded,
                          "bottleneck was not refined in epoch " + std::to_string(report.epoch));

        const std::vector<std::string> expected_ids = {"s0002", "s0000", "s0001"};
        criterion.require(report.ledger.refinement_sample_ids == expected_ids,
                          "refinement evidence ids diverged in epoch " +
                              std::to_string(report.epoch));
        for (const std::string& sid : report.ledger.refinement_sample_ids) {
            const TrajectoryScore& score = report.ledger.per_sample.at(sid);
            const double middle = score.steps[1].reward;
            criterion.require(middle < score.steps[0].reward && middle < score.steps[2].reward,
                              "evidence sample " + sid + " is not a strict per-sample minimum");
        }
        const TrajectoryScore& excluded = report.ledger.per_sample.at("s0003");
        criterion.require(excluded.steps[2].reward < excluded.steps[1].reward,
                          "sample s0003 should be excluded by the strict-minimum rule");
    }

    criterion.require(run.snapshots.size() == 3, "expected three library snapshots");
    for (std::size_t k = 0; k + 1 < run.snapshots.size(); ++k) {
        int changed = 0;
        std::string changed_name;
        for (const NodeBlueprint& before : run.snapshots[k].nodes) {
            const NodeBlueprint* after = run.snapshots[k + 1].find(before.node_name);
            if (after == nullptr || !(*after == before)) {
                ++changed;
                changed_name = before.node_name;
            }
        }
        criterion.require(changed == 1 && changed_name == "Middle_Node",
                          "epoch " + std::to_string(k + 1) +
                              " replaced a blueprint set other than {Middle_Node}");
    }

    const double elapsed = seconds_since(start);
    criterion.require(elapsed < 10.0, "conformance scenario took " + std::to_string(elapsed) + "s");
    return finish(criterion);
}

bool criterion_determinism() {
    Criterion criterion{4, "byte-identical reruns"};
    TempDir work("determinism");

    RunConfig config = golden_config("", 3);
    const fs::path config_path = work.path / "config.json";
    write_text_file(config_path, config_to_json(config).dump(2) + "\n");

    std::vector<std::map<std::string, std::string>> generate_snapshots;
    std::vector<std::map<std::string, std::string>> optimize_snapshots;
    for (int round = 1; round <= 2; ++round) {
        const fs::path generate_dir = work.path / ("generate_" + std::to_string(round));
        const fs::path optimize_dir = work.path / ("optimize_" + std::to_string(round));
        const int generate_exit = run_cli("generate --config " + config_path.string() +
                                          " --out " + generate_dir.string());
        criterion.require(generate_exit == 0,
                          "generate exited with " + std::to_string(generate_exit));
        const int optimize_exit =
            run_cli("optimize --config " + config_path.string() + " --library " +
                    (generate_dir / "library_epoch_000.json").string() + " --out " +
                    optimize_dir.string());
        criterion.require(optimize_exit == 0,
                          "optimize exited with " + std::to_string(optimize_exit));
        if (generate_exit != 0 || optimize_exit != 0) return finish(criterion);
        generate_snapshots.push_back(directory_snapshot(generate_dir));
        optimize_snapshots.push_back(directory_snapshot(optimize_dir));
    }

    criterion.require(!generate_snapshots[0].empty(), "generate produced no files");
    criterion.require(generate_snapshots[0] == generate_snapshots[1],
                      "generate run directories differ between executions");
    criterion.require(optimize_snapshots[0].size() > 10, "optimize produced too few files");
    criterion.require(optimize_snapshots[0] == optimize_snapshots[1],
                      "optimize run directories differ between executions");
    return finish(criterion);
}

bool criterion_structural_validity() {
    Criterion criterion{5, "structural validity on random libraries"};
    std::mt19937_64 rng(7);
    int cyclic_count = 0;
    int acyclic_count = 0;

    for (int round = 0; round < 500; ++round) {
        bool cyclic = false;
        const NodeLibrary library = random_library(rng, cyclic);
        if (cyclic) {
            ++cyclic_count;
            try {
                build_pipeline_graph(library);
                criterion.require(false, "cyclic library was not rejected");
            } catch (const CycleError&) {
            }
            continue;
        }

        ++acyclic_count;
        const PipelineGraph graph = build_pipeline_graph(library);
        std::map<std::string, std::size_t> position;
        for (std::size_t i = 0; i < graph.ordered_nodes.size(); ++i) {
            position[graph.ordered_nodes[i]] = i;
        }
        criterion.require(position.size() == library.nodes.size(),
                          "topological order dropped or duplicated nodes");
        for (const NodeBlueprint& node : library.nodes) {
            for (const std::string& dependency : node.dependencies) {
                if (position.at(dependency) >= position.at(node.node_name)) {
                    criterion.require(false, "order places " + node.node_name +
                                                 " before its dependency " + dependency);
                }
            }
        }
        criterion.require(deserialize_library(serialize_library(library)) == library,
                          "serialize/deserialize round trip changed the library");
        if (!criterion.problems.empty()) break;
    }

    criterion.require(cyclic_count > 50 && acyclic_count > 50,
                      "generator failed to cover both cyclic and acyclic cases");
    return finish(criterion);
}

bool criterion_default_parameters() {
    Criterion criterion{6, "frozen default parameters"};
    const RunConfig config;
    criterion.require(config.n == 10, "default context buffer size != 10");
    criterion.require(config.rounds == 10, "default search rounds != 10");
    criterion.require(config.alpha == 0.6, "default alpha != 0.6");
    criterion.require(config.epochs == 10, "default epoch count != 10");

    const HarvestOptions harvest;
    criterion.require(harvest.n_samples == 10 && harvest.max_rounds == 10,
                      "harvest option defaults drifted");
    const OptimizeOptions optimize;
    criterion.require(optimize.alpha == 0.6 && optimize.epochs == 10,
                      "optimize option defaults drifted");
    return finish(criterion);
}

bool criterion_prompt_assets() {
    Criterion criterion{7, "prompt asset anchors"};
    const PromptLibrary prompts(assets_dir());
    const auto has = [&](const std::string& asset, const std::string& anchor) {
        criterion.require(prompts.raw(asset).find(anchor) != std::string::npos,
                          asset + " lost anchor \"" + anchor + "\"");
    };
    has("keyword_extraction", "extract keywords");
    has("keyword_extraction", "Implicit_Knowledge");
    has("multi_turn_search", "web search controller");
    has("node_generation_part1", "Allowed node types");
    has("node_generation_part1", "LLM_Generator");
    has("node_optimization", "Node Reward:");
    has("node_optimization", "All Intermediate Outputs");
    has("node_optimization", "<optimization_focus>");
    has("scoring_frame", "<question>");
    has("scoring_frame", "<reasoning>");
    return finish(criterion);
}

bool criterion_golden_run() {
    Criterion criterion{8, "end-to-end golden run"};
    TempDir generate_dir("golden_generate");
    TempDir optimize_dir("golden_optimize");

    std::ostringstream out;
    std::ostringstream err;
    const RunConfig generate_cfg = golden_config(generate_dir.path.string(), 1);
    criterion.require(cmd_generate(generate_cfg, out, err) == 0,
                      "generation failed: " + err.str());
    if (!criterion.problems.empty()) return finish(criterion);

    const NodeLibrary initial = deserialize_library(
        read_text_file(generate_dir.path / "library_epoch_000.json"));
    criterion.require(initial.nodes.size() == 5, "golden library does not hold five nodes");
    criterion.require(validate_library(initial).ok, "golden library failed validation");

    const RunConfig optimize_cfg = golden_config(optimize_dir.path.string(), 1);
    std::ostringstream opt_out;
    std::ostringstream opt_err;
    criterion.require(
        cmd_optimize(optimize_cfg, (generate_dir.path / "library_epoch_000.json").string(),
                     opt_out, opt_err) == 0,
        "optimization failed: " + opt_err.str());
    if (!criterion.problems.empty()) return finish(criterion);

    const fs::path epoch_dir = optimize_dir.path / "epoch_001";
    const Trajectory first = deserialize_trajectory(
        read_text_file(epoch_dir / "trajectories" / "s0000.json"));
    criterion.require(first.steps.size() == initial.nodes.size(),
                      "trajectory does not cover every node");
    criterion.require(first.accumulated.size() == first.steps.size() + 1,
                      "trajectory accumulated contexts misaligned");
    criterion.require(!first.final_answer.empty(), "trajectory lost its final answer");

    // Row-for-row recomputation of the persisted reward ledger.
    auto executor_mock = MockProvider::from_file(fixture("mock_executor.json"));
    LlmGateway executor(executor_mock);
    const PromptLibrary prompts(assets_dir());
    std::map<std::string, TrajectoryScore> scores;
    for (const char* sid : {"s0000", "s0001", "s0002", "s0003"}) {
        const Trajectory trajectory = deserialize_trajectory(
            read_text_file(epoch_dir / "trajectories" / (std::string(sid) + ".json")));
        scores[sid] = score_trajectory(trajectory, optimize_cfg.alpha, executor, prompts);
    }
    const RewardLedger recomputed = aggregate_epoch(scores, initial, optimize_cfg.n_refine, 1);
    const nlohmann::json persisted =
        nlohmann::json::parse(read_text_file(epoch_dir / "rewards.json"));
    criterion.require(ledger_to_json(recomputed) == persisted,
                      "recomputed reward ledger differs from the persisted one");

    const RewardLedger ledger = ledger_from_json(persisted);
    criterion.require(ledger.bottleneck == "Damages_Calculator",
                      "golden bottleneck is not Damages_Calculator");
    const EpochReport report =
        report_from_json(nlohmann::json::parse(read_text_file(epoch_dir / "report.json")));
    criterion.require(report.refined_node == "Damages_Calculator" && report.refinement_succeeded,
                      "golden epoch did not refine the bottleneck");

    const NodeLibrary final_library =
        deserialize_library(read_text_file(optimize_dir.path / "final_library.json"));
    const NodeBlueprint* refined = final_library.find("Damages_Calculator");
    criterion.require(refined != nullptr && refined->version == 1,
                      "final library does not carry the refined blueprint");
    criterion.require(validate_library(final_library).ok, "final library failed validation");
    return finish(criterion);
}

}  // namespace

int main() {
    using CriterionFn = bool (*)();
    const CriterionFn criteria[] = {
        criterion_reward_math_oracles, criterion_hand_computed_fixtures,
        criterion_algorithm_conformance, criterion_determinism,
        criterion_structural_validity, criterion_default_parameters,
        criterion_prompt_assets, criterion_golden_run,
    };

    int failed = 0;
    for (CriterionFn criterion : criteria) {
        try {
            if (!criterion()) ++failed;
        } catch (const std::exception& error) {
            std::cout << "[FAIL] criterion threw: " << error.what() << "\n";
            ++failed;
        }
    }
    if (failed == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << failed << " acceptance criteria failed\n";
    return 1;
}
