#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nodeforge/llm.hpp"
#include "nodeforge/prompts.hpp"
#include "nodeforge/search.hpp"

namespace nodeforge {

struct QaPair {
    std::string question;
    std::string answer;

    bool operator==(const QaPair&) const = default;
};

struct ContextBuffer {
    std::vector<QaPair> samples;
    std::uint64_t seed = 0;
    std::string source_name;

    bool operator==(const ContextBuffer&) const = default;
};

inline constexpr std::array<const char*, 7> kKeywordDimensions = {
    "Domain",      "Task",       "Entities",           "Actions",
    "Constraints", "Desired_Outcomes", "Implicit_Knowledge",
};

struct KeywordProfile {
    std::map<std::string, std::vector<std::string>> dimensions;  // the seven keys
    std::string thinking;

    bool operator==(const KeywordProfile&) const = default;
};

enum class Strategy { A, B, C, D };

enum class StrategyIntent {
    background_knowledge,
    system_architecture,
    code_implementation,
    evaluation,
};

std::string to_string(Strategy strategy);
std::string to_string(StrategyIntent intent);
StrategyIntent intent_of(Strategy strategy);

/// Fixed backend routing: A, B, D use general web plus scholarly search,
/// C uses code-repository search.
std::vector<EngineKind> engines_for(Strategy strategy);

struct QueryPlan {
    std::string query;
    std::string reasoning;

    bool operator==(const QueryPlan&) const = default;
};

struct StrategyQuerySet {
    Strategy strategy = Strategy::A;
    StrategyIntent intent = StrategyIntent::background_knowledge;
    std::vector<QueryPlan> queries;

    bool operator==(const StrategyQuerySet&) const = default;
};

struct ControllerDecision {
    bool done = false;
    bool need_search = false;
    std::string next_query;
    std::string reasoning;
    std::string summary;

    bool operator==(const ControllerDecision&) const = default;
};

struct SearchRound {
    std::string query;
    std::vector<SearchHit> results;
    ControllerDecision decision;
    std::string error;  // backend failure recorded here, loop continues

    bool operator==(const SearchRound&) const = default;
};

struct SearchSession {
    std::string target_description;
    EngineKind engine_kind = EngineKind::general_web;
    std::vector<SearchRound> rounds;
    std::string final_summary;
    bool completed = false;

    bool operator==(const SearchSession&) const = default;
};

struct StrategyAnalysis {
    Strategy strategy = Strategy::A;
    nlohmann::json payload;
    std::vector<std::size_t> source_sessions;  // indices into the strategy's sessions
};

struct HarvestOptions {
    int n_samples = 10;  // context buffer size
    int max_rounds = 10;  // search turns per session
    int queries_per_strategy = 3;   // executed of the 5-10 generated
    std::size_t files_text_budget = 60000;
    std::uint64_t seed = 0;
    std::string source_name;
};

struct HarvestResult {
    ContextBuffer buffer;
    KeywordProfile profile;
    std::vector<StrategyQuerySet> query_sets;
    std::map<Strategy, std::vector<SearchSession>> sessions;
    std::vector<StrategyAnalysis> analyses;
    std::vector<std::string> warnings;
};

/// Deterministic seeded sample. Without replacement when the source is large
/// enough, otherwise with replacement plus a warning.
ContextBuffer sample_context_buffer(const std::vector<QaPair>& source, int n,
                                    std::uint64_t seed, const std::string& source_name = "",
                                    std::vector<std::string>* warnings = nullptr);

std::string render_samples_text(const ContextBuffer& buffer);

KeywordProfile extract_keywords(const ContextBuffer& buffer, LlmGateway& designer,
                                const PromptLibrary& prompts,
                                std::vector<std::string>* warnings = nullptr);

std::vector<StrategyQuerySet> synthesize_queries(const KeywordProfile& profile,
                                                 LlmGateway& designer,
                                                 const PromptLibrary& prompts,
                                                 std::vector<std::string>* warnings = nullptr);

SearchSession run_multi_turn_search(const std::string& target, SearchBackend& backend,
                                    EngineKind kind, LlmGateway& controller,
                                    const PromptLibrary& prompts, int max_rounds);

StrategyAnalysis analyze_strategy(Strategy strategy, const std::vector<SearchSession>& sessions,
                                  const std::string& task_thinking, LlmGateway& designer,
                                  const PromptLibrary& prompts,
                                  std::size_t files_text_budget = 60000);

/// Stage-1 front half end to end: buffer, keywords, queries, searches,
/// analyses.
HarvestResult run_harvest(const std::vector<QaPair>& source, const HarvestOptions& options,
                          LlmGateway& designer, SearchBackend& backend,
                          const PromptLibrary& prompts);

}  // namespace nodeforge
