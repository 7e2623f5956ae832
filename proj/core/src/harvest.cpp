#include "nodeforge/harvest.hpp"

#include <algorithm>
#include <random>

#include "nodeforge/errors.hpp"
#include "nodeforge/util.hpp"

namespace nodeforge {

std::string to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::A: return "A";
        case Strategy::B: return "B";
        case Strategy::C: return "C";
        case Strategy::D: return "D";
    }
    return "A";
}

std::string to_string(StrategyIntent intent) {
    switch (intent) {
        case StrategyIntent::background_knowledge: return "background_knowledge";
        case StrategyIntent::system_architecture: return "system_architecture";
        case StrategyIntent::code_implementation: return "code_implementation";
        case StrategyIntent::evaluation: return "evaluation";
    }
    return "background_knowledge";
}

StrategyIntent intent_of(Strategy strategy) {
    switch (strategy) {
        case Strategy::A: return StrategyIntent::background_knowledge;
        case Strategy::B: return StrategyIntent::system_architecture;
        case Strategy::C: return StrategyIntent::code_implementation;
        case Strategy::D: return StrategyIntent::evaluation;
    }
    return StrategyIntent::background_knowledge;
}

std::vector<EngineKind> engines_for(Strategy strategy) {
    if (strategy == Strategy::C) return {EngineKind::code_repository};
    return {EngineKind::general_web, EngineKind::scholarly};
}

namespace {

void warn(std::vector<std::string>* warnings, std::string message) {
    if (warnings) warnings->push_back(std::move(message));
}

// mt19937_64 raw draws with modulo: identical across platforms, unlike
// std::uniform_int_distribution.
std::size_t draw(std::mt19937_64& rng, std::size_t bound) {
    return static_cast<std::size_t>(rng() % bound);
}

std::string engine_hint_asset(EngineKind kind) {
    switch (kind) {
        case EngineKind::general_web: return "engine_hint_general_web";
        case EngineKind::code_repository: return "engine_hint_code_repository";
        case EngineKind::scholarly: return "engine_hint_scholarly";
    }
    return "engine_hint_general_web";
}

std::string trim_trailing(const std::string& s) {
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return end == std::string::npos ? "" : s.substr(0, end + 1);
}

std::string as_text(const nlohmann::json& value) {
    if (value.is_string()) return value.get<std::string>();
    return value.dump();
}

std::string render_history(const std::vector<SearchRound>& rounds) {
    if (rounds.empty()) return "(no searches yet)";
    std::string out;
    for (std::size_t i = 0; i < rounds.size(); ++i) {
        const auto& round = rounds[i];
        out += "Round " + std::to_string(i + 1) + ":\n";
        out += "  query: " + (round.query.empty() ? "(none)" : round.query) + "\n";
        if (!round.error.empty()) {
            out += "  error: " + round.error + "\n";
        }
        for (const auto& hit : round.results) {
            out += "  result: " + hit.title + " (" + hit.url + "): " + hit.snippet + "\n";
        }
        if (!round.decision.reasoning.empty()) {
            out += "  reasoning: " + round.decision.reasoning + "\n";
        }
    }
    return out;
}

}  // namespace

ContextBuffer sample_context_buffer(const std::vector<QaPair>& source, int n,
                                    std::uint64_t seed, const std::string& source_name,
                                    std::vector<std::string>* warnings) {
    if (n < 1) throw PreconditionError("sample size must be >= 1");
    if (source.empty()) throw EmptySourceError("cannot sample from an empty source");

    ContextBuffer buffer;
    buffer.seed = seed;
    buffer.source_name = source_name;

    std::mt19937_64 rng(seed);
    std::size_t count = static_cast<std::size_t>(n);
    if (source.size() >= count) {
        std::vector<std::size_t> indices(source.size());
        for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t j = i + draw(rng, indices.size() - i);
            std::swap(indices[i], indices[j]);
            buffer.samples.push_back(source[indices[i]]);
        }
    } else {
        warn(warnings, "source has " + std::to_string(source.size()) + " items, sampling " +
                           std::to_string(n) + " with replacement");
        for (std::size_t i = 0; i < count; ++i) {
            buffer.samples.push_back(source[draw(rng, source.size())]);
        }
    }
    return buffer;
}

std::string render_samples_text(const ContextBuffer& buffer) {
    std::string out;
    for (std::size_t i = 0; i < buffer.samples.size(); ++i) {
        out += "Sample " + std::to_string(i + 1) + ":\n";
        out += "Question: " + buffer.samples[i].question + "\n";
        out += "Answer: " + buffer.samples[i].answer + "\n\n";
    }
    return out;
}

KeywordProfile extract_keywords(const ContextBuffer& buffer, LlmGateway& designer,
                                const PromptLibrary& prompts,
                                std::vector<std::string>* warnings) {
    if (buffer.samples.empty()) {
        throw PreconditionError("keyword extraction requires a non-empty context buffer");
    }
    auto messages = prompts.messages("keyword_extraction",
                                     {{"samples_text", render_samples_text(buffer)}});
    nlohmann::json reply = designer.chat_json(messages);

    const nlohmann::json* answer = &reply;
    if (auto it = reply.find("answer"); it != reply.end() && it->is_object()) {
        answer = &*it;
    }

    KeywordProfile profile;
    if (auto it = reply.find("thinking"); it != reply.end()) {
        profile.thinking = as_text(*it);
    }
    for (const char* dimension : kKeywordDimensions) {
        auto it = answer->find(dimension);
        if (it == answer->end() || !it->is_array() || it->empty()) {
            throw MalformedOutputError(std::string("keyword extraction output lacks dimension ") +
                                       dimension);
        }
        std::vector<std::string> entries;
        for (const auto& e : *it) entries.push_back(as_text(e));
        if (entries.size() < 5) {
            warn(warnings, std::string("dimension ") + dimension + " has only " +
                               std::to_string(entries.size()) + " entries (prompt asks for 5-10)");
        }
        if (entries.size() > 10) {
            warn(warnings, std::string("dimension ") + dimension + " has " +
                               std::to_string(entries.size()) + " entries, truncating to 10");
            entries.resize(10);
        }
        profile.dimensions[dimension] = std::move(entries);
    }
    return profile;
}

std::vector<StrategyQuerySet> synthesize_queries(const KeywordProfile& profile,
                                                 LlmGateway& designer,
                                                 const PromptLibrary& prompts,
                                                 std::vector<std::string>* warnings) {
    nlohmann::json keywords;
    for (const auto& [dimension, entries] : profile.dimensions) {
        keywords[dimension] = entries;
    }
    auto messages = prompts.messages("query_generation",
                                     {{"keywords_json_str", keywords.dump(2)}});
    nlohmann::json reply = designer.chat_json(messages);

    std::vector<StrategyQuerySet> sets;
    for (Strategy strategy : {Strategy::A, Strategy::B, Strategy::C, Strategy::D}) {
        std::string key = "strategy_" + to_string(strategy);
        auto it = reply.find(key);
        if (it == reply.end() || !it->is_array() || it->empty()) {
            throw MalformedOutputError("query generation output lacks " + key);
        }
        StrategyQuerySet set;
        set.strategy = strategy;
        set.intent = intent_of(strategy);
        for (const auto& q : *it) {
            QueryPlan plan;
            if (q.is_string()) {
                plan.query = q.get<std::string>();
            } else if (q.is_object()) {
                plan.query = q.contains("query") ? as_text(q["query"]) : "";
                plan.reasoning = q.contains("reasoning") ? as_text(q["reasoning"]) : "";
            }
            if (plan.query.empty()) {
                throw MalformedOutputError(key + " contains an entry without a query");
            }
            set.queries.push_back(std::move(plan));
        }
        if (set.queries.size() < 5) {
            warn(warnings, key + " has only " + std::to_string(set.queries.size()) +
                               " queries (prompt asks for 5-10)");
        }
        if (set.queries.size() > 10) {
            warn(warnings, key + " has " + std::to_string(set.queries.size()) +
                               " queries, truncating to 10");
            set.queries.resize(10);
        }
        sets.push_back(std::move(set));
    }
    return sets;
}

SearchSession run_multi_turn_search(const std::string& target, SearchBackend& backend,
                                    EngineKind kind, LlmGateway& controller,
                                    const PromptLibrary& prompts, int max_rounds) {
    if (max_rounds < 1) throw PreconditionError("max_rounds must be >= 1");

    SearchSession session;
    session.target_description = target;
    session.engine_kind = kind;
    std::string engine_hint = trim_trailing(prompts.raw(engine_hint_asset(kind)));

    for (int round_idx = 1; round_idx <= max_rounds; ++round_idx) {
        auto messages = prompts.messages(
            "multi_turn_search",
            {
                {"target_description", target},
                {"round_idx", std::to_string(round_idx)},
                {"max_rounds", std::to_string(max_rounds)},
                {"history_str", render_history(session.rounds)},
                {"engine_type", to_string(kind)},
                {"engine_hint", engine_hint},
            });
        nlohmann::json reply = controller.chat_json(messages);

        SearchRound round;
        round.decision.done = reply.value("done", false);
        round.decision.need_search = reply.value("need_search", !round.decision.done);
        round.decision.next_query =
            reply.contains("next_query") ? as_text(reply["next_query"]) : "";
        round.decision.reasoning = reply.contains("reasoning") ? as_text(reply["reasoning"]) : "";
        round.decision.summary = reply.contains("summary") ? as_text(reply["summary"]) : "";

        if (round.decision.done) {
            session.rounds.push_back(std::move(round));
            session.completed = true;
            session.final_summary = session.rounds.back().decision.summary;
            break;
        }
        if (round.decision.need_search && !round.decision.next_query.empty()) {
            round.query = round.decision.next_query;
            try {
                round.results = backend.search(round.query, kind);
            } catch (const SearchBackendError& e) {
                round.error = e.what();
            }
        }
        session.final_summary = round.decision.summary;
        session.rounds.push_back(std::move(round));
    }
    return session;
}

StrategyAnalysis analyze_strategy(Strategy strategy, const std::vector<SearchSession>& sessions,
                                  const std::string& task_thinking, LlmGateway& designer,
                                  const PromptLibrary& prompts,
                                  std::size_t files_text_budget) {
    bool has_content = std::any_of(sessions.begin(), sessions.end(), [](const SearchSession& s) {
        return !s.rounds.empty() || !s.final_summary.empty();
    });
    if (!has_content) {
        throw PreconditionError("strategy analysis requires at least one session with content");
    }

    std::string files_text;
    for (std::size_t i = 0; i < sessions.size(); ++i) {
        const auto& session = sessions[i];
        files_text += "## Session " + std::to_string(i + 1) + " (engine: " +
                      to_string(session.engine_kind) + ")\n";
        files_text += "Target: " + session.target_description + "\n";
        if (!session.final_summary.empty()) {
            files_text += "Summary: " + session.final_summary + "\n";
        }
        for (const auto& round : session.rounds) {
            for (const auto& hit : round.results) {
                files_text += "- " + hit.title + " (" + hit.url + "): " + hit.snippet + "\n";
            }
        }
        files_text += "\n";
    }
    files_text = truncate_chars(files_text, files_text_budget);

    std::string lower = "strategy_";
    lower += static_cast<char>(std::tolower(to_string(strategy)[0]));
    auto messages = prompts.messages(lower + "_analysis",
                                     {
                                         {"task_thinking", task_thinking},
                                         {"strategy_name", "Strategy_" + to_string(strategy)},
                                         {"files_text", files_text},
                                     });
    nlohmann::json payload = designer.chat_json(messages);

    static const std::map<Strategy, std::vector<std::string>> kRequiredKeys = {
        {Strategy::A, {"aspects_covered", "background_information", "summary"}},
        {Strategy::B, {"architectural_patterns", "design_information", "summary"}},
        {Strategy::C, {"overall_framework", "llm_migration", "data_processing", "summary"}},
        {Strategy::D, {"evaluation_metrics", "evaluation_information", "summary"}},
    };
    std::vector<std::string> missing;
    for (const auto& key : kRequiredKeys.at(strategy)) {
        if (!payload.contains(key)) missing.push_back(key);
    }
    if (!missing.empty()) {
        std::string joined;
        for (std::size_t i = 0; i < missing.size(); ++i) {
            if (i) joined += ", ";
            joined += missing[i];
        }
        throw MalformedOutputError("strategy " + to_string(strategy) +
                                   " analysis lacks keys: " + joined);
    }

    StrategyAnalysis analysis;
    analysis.strategy = strategy;
    analysis.payload = std::move(payload);
    for (std::size_t i = 0; i < sessions.size(); ++i) analysis.source_sessions.push_back(i);
    return analysis;
}

HarvestResult run_harvest(const std::vector<QaPair>& source, const HarvestOptions& options,
                          LlmGateway& designer, SearchBackend& backend,
                          const PromptLibrary& prompts) {
    HarvestResult result;
    result.buffer = sample_context_buffer(source, options.n_samples, options.seed,
                                          options.source_name, &result.warnings);
    result.profile = extract_keywords(result.buffer, designer, prompts, &result.warnings);
    result.query_sets = synthesize_queries(result.profile, designer, prompts, &result.warnings);

    for (const auto& set : result.query_sets) {
        auto engines = engines_for(set.strategy);
        std::size_t budget = std::min<std::size_t>(
            set.queries.size(), static_cast<std::size_t>(options.queries_per_strategy));
        std::vector<SearchSession>& sessions = result.sessions[set.strategy];
        for (std::size_t i = 0; i < budget; ++i) {
            const QueryPlan& plan = set.queries[i];
            std::string target = plan.query;
            if (!plan.reasoning.empty()) target += "\nReasoning: " + plan.reasoning;
            EngineKind kind = engines[i % engines.size()];
            sessions.push_back(run_multi_turn_search(target, backend, kind, designer, prompts,
                                                     options.max_rounds));
        }
        result.analyses.push_back(analyze_strategy(set.strategy, sessions, result.profile.thinking,
                                                   designer, prompts,
                                                   options.files_text_budget));
    }
    return result;
}

}  // namespace nodeforge
