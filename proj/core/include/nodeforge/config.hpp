#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nodeforge/harvest.hpp"
#include "nodeforge/llm.hpp"
#include "nodeforge/optimizer.hpp"
#include "nodeforge/search.hpp"

namespace nodeforge {

struct ProviderSpec {
    std::string kind = "mock";  // mock | live-chat-endpoint
    std::string script;         // mock script path
    std::string endpoint;
    std::string model;
    std::string api_key_env;  // environment variable NAME, never a key value
    bool supports_completions = false;
    double rate_in = 0.0;
    double rate_out = 0.0;
    double temperature = 1.0;
    std::uint64_t max_tokens = 32768;
};

struct SearchSpec {
    std::string kind = "fixture";  // fixture | http
    std::string fixtures_dir;
    std::string endpoint;
    std::string api_key_env;
};

struct RunConfig {
    std::string dataset;
    std::string question_field = "question";
    std::string answer_field = "answer";
    int n = 10;           // context buffer size
    int rounds = 10;      // search turns per session
    double alpha = 0.6;
    int epochs = 10;      // K
    int n_refine = 3;
    std::string delta_mode = "magnitude";
    std::uint64_t seed = 0;
    int jobs = 1;
    int queries_per_strategy = 3;
    std::size_t files_text_budget = 60000;
    int sample_previews = 3;
    std::size_t preview_char_budget = 2000;
    std::string node_search_engine = "general_web";
    std::string selection = "last_epoch";
    std::string assets_dir;
    ProviderSpec designer;
    ProviderSpec executor;
    SearchSpec search;
    std::string out;  // run directory; excluded from the persisted snapshot
};

/// Parses and validates a config file. Throws ConfigError.
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const nlohmann::json& document);

/// Snapshot for the run directory. Never contains the out path, timestamps,
/// or secret values.
nlohmann::json config_to_json(const RunConfig& config);

/// Throws ConfigError on out-of-range values.
void validate_config(const RunConfig& config);

/// JSONL, one object per line; field names are configurable. Throws
/// ConfigError with the line number on malformed rows.
std::vector<QaPair> load_dataset(const std::string& path, const std::string& question_field,
                                 const std::string& answer_field);

/// "s" + zero-padded dataset line index: s0000, s0001, ...
std::string sample_id_for(std::size_t index);

std::shared_ptr<Provider> make_provider(const ProviderSpec& spec);
std::unique_ptr<LlmGateway> make_gateway(const ProviderSpec& spec);
std::unique_ptr<SearchBackend> make_search_backend(const SearchSpec& spec);

OptimizeOptions optimize_options_from(const RunConfig& config);
HarvestOptions harvest_options_from(const RunConfig& config);

}  // namespace nodeforge
