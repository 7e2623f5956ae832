#include "nodeforge/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nodeforge/errors.hpp"
#include "nodeforge/providers.hpp"
#include "nodeforge/util.hpp"

namespace nodeforge {
namespace {

template <typename T>
void read_field(const nlohmann::json& source, const char* key, T& value) {
    if (source.contains(key)) value = source.at(key).get<T>();
}

ProviderSpec provider_from_json(const nlohmann::json& source, const std::string& label) {
    ProviderSpec spec;
    if (source.is_null()) return spec;
    if (!source.is_object()) throw ConfigError(label + " provider must be an object");
    read_field(source, "kind", spec.kind);
    read_field(source, "script", spec.script);
    read_field(source, "endpoint", spec.endpoint);
    read_field(source, "model", spec.model);
    read_field(source, "api_key_env", spec.api_key_env);
    read_field(source, "supports_completions", spec.supports_completions);
    read_field(source, "rate_in", spec.rate_in);
    read_field(source, "rate_out", spec.rate_out);
    read_field(source, "temperature", spec.temperature);
    read_field(source, "max_tokens", spec.max_tokens);
    if (spec.kind != "mock" && spec.kind != "live-chat-endpoint") {
        throw ConfigError(label + " provider kind must be mock or live-chat-endpoint, got " +
                          spec.kind);
    }
    if (spec.kind == "mock" && spec.script.empty()) {
        throw ConfigError(label + " mock provider requires a script path");
    }
    if (spec.kind == "live-chat-endpoint" && spec.endpoint.empty()) {
        throw ConfigError(label + " live provider requires an endpoint");
    }
    return spec;
}

nlohmann::json provider_to_json(const ProviderSpec& spec) {
    return {{"kind", spec.kind},
            {"script", spec.script},
            {"endpoint", spec.endpoint},
            {"model", spec.model},
            {"api_key_env", spec.api_key_env},
            {"supports_completions", spec.supports_completions},
            {"rate_in", spec.rate_in},
            {"rate_out", spec.rate_out},
            {"temperature", spec.temperature},
            {"max_tokens", spec.max_tokens}};
}

SearchSpec search_from_json(const nlohmann::json& source) {
    SearchSpec spec;
    if (source.is_null()) return spec;
    if (!source.is_object()) throw ConfigError("search must be an object");
    read_field(source, "kind", spec.kind);
    read_field(source, "fixtures_dir", spec.fixtures_dir);
    read_field(source, "endpoint", spec.endpoint);
    read_field(source, "api_key_env", spec.api_key_env);
    if (spec.kind != "fixture" && spec.kind != "http") {
        throw ConfigError("search kind must be fixture or http, got " + spec.kind);
    }
    if (spec.kind == "fixture" && spec.fixtures_dir.empty()) {
        throw ConfigError("fixture search requires fixtures_dir");
    }
    if (spec.kind == "http" && spec.endpoint.empty()) {
        throw ConfigError("http search requires an endpoint");
    }
    return spec;
}

nlohmann::json search_to_json(const SearchSpec& spec) {
    return {{"kind", spec.kind},
            {"fixtures_dir", spec.fixtures_dir},
            {"endpoint", spec.endpoint},
            {"api_key_env", spec.api_key_env}};
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& document) {
    if (!document.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig config;
    read_field(document, "dataset", config.dataset);
    read_field(document, "question_field", config.question_field);
    read_field(document, "answer_field", config.answer_field);
    read_field(document, "n", config.n);
    read_field(document, "rounds", config.rounds);
    read_field(document, "alpha", config.alpha);
    read_field(document, "epochs", config.epochs);
    read_field(document, "n_refine", config.n_refine);
    read_field(document, "delta_mode", config.delta_mode);
    read_field(document, "seed", config.seed);
    read_field(document, "jobs", config.jobs);
    read_field(document, "queries_per_strategy", config.queries_per_strategy);
    read_field(document, "files_text_budget", config.files_text_budget);
    read_field(document, "sample_previews", config.sample_previews);
    read_field(document, "preview_char_budget", config.preview_char_budget);
    read_field(document, "node_search_engine", config.node_search_engine);
    read_field(document, "selection", config.selection);
    read_field(document, "assets_dir", config.assets_dir);
    read_field(document, "out", config.out);
    if (document.contains("designer")) {
        config.designer = provider_from_json(document.at("designer"), "designer");
    }
    if (document.contains("executor")) {
        config.executor = provider_from_json(document.at("executor"), "executor");
    }
    if (document.contains("search")) {
        config.search = search_from_json(document.at("search"));
    }
    validate_config(config);
    return config;
}

RunConfig load_config(const std::string& path) {
    if (!std::filesystem::exists(path)) {
        throw ConfigError("config file not found: " + path);
    }
    nlohmann::json document;
    try {
        document = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& error) {
        throw ConfigError("config file is not well-formed JSON: " + std::string(error.what()));
    }
    return config_from_json(document);
}

nlohmann::json config_to_json(const RunConfig& config) {
    return {{"dataset", config.dataset},
            {"question_field", config.question_field},
            {"answer_field", config.answer_field},
            {"n", config.n},
            {"rounds", config.rounds},
            {"alpha", config.alpha},
            {"epochs", config.epochs},
            {"n_refine", config.n_refine},
            {"delta_mode", config.delta_mode},
            {"seed", config.seed},
            {"jobs", config.jobs},
            {"queries_per_strategy", config.queries_per_strategy},
            {"files_text_budget", config.files_text_budget},
            {"sample_previews", config.sample_previews},
            {"preview_char_budget", config.preview_char_budget},
            {"node_search_engine", config.node_search_engine},
            {"selection", config.selection},
            {"assets_dir", config.assets_dir},
            {"designer", provider_to_json(config.designer)},
            {"executor", provider_to_json(config.executor)},
            {"search", search_to_json(config.search)}};
}

void validate_config(const RunConfig& config) {
    if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) {
        throw ConfigError("alpha must be within [0, 1], got " + std::to_string(config.alpha));
    }
    if (config.n < 1) throw ConfigError("n must be >= 1");
    if (config.rounds < 1) throw ConfigError("rounds must be >= 1");
    if (config.epochs < 1) throw ConfigError("epochs must be >= 1");
    if (config.n_refine < 0) throw ConfigError("n_refine must be >= 0");
    if (config.jobs < 1) throw ConfigError("jobs must be >= 1");
    if (config.queries_per_strategy < 1) throw ConfigError("queries_per_strategy must be >= 1");
    if (config.sample_previews < 1) throw ConfigError("sample_previews must be >= 1");
    if (config.delta_mode != "magnitude" && config.delta_mode != "literal") {
        throw ConfigError("delta_mode must be magnitude or literal, got " + config.delta_mode);
    }
    if (config.selection != "last_epoch" && config.selection != "best_mean_reward") {
        throw ConfigError("selection must be last_epoch or best_mean_reward, got " +
                          config.selection);
    }
    engine_kind_from_string(config.node_search_engine);
}

std::vector<QaPair> load_dataset(const std::string& path, const std::string& question_field,
                                 const std::string& answer_field) {
    if (!std::filesystem::exists(path)) {
        throw ConfigError("dataset file not found: " + path);
    }
    std::ifstream in(path);
    std::vector<QaPair> samples;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json row;
        try {
            row = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error&) {
            throw ConfigError("dataset line " + std::to_string(line_number) +
                              " is not well-formed JSON");
        }
        if (!row.is_object() || !row.contains(question_field) || !row.contains(answer_field)) {
            throw ConfigError("dataset line " + std::to_string(line_number) + " lacks \"" +
                              question_field + "\" or \"" + answer_field + "\"");
        }
        QaPair sample;
        const nlohmann::json& question = row.at(question_field);
        const nlohmann::json& answer = row.at(answer_field);
        sample.question = question.is_string() ? question.get<std::string>() : question.dump();
        sample.answer = answer.is_string() ? answer.get<std::string>() : answer.dump();
        samples.push_back(std::move(sample));
    }
    if (samples.empty()) throw ConfigError("dataset is empty: " + path);
    return samples;
}

std::string sample_id_for(std::size_t index) {
    std::ostringstream out;
    out << "s";
    std::string digits = std::to_string(index);
    for (std::size_t i = digits.size(); i < 4; ++i) out << "0";
    out << digits;
    return out.str();
}

std::shared_ptr<Provider> make_provider(const ProviderSpec& spec) {
    if (spec.kind == "mock") {
        return MockProvider::from_file(spec.script);
    }
    HttpProviderConfig http;
    http.endpoint = spec.endpoint;
    http.model = spec.model;
    http.api_key_env = spec.api_key_env;
    http.supports_completions = spec.supports_completions;
    return std::make_shared<HttpChatProvider>(http);
}

std::unique_ptr<LlmGateway> make_gateway(const ProviderSpec& spec) {
    GatewayOptions options;
    options.rate_in = spec.rate_in;
    options.rate_out = spec.rate_out;
    options.temperature = spec.temperature;
    options.max_tokens = spec.max_tokens;
    return std::make_unique<LlmGateway>(make_provider(spec), options);
}

std::unique_ptr<SearchBackend> make_search_backend(const SearchSpec& spec) {
    if (spec.kind == "fixture") {
        return std::make_unique<FixtureSearchBackend>(spec.fixtures_dir);
    }
    HttpSearchConfig http;
    http.endpoint = spec.endpoint;
    http.api_key_env = spec.api_key_env;
    return std::make_unique<HttpSearchBackend>(http);
}

OptimizeOptions optimize_options_from(const RunConfig& config) {
    OptimizeOptions options;
    options.epochs = config.epochs;
    options.alpha = config.alpha;
    options.n_refine = config.n_refine;
    options.delta_mode = delta_mode_from_string(config.delta_mode);
    options.jobs = config.jobs;
    options.selection = selection_policy_from_string(config.selection);
    return options;
}

HarvestOptions harvest_options_from(const RunConfig& config) {
    HarvestOptions options;
    options.n_samples = config.n;
    options.max_rounds = config.rounds;
    options.queries_per_strategy = config.queries_per_strategy;
    options.files_text_budget = config.files_text_budget;
    options.seed = config.seed;
    options.source_name = config.dataset;
    return options;
}

}  // namespace nodeforge
