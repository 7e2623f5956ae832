#include <cstdlib>

#include "nodeforge/errors.hpp"
#include "nodeforge/net.hpp"
#include "nodeforge/providers.hpp"

namespace nodeforge {

namespace {

using nlohmann::json;

json parse_body(const net::HttpResponse& response, const std::string& what) {
    if (response.status == 0) {
        throw ProviderError(what + ": " + response.body);
    }
    if (response.status < 200 || response.status >= 300) {
        throw ProviderError(what + ": HTTP " + std::to_string(response.status) + " " +
                            response.body.substr(0, 400));
    }
    json j = json::parse(response.body, nullptr, false);
    if (j.is_discarded()) {
        throw ProviderError(what + ": response body is not valid JSON");
    }
    return j;
}

}  // namespace

HttpChatProvider::HttpChatProvider(HttpProviderConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty()) throw ConfigError("http provider requires an endpoint URL");
    if (config_.model.empty()) throw ConfigError("http provider requires a model name");
}

std::string HttpChatProvider::api_key() const {
    if (config_.api_key_env.empty()) return "";
    const char* value = std::getenv(config_.api_key_env.c_str());
    if (!value) {
        throw ConfigError("environment variable " + config_.api_key_env + " is not set");
    }
    return value;
}

ProviderReply HttpChatProvider::chat(const ChatRequest& request) {
    json body;
    body["model"] = config_.model;
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_tokens;
    body["messages"] = json::array();
    for (const auto& m : request.messages) {
        body["messages"].push_back({{"role", to_string(m.role)}, {"content", m.content}});
    }
    if (request.response_format == ResponseFormat::json_object) {
        body["response_format"] = {{"type", "json_object"}};
    }

    net::Headers headers;
    std::string key = api_key();
    if (!key.empty()) headers.push_back({"Authorization", "Bearer " + key});

    json reply = parse_body(net::post_json(config_.endpoint + "/chat/completions", headers,
                                           body.dump(), config_.timeout_seconds),
                            "chat request failed");
    ProviderReply out;
    try {
        out.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
        if (reply.contains("usage")) {
            out.prompt_tokens = reply["usage"].value("prompt_tokens", 0ULL);
            out.completion_tokens = reply["usage"].value("completion_tokens", 0ULL);
        }
    } catch (const json::exception& e) {
        throw ProviderError(std::string("unexpected chat response shape: ") + e.what());
    }
    return out;
}

ScoreReply HttpChatProvider::score_completion(const std::string& prompt,
                                              const std::string& target) {
    if (!config_.supports_completions) {
        throw UnsupportedError("provider " + name() +
                               " exposes no forced-completion logprob endpoint");
    }
    json body;
    body["model"] = config_.model;
    body["prompt"] = prompt + target;
    body["max_tokens"] = 0;
    body["echo"] = true;
    body["logprobs"] = 0;

    net::Headers headers;
    std::string key = api_key();
    if (!key.empty()) headers.push_back({"Authorization", "Bearer " + key});

    json reply = parse_body(net::post_json(config_.endpoint + "/completions", headers,
                                           body.dump(), config_.timeout_seconds),
                            "completion scoring failed");
    ScoreReply out;
    try {
        const json& lp = reply.at("choices").at(0).at("logprobs");
        const json& tokens = lp.at("tokens");
        const json& logprobs = lp.at("token_logprobs");
        const json& offsets = lp.at("text_offset");
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (offsets.at(i).get<std::size_t>() < prompt.size()) {
                ++out.prompt_tokens;
                continue;
            }
            if (logprobs.at(i).is_null()) {
                throw UnsupportedError("provider returned no logprob for a target token");
            }
            out.tokens.push_back({tokens.at(i).get<std::string>(), logprobs.at(i).get<double>()});
        }
    } catch (const json::exception& e) {
        throw ProviderError(std::string("unexpected completions response shape: ") + e.what());
    }
    return out;
}

}  // namespace nodeforge
