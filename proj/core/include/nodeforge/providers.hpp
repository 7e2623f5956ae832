#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nodeforge/llm.hpp"

namespace nodeforge {

struct MockChatRule {
    std::vector<std::string> when_contains;
    std::vector<std::string> when_not_contains;
    std::string reply;
    std::int64_t max_uses = -1;  // -1: unlimited
};

struct MockScoreRule {
    std::vector<std::string> prompt_contains;
    std::vector<std::string> prompt_not_contains;
    std::optional<std::string> target_equals;
    std::vector<std::string> target_contains;
    std::vector<ScoredToken> tokens;
};

struct MockCall {
    enum class Kind { chat, score };
    Kind kind = Kind::chat;
    std::string transcript;  // chat: "role: content\n" joined; score: prompt
    std::string target;      // score only
};

/// Deterministic scripted provider. Chat rules match substrings of the
/// rendered transcript, first match wins. Score rules match prompt/target;
/// unmatched scoring falls back to a deterministic hash scheme so any
/// (prompt, target) pair is scorable.
class MockProvider : public Provider {
public:
    MockProvider() = default;

    static std::shared_ptr<MockProvider> from_json(const nlohmann::json& script);
    static std::shared_ptr<MockProvider> from_file(const std::filesystem::path& path);

    void add_chat_rule(MockChatRule rule);
    void add_score_rule(MockScoreRule rule);

    ProviderReply chat(const ChatRequest& request) override;
    ScoreReply score_completion(const std::string& prompt, const std::string& target) override;
    std::string name() const override { return "mock"; }

    std::vector<MockCall> calls() const;
    std::size_t chat_call_count() const;
    std::size_t score_call_count() const;

    /// "role: content\n" per message, as matched by chat rules.
    static std::string render_transcript(const std::vector<ChatMessage>& messages);

    /// Whitespace-prefixed chunks; concatenation equals the input exactly.
    static std::vector<std::string> fallback_tokenize(const std::string& text);

private:
    mutable std::mutex mutex_;
    std::vector<MockChatRule> chat_rules_;
    std::vector<std::int64_t> chat_rule_uses_;
    std::vector<MockScoreRule> score_rules_;
    std::vector<MockCall> calls_;
};

struct HttpProviderConfig {
    std::string endpoint;  // base URL, e.g. http://host:8000/v1
    std::string model;
    std::string api_key_env;  // environment variable NAME holding the key
    bool supports_completions = false;
    int timeout_seconds = 120;
};

/// OpenAI-style chat endpoint. Scoring requires a completions endpoint with
/// echo+logprobs; otherwise UnsupportedError.
class HttpChatProvider : public Provider {
public:
    explicit HttpChatProvider(HttpProviderConfig config);

    ProviderReply chat(const ChatRequest& request) override;
    ScoreReply score_completion(const std::string& prompt, const std::string& target) override;
    std::string name() const override { return "http:" + config_.model; }

private:
    std::string api_key() const;

    HttpProviderConfig config_;
};

}  // namespace nodeforge
