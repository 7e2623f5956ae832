#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace nodeforge {

enum class Role {
    system,
    user,
    assistant,
};

std::string to_string(Role role);

struct ChatMessage {
    Role role = Role::user;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

enum class ResponseFormat {
    normal,
    json_object,
};

struct ScoredToken {
    std::string text;
    double logprob = 0.0;  // natural log, <= 0

    bool operator==(const ScoredToken&) const = default;
};

struct CompletionScore {
    std::vector<ScoredToken> tokens;
    std::string prompt_fingerprint;

    bool operator==(const CompletionScore&) const = default;
};

struct UsageRecord {
    std::uint64_t prompt_tokens = 0;
    std::uint64_t completion_tokens = 0;
    double cost = 0.0;  // USD
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    ResponseFormat response_format = ResponseFormat::normal;
    double temperature = 1.0;
    std::uint64_t max_tokens = 32768;
};

struct ProviderReply {
    std::string text;
    std::uint64_t prompt_tokens = 0;
    std::uint64_t completion_tokens = 0;
};

struct ScoreReply {
    std::vector<ScoredToken> tokens;
    std::uint64_t prompt_tokens = 0;
};

/// Transport-level model access. Implementations must be safe to call from
/// multiple threads.
class Provider {
public:
    virtual ~Provider() = default;
    virtual ProviderReply chat(const ChatRequest& request) = 0;
    virtual ScoreReply score_completion(const std::string& prompt, const std::string& target) = 0;
    virtual std::string name() const = 0;
};

struct GatewayOptions {
    double rate_in = 0.0;   // USD per prompt token
    double rate_out = 0.0;  // USD per completion token
    double temperature = 1.0;
    std::uint64_t max_tokens = 32768;
};

/// Finds a parseable JSON object inside `text`: the whole text, a fenced
/// code block, or the outermost brace-delimited span. Local only, no model
/// round.
std::optional<std::string> extract_json_object(const std::string& text);

/// One model role (Designer or Executor) with usage accounting.
class LlmGateway {
public:
    explicit LlmGateway(std::shared_ptr<Provider> provider, GatewayOptions options = {});

    /// For json_object the returned text parses as a single JSON object,
    /// after at most one repair round. Throws PreconditionError,
    /// ProviderError, MalformedOutputError.
    std::pair<std::string, UsageRecord> chat(const std::vector<ChatMessage>& messages,
                                             ResponseFormat format = ResponseFormat::normal);

    /// chat(json_object) plus parse.
    nlohmann::json chat_json(const std::vector<ChatMessage>& messages);

    /// One logprob per target token. Throws PreconditionError (empty target),
    /// ProviderError (positive logprob or tokenization mismatch),
    /// UnsupportedError.
    CompletionScore score_completion(const std::string& prompt, const std::string& target);

    UsageRecord usage_summary() const;

    const GatewayOptions& options() const { return options_; }
    Provider& provider() { return *provider_; }

private:
    UsageRecord record_usage(std::uint64_t prompt_tokens, std::uint64_t completion_tokens);

    std::shared_ptr<Provider> provider_;
    GatewayOptions options_;
    mutable std::mutex mutex_;
    std::uint64_t prompt_tokens_ = 0;
    std::uint64_t completion_tokens_ = 0;
};

}  // namespace nodeforge
