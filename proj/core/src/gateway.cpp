#include "nodeforge/llm.hpp"

#include "nodeforge/errors.hpp"
#include "nodeforge/util.hpp"

namespace nodeforge {

std::string to_string(Role role) {
    switch (role) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
    }
    return "user";
}

namespace {

bool parses_as_object(const std::string& text) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    return !j.is_discarded() && j.is_object();
}

// Scans for the span from the first '{' to its matching '}', honoring string
// literals and escapes.
std::optional<std::string> outermost_braces(const std::string& text) {
    auto start = text.find('{');
    if (start == std::string::npos) return std::nullopt;
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0) return text.substr(start, i - start + 1);
        }
    }
    return std::nullopt;
}

void check_messages(const std::vector<ChatMessage>& messages) {
    if (messages.empty()) {
        throw PreconditionError("chat requires at least one message");
    }
    if (messages.front().role == Role::assistant) {
        throw PreconditionError("first chat message must be system or user");
    }
    for (const auto& m : messages) {
        if (m.role != Role::assistant && m.content.empty()) {
            throw PreconditionError("system/user message content must be non-empty");
        }
    }
}

}  // namespace

std::optional<std::string> extract_json_object(const std::string& text) {
    if (parses_as_object(text)) return text;

    std::size_t pos = 0;
    while ((pos = text.find("```", pos)) != std::string::npos) {
        std::size_t body_start = text.find('\n', pos);
        if (body_start == std::string::npos) break;
        ++body_start;
        std::size_t fence_end = text.find("```", body_start);
        if (fence_end == std::string::npos) break;
        std::string block = text.substr(body_start, fence_end - body_start);
        if (parses_as_object(block)) return block;
        pos = fence_end + 3;
    }

    auto span = outermost_braces(text);
    if (span && parses_as_object(*span)) return span;
    return std::nullopt;
}

LlmGateway::LlmGateway(std::shared_ptr<Provider> provider, GatewayOptions options)
    : provider_(std::move(provider)), options_(options) {
    if (!provider_) throw PreconditionError("gateway requires a provider");
}

UsageRecord LlmGateway::record_usage(std::uint64_t prompt_tokens,
                                     std::uint64_t completion_tokens) {
    std::lock_guard<std::mutex> lock(mutex_);
    prompt_tokens_ += prompt_tokens;
    completion_tokens_ += completion_tokens;
    UsageRecord rec;
    rec.prompt_tokens = prompt_tokens;
    rec.completion_tokens = completion_tokens;
    rec.cost = static_cast<double>(prompt_tokens) * options_.rate_in +
               static_cast<double>(completion_tokens) * options_.rate_out;
    return rec;
}

std::pair<std::string, UsageRecord> LlmGateway::chat(const std::vector<ChatMessage>& messages,
                                                     ResponseFormat format) {
    check_messages(messages);
    ChatRequest request;
    request.messages = messages;
    request.response_format = format;
    request.temperature = options_.temperature;
    request.max_tokens = options_.max_tokens;

    ProviderReply reply = provider_->chat(request);
    UsageRecord usage = record_usage(reply.prompt_tokens, reply.completion_tokens);
    if (format == ResponseFormat::normal) {
        return {reply.text, usage};
    }

    if (auto extracted = extract_json_object(reply.text)) {
        return {*extracted, usage};
    }

    ChatRequest repair = request;
    repair.messages.push_back({Role::assistant, reply.text});
    repair.messages.push_back(
        {Role::user,
         "The previous reply was not a single valid JSON object. "
         "Re-emit it as a single valid object. Output only the JSON object."});
    ProviderReply second = provider_->chat(repair);
    UsageRecord usage2 = record_usage(second.prompt_tokens, second.completion_tokens);
    usage.prompt_tokens += usage2.prompt_tokens;
    usage.completion_tokens += usage2.completion_tokens;
    usage.cost += usage2.cost;

    if (auto extracted = extract_json_object(second.text)) {
        return {*extracted, usage};
    }
    throw MalformedOutputError("reply is not a single valid JSON object after one repair round");
}

nlohmann::json LlmGateway::chat_json(const std::vector<ChatMessage>& messages) {
    auto [text, usage] = chat(messages, ResponseFormat::json_object);
    (void)usage;
    return nlohmann::json::parse(text);
}

CompletionScore LlmGateway::score_completion(const std::string& prompt,
                                             const std::string& target) {
    if (target.empty()) {
        throw PreconditionError("score_completion requires a non-empty target");
    }
    ScoreReply reply = provider_->score_completion(prompt, target);

    std::string concat;
    for (const auto& tok : reply.tokens) {
        if (tok.logprob > 0.0) {
            throw ProviderError("provider returned a positive logprob for token \"" +
                                tok.text + "\"");
        }
        concat += tok.text;
    }
    if (concat != target && concat != " " + target) {
        throw ProviderError("scored tokens do not concatenate to the target text");
    }

    record_usage(reply.prompt_tokens, reply.tokens.size());

    CompletionScore score;
    score.tokens = reply.tokens;
    score.prompt_fingerprint = fnv1a64_hex(prompt);
    return score;
}

UsageRecord LlmGateway::usage_summary() const {
    std::lock_guard<std::mutex> lock(mutex_);
    UsageRecord rec;
    rec.prompt_tokens = prompt_tokens_;
    rec.completion_tokens = completion_tokens_;
    rec.cost = static_cast<double>(prompt_tokens_) * options_.rate_in +
               static_cast<double>(completion_tokens_) * options_.rate_out;
    return rec;
}

}  // namespace nodeforge
