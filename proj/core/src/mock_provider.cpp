#include <algorithm>
#include <cctype>

#include "nodeforge/errors.hpp"
#include "nodeforge/providers.hpp"
#include "nodeforge/util.hpp"

namespace nodeforge {

namespace {

std::uint64_t approx_tokens(std::size_t chars) {
    return (chars + 3) / 4;
}

std::vector<std::string> get_strings(const nlohmann::json& j, const char* key) {
    std::vector<std::string> out;
    auto it = j.find(key);
    if (it == j.end()) return out;
    if (it->is_string()) {
        out.push_back(it->get<std::string>());
        return out;
    }
    if (!it->is_array()) {
        throw SchemaError(key, "expected a string or array of strings");
    }
    for (const auto& v : *it) {
        if (!v.is_string()) throw SchemaError(key, "expected a string or array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

}  // namespace

std::string MockProvider::render_transcript(const std::vector<ChatMessage>& messages) {
    std::string out;
    for (const auto& m : messages) {
        out += to_string(m.role) + ": " + m.content + "\n";
    }
    return out;
}

std::vector<std::string> MockProvider::fallback_tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t start = i;
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == text.size()) {
            // Trailing whitespace rides on the last token.
            if (!tokens.empty()) {
                tokens.back() += text.substr(start);
            } else {
                tokens.push_back(text.substr(start));
            }
            break;
        }
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        tokens.push_back(text.substr(start, i - start));
    }
    return tokens;
}

std::shared_ptr<MockProvider> MockProvider::from_json(const nlohmann::json& script) {
    auto provider = std::make_shared<MockProvider>();
    if (!script.is_object()) throw SchemaError("$", "mock script must be an object");

    if (auto it = script.find("chat_rules"); it != script.end()) {
        if (!it->is_array()) throw SchemaError("chat_rules", "expected an array");
        for (const auto& r : *it) {
            MockChatRule rule;
            rule.when_contains = get_strings(r, "when_contains");
            rule.when_not_contains = get_strings(r, "when_not_contains");
            auto reply = r.find("reply");
            if (reply == r.end()) throw SchemaError("chat_rules[].reply", "missing field");
            rule.reply = reply->is_string() ? reply->get<std::string>() : reply->dump();
            rule.max_uses = r.value("max_uses", static_cast<std::int64_t>(-1));
            provider->add_chat_rule(std::move(rule));
        }
    }
    if (auto it = script.find("score_rules"); it != script.end()) {
        if (!it->is_array()) throw SchemaError("score_rules", "expected an array");
        for (const auto& r : *it) {
            MockScoreRule rule;
            rule.prompt_contains = get_strings(r, "prompt_contains");
            rule.prompt_not_contains = get_strings(r, "prompt_not_contains");
            if (auto t = r.find("target_equals"); t != r.end()) {
                rule.target_equals = t->get<std::string>();
            }
            rule.target_contains = get_strings(r, "target_contains");
            auto tokens = r.find("tokens");
            if (tokens == r.end() || !tokens->is_array()) {
                throw SchemaError("score_rules[].tokens", "expected an array of [text, logprob]");
            }
            for (const auto& pair : *tokens) {
                if (!pair.is_array() || pair.size() != 2) {
                    throw SchemaError("score_rules[].tokens",
                                      "expected an array of [text, logprob]");
                }
                rule.tokens.push_back({pair[0].get<std::string>(), pair[1].get<double>()});
            }
            provider->add_score_rule(std::move(rule));
        }
    }
    return provider;
}

std::shared_ptr<MockProvider> MockProvider::from_file(const std::filesystem::path& path) {
    auto j = nlohmann::json::parse(read_text_file(path), nullptr, false);
    if (j.is_discarded()) throw SchemaError(path.string(), "mock script is not well-formed");
    return from_json(j);
}

void MockProvider::add_chat_rule(MockChatRule rule) {
    std::lock_guard<std::mutex> lock(mutex_);
    chat_rules_.push_back(std::move(rule));
    chat_rule_uses_.push_back(0);
}

void MockProvider::add_score_rule(MockScoreRule rule) {
    std::lock_guard<std::mutex> lock(mutex_);
    score_rules_.push_back(std::move(rule));
}

ProviderReply MockProvider::chat(const ChatRequest& request) {
    std::string transcript = render_transcript(request.messages);
    std::lock_guard<std::mutex> lock(mutex_);
    calls_.push_back({MockCall::Kind::chat, transcript, ""});

    for (std::size_t i = 0; i < chat_rules_.size(); ++i) {
        const auto& rule = chat_rules_[i];
        if (rule.max_uses >= 0 && chat_rule_uses_[i] >= rule.max_uses) continue;
        bool match = std::all_of(rule.when_contains.begin(), rule.when_contains.end(),
                                 [&](const std::string& s) {
                                     return transcript.find(s) != std::string::npos;
                                 }) &&
                     std::none_of(rule.when_not_contains.begin(), rule.when_not_contains.end(),
                                  [&](const std::string& s) {
                                      return transcript.find(s) != std::string::npos;
                                  });
        if (!match) continue;
        ++chat_rule_uses_[i];
        ProviderReply reply;
        reply.text = rule.reply;
        reply.prompt_tokens = approx_tokens(transcript.size());
        reply.completion_tokens = approx_tokens(rule.reply.size());
        return reply;
    }
    throw ProviderError("mock provider has no chat rule matching transcript:\n" +
                        truncate_chars(transcript, 600));
}

ScoreReply MockProvider::score_completion(const std::string& prompt, const std::string& target) {
    std::lock_guard<std::mutex> lock(mutex_);
    calls_.push_back({MockCall::Kind::score, prompt, target});

    auto contains_all = [](const std::string& hay, const std::vector<std::string>& needles) {
        return std::all_of(needles.begin(), needles.end(), [&](const std::string& s) {
            return hay.find(s) != std::string::npos;
        });
    };
    auto contains_none = [](const std::string& hay, const std::vector<std::string>& needles) {
        return std::none_of(needles.begin(), needles.end(), [&](const std::string& s) {
            return hay.find(s) != std::string::npos;
        });
    };

    for (const auto& rule : score_rules_) {
        if (!contains_all(prompt, rule.prompt_contains)) continue;
        if (!contains_none(prompt, rule.prompt_not_contains)) continue;
        if (rule.target_equals && target != *rule.target_equals) continue;
        if (!contains_all(target, rule.target_contains)) continue;
        ScoreReply reply;
        reply.tokens = rule.tokens;
        reply.prompt_tokens = approx_tokens(prompt.size());
        return reply;
    }

    // Deterministic fallback: chunk the target, derive each logprob from a
    // hash of (prompt, target, index).
    ScoreReply reply;
    reply.prompt_tokens = approx_tokens(prompt.size());
    auto chunks = fallback_tokenize(target);
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        std::string seed = prompt;
        seed += '\x1f';
        seed += target;
        seed += '\x1f';
        seed += std::to_string(i);
        double frac = static_cast<double>(fnv1a64(seed) % 2000) / 1000.0;
        reply.tokens.push_back({chunks[i], -0.05 - frac});
    }
    return reply;
}

std::vector<MockCall> MockProvider::calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return calls_;
}

std::size_t MockProvider::chat_call_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return static_cast<std::size_t>(
        std::count_if(calls_.begin(), calls_.end(),
                      [](const MockCall& c) { return c.kind == MockCall::Kind::chat; }));
}

std::size_t MockProvider::score_call_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return static_cast<std::size_t>(
        std::count_if(calls_.begin(), calls_.end(),
                      [](const MockCall& c) { return c.kind == MockCall::Kind::score; }));
}

}  // namespace nodeforge
