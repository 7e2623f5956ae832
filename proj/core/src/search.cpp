#include "nodeforge/search.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

#include <nlohmann/json.hpp>

#include "nodeforge/errors.hpp"
#include "nodeforge/net.hpp"
#include "nodeforge/util.hpp"

namespace nodeforge {

std::string to_string(EngineKind kind) {
    switch (kind) {
        case EngineKind::general_web: return "general_web";
        case EngineKind::code_repository: return "code_repository";
        case EngineKind::scholarly: return "scholarly";
    }
    return "general_web";
}

EngineKind engine_kind_from_string(const std::string& text) {
    if (text == "general_web") return EngineKind::general_web;
    if (text == "code_repository") return EngineKind::code_repository;
    if (text == "scholarly") return EngineKind::scholarly;
    throw ConfigError("unknown engine kind \"" + text +
                      "\" (expected general_web, code_repository, or scholarly)");
}

namespace {

std::set<std::string> query_tokens(const std::string& query) {
    std::set<std::string> tokens;
    std::string current;
    for (char c : query) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!current.empty()) {
            tokens.insert(current);
            current.clear();
        }
    }
    if (!current.empty()) tokens.insert(current);
    return tokens;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t common = 0;
    for (const auto& t : a) {
        if (b.count(t)) ++common;
    }
    std::size_t total = a.size() + b.size() - common;
    return total == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(total);
}

std::vector<SearchHit> hits_from_json(const nlohmann::json& results, const std::string& where) {
    if (!results.is_array()) throw SchemaError(where, "expected an array of results");
    std::vector<SearchHit> hits;
    for (const auto& r : results) {
        SearchHit hit;
        hit.title = r.value("title", "");
        hit.url = r.value("url", "");
        hit.snippet = r.value("snippet", "");
        hits.push_back(std::move(hit));
    }
    return hits;
}

}  // namespace

std::string FixtureSearchBackend::fixture_filename(const std::string& query, EngineKind kind) {
    return fnv1a64_hex(to_string(kind) + "\x1f" + query) + ".json";
}

FixtureSearchBackend::FixtureSearchBackend(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!std::filesystem::is_directory(dir_)) {
        throw SearchBackendError("fixture directory does not exist: " + dir_.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        auto j = nlohmann::json::parse(read_text_file(file), nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw SearchBackendError("malformed search fixture: " + file.string());
        }
        Fixture fixture;
        fixture.query = j.value("query", "");
        fixture.kind = engine_kind_from_string(j.value("kind", "general_web"));
        fixture.results = hits_from_json(j.value("results", nlohmann::json::array()),
                                         file.string() + ".results");
        fixtures_.push_back(std::move(fixture));
    }
}

std::vector<SearchHit> FixtureSearchBackend::search(const std::string& query, EngineKind kind) {
    for (const auto& fixture : fixtures_) {
        if (fixture.kind == kind && fixture.query == query) return fixture.results;
    }

    // Nearest match within the same kind; any kind as a last resort.
    auto tokens = query_tokens(query);
    const Fixture* best = nullptr;
    double best_score = -1.0;
    bool best_same_kind = false;
    for (const auto& fixture : fixtures_) {
        bool same_kind = fixture.kind == kind;
        double score = jaccard(tokens, query_tokens(fixture.query));
        bool better = false;
        if (same_kind != best_same_kind) {
            better = same_kind;
        } else if (score != best_score) {
            better = score > best_score;
        } else if (best) {
            better = fixture.query < best->query;
        }
        if (!best || better) {
            best = &fixture;
            best_score = score;
            best_same_kind = same_kind;
        }
    }
    if (!best) {
        throw SearchBackendError("no fixtures recorded under " + dir_.string());
    }
    return best->results;
}

HttpSearchBackend::HttpSearchBackend(HttpSearchConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty()) {
        throw ConfigError("http search backend requires an endpoint URL");
    }
}

std::vector<SearchHit> HttpSearchBackend::search(const std::string& query, EngineKind kind) {
    nlohmann::json body;
    body["query"] = query;
    body["kind"] = to_string(kind);

    net::Headers headers;
    if (!config_.api_key_env.empty()) {
        const char* key = std::getenv(config_.api_key_env.c_str());
        if (!key) {
            throw ConfigError("environment variable " + config_.api_key_env + " is not set");
        }
        headers.push_back({"Authorization", std::string("Bearer ") + key});
    }

    auto response = net::post_json(config_.endpoint, headers, body.dump(),
                                   config_.timeout_seconds);
    if (response.status == 0) {
        throw SearchBackendError("search request failed: " + response.body);
    }
    if (response.status < 200 || response.status >= 300) {
        throw SearchBackendError("search request failed: HTTP " +
                                 std::to_string(response.status));
    }
    auto j = nlohmann::json::parse(response.body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("results")) {
        throw SearchBackendError("search response is not a results document");
    }
    return hits_from_json(j["results"], "results");
}

}  // namespace nodeforge
