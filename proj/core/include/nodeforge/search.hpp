#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nodeforge {

enum class EngineKind {
    general_web,
    code_repository,
    scholarly,
};

std::string to_string(EngineKind kind);
EngineKind engine_kind_from_string(const std::string& text);

struct SearchHit {
    std::string title;
    std::string url;
    std::string snippet;

    bool operator==(const SearchHit&) const = default;
};

class SearchBackend {
public:
    virtual ~SearchBackend() = default;
    virtual std::vector<SearchHit> search(const std::string& query, EngineKind kind) = 0;
    virtual std::string name() const = 0;
};

/// Replays recorded searches from a directory of JSON fixtures
/// ({"query", "kind", "results"}). Exact (query, kind) match first, then the
/// nearest recorded query of the same kind by token overlap.
class FixtureSearchBackend : public SearchBackend {
public:
    explicit FixtureSearchBackend(std::filesystem::path dir);

    std::vector<SearchHit> search(const std::string& query, EngineKind kind) override;
    std::string name() const override { return "fixture"; }

    static std::string fixture_filename(const std::string& query, EngineKind kind);

private:
    struct Fixture {
        std::string query;
        EngineKind kind = EngineKind::general_web;
        std::vector<SearchHit> results;
    };

    std::filesystem::path dir_;
    std::vector<Fixture> fixtures_;
};

struct HttpSearchConfig {
    std::string endpoint;
    std::string api_key_env;
    int timeout_seconds = 60;
};

/// POSTs {"query", "kind"} to the configured endpoint and expects
/// {"results": [{"title", "url", "snippet"}]}.
class HttpSearchBackend : public SearchBackend {
public:
    explicit HttpSearchBackend(HttpSearchConfig config);

    std::vector<SearchHit> search(const std::string& query, EngineKind kind) override;
    std::string name() const override { return "http-search"; }

private:
    HttpSearchConfig config_;
};

}  // namespace nodeforge
