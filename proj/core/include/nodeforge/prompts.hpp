#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "nodeforge/llm.hpp"

namespace nodeforge {

/// Splits text at the literal "System Prompt:" / "User Prompt:" markers.
/// Missing system marker yields an empty system part; missing user marker
/// yields the remainder as the user part. Both parts are trimmed.
std::pair<std::string, std::string> split_system_user(const std::string& text);

/// Loads prompt texts from an assets directory (one .txt per prompt).
/// Placeholders use <angle_name> syntax; unknown placeholders stay literal.
class PromptLibrary {
public:
    explicit PromptLibrary(std::filesystem::path dir);

    /// Resolution order: explicit path > NODEFORGE_ASSETS_DIR environment
    /// variable > built-in default directory > ./assets.
    static std::filesystem::path resolve_assets_dir(const std::string& configured = "");

    /// Raw asset text; throws ConfigError when the file is missing.
    std::string raw(const std::string& name) const;

    std::string render(const std::string& name,
                       const std::map<std::string, std::string>& slots) const;

    /// Renders the asset and splits it into system/user chat messages.
    std::vector<ChatMessage> messages(const std::string& name,
                                      const std::map<std::string, std::string>& slots) const;

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    mutable std::mutex mutex_;
    mutable std::map<std::string, std::string> cache_;
};

}  // namespace nodeforge
