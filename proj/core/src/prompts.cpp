#include "nodeforge/prompts.hpp"

#include <cstdlib>

#include "nodeforge/errors.hpp"
#include "nodeforge/util.hpp"

#ifndef NODEFORGE_DEFAULT_ASSETS_DIR
#define NODEFORGE_DEFAULT_ASSETS_DIR ""
#endif

namespace nodeforge {

namespace {

constexpr const char* kSystemMarker = "System Prompt:";
constexpr const char* kUserMarker = "User Prompt:";

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

std::pair<std::string, std::string> split_system_user(const std::string& text) {
    auto user_pos = text.find(kUserMarker);
    auto system_pos = text.find(kSystemMarker);

    std::string system_part;
    std::string user_part;
    if (system_pos != std::string::npos) {
        std::size_t start = system_pos + std::string(kSystemMarker).size();
        std::size_t end = (user_pos != std::string::npos && user_pos > system_pos)
                              ? user_pos
                              : text.size();
        system_part = text.substr(start, end - start);
    }
    if (user_pos != std::string::npos) {
        user_part = text.substr(user_pos + std::string(kUserMarker).size());
    } else if (system_pos == std::string::npos) {
        user_part = text;
    }
    return {trim(system_part), trim(user_part)};
}

PromptLibrary::PromptLibrary(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!std::filesystem::is_directory(dir_)) {
        throw ConfigError("prompt assets directory does not exist: " + dir_.string());
    }
}

std::filesystem::path PromptLibrary::resolve_assets_dir(const std::string& configured) {
    if (!configured.empty()) return configured;
    if (const char* env = std::getenv("NODEFORGE_ASSETS_DIR"); env && *env) return env;
    std::string built_in = NODEFORGE_DEFAULT_ASSETS_DIR;
    if (!built_in.empty() && std::filesystem::is_directory(built_in)) return built_in;
    return "assets";
}

std::string PromptLibrary::raw(const std::string& name) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(name);
        if (it != cache_.end()) return it->second;
    }
    auto path = dir_ / (name + ".txt");
    if (!std::filesystem::is_regular_file(path)) {
        throw ConfigError("missing prompt asset: " + path.string());
    }
    std::string text = read_text_file(path);
    std::lock_guard<std::mutex> lock(mutex_);
    cache_[name] = text;
    return text;
}

std::string PromptLibrary::render(const std::string& name,
                                  const std::map<std::string, std::string>& slots) const {
    return render_angle(raw(name), slots);
}

std::vector<ChatMessage> PromptLibrary::messages(
    const std::string& name, const std::map<std::string, std::string>& slots) const {
    auto [system_part, user_part] = split_system_user(render(name, slots));
    std::vector<ChatMessage> out;
    if (!system_part.empty()) out.push_back({Role::system, system_part});
    out.push_back({Role::user, user_part});
    return out;
}

}  // namespace nodeforge
