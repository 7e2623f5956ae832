#include "nodeforge/util.hpp"

#include "nodeforge/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace nodeforge {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view data) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(data);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw StorageError("cannot read file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw StorageError("cannot write file: " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw StorageError("short write: " + path.string());
    }
}

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Parses `{identifier}` starting at `i` (which points at '{').
// Returns identifier length, or 0 if this is not a placeholder.
std::size_t placeholder_at(std::string_view text, std::size_t i) {
    std::size_t j = i + 1;
    if (j >= text.size() || !is_ident_start(text[j])) return 0;
    while (j < text.size() && is_ident_char(text[j])) ++j;
    if (j < text.size() && text[j] == '}') return j - i - 1;
    return 0;
}

}  // namespace

std::string render_braces(std::string_view text,
                          const std::map<std::string, std::string>& slots,
                          bool strict) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        char c = text[i];
        if (c == '{' && i + 1 < text.size() && text[i + 1] == '{') {
            out.push_back('{');
            i += 2;
            continue;
        }
        if (c == '}' && i + 1 < text.size() && text[i + 1] == '}') {
            out.push_back('}');
            i += 2;
            continue;
        }
        if (c == '{') {
            std::size_t len = placeholder_at(text, i);
            if (len > 0) {
                std::string name(text.substr(i + 1, len));
                auto it = slots.find(name);
                if (it != slots.end()) {
                    out += it->second;
                } else if (strict) {
                    throw MissingInputError("unbound placeholder '" + name + "'");
                } else {
                    out += text.substr(i, len + 2);
                }
                i += len + 2;
                continue;
            }
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

std::vector<std::string> brace_placeholders(std::string_view text) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < text.size();) {
        char c = text[i];
        if ((c == '{' || c == '}') && i + 1 < text.size() && text[i + 1] == c) {
            i += 2;
            continue;
        }
        if (c == '{') {
            std::size_t len = placeholder_at(text, i);
            if (len > 0) {
                names.emplace_back(text.substr(i + 1, len));
                i += len + 2;
                continue;
            }
        }
        ++i;
    }
    return names;
}

std::string render_angle(std::string_view text,
                         const std::map<std::string, std::string>& slots) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (text[i] == '<') {
            std::size_t j = i + 1;
            if (j < text.size() && is_ident_start(text[j])) {
                while (j < text.size() && is_ident_char(text[j])) ++j;
                if (j < text.size() && text[j] == '>') {
                    std::string name(text.substr(i + 1, j - i - 1));
                    auto it = slots.find(name);
                    if (it != slots.end()) {
                        out += it->second;
                        i = j + 1;
                        continue;
                    }
                }
            }
        }
        out.push_back(text[i]);
        ++i;
    }
    return out;
}

std::string truncate_chars(std::string_view text, std::size_t limit) {
    if (text.size() <= limit) return std::string(text);
    std::string out(text.substr(0, limit));
    out += "\n[... truncated ...]";
    return out;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    auto lower = [](char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); };
    auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                          [&](char a, char b) { return lower(a) == lower(b); });
    return it != haystack.end();
}

}  // namespace nodeforge
