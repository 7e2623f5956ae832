#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace nodeforge {

// FNV-1a, used for stable fingerprints and content digests.
std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Single-pass substitution of `{name}` slots. `{{` and `}}` are escapes for
// literal braces. Unknown identifiers throw MissingInputError when
// `strict` is set, otherwise pass through untouched.
std::string render_braces(std::string_view text,
                          const std::map<std::string, std::string>& slots,
                          bool strict = true);

// Identifiers referenced as `{name}` in a template, escapes excluded.
std::vector<std::string> brace_placeholders(std::string_view text);

// Single-pass substitution of `<name>` slots in prompt assets. Tokens
// without a binding are left as-is.
std::string render_angle(std::string_view text,
                         const std::map<std::string, std::string>& slots);

std::string truncate_chars(std::string_view text, std::size_t limit);

bool contains_ci(std::string_view haystack, std::string_view needle);

}  // namespace nodeforge
