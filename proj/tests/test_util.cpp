#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nodeforge/errors.hpp"
#include "nodeforge/util.hpp"

using namespace nodeforge;

TEST_CASE("fnv1a64 matches the reference vectors") {
    CHECK(fnv1a64("") == 14695981039346656037ULL);
    CHECK(fnv1a64("a") == 12638187200555641996ULL);
    CHECK(fnv1a64("foobar") == 9625390261332436968ULL);
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
}

TEST_CASE("render_braces substitutes bound slots") {
    CHECK(render_braces("Q: {q} A: {a}", {{"q", "x"}, {"a", "y"}}) == "Q: x A: y");
    CHECK(render_braces("{x}{x}", {{"x", "ab"}}) == "abab");
    CHECK(render_braces("no slots", {}) == "no slots");
}

TEST_CASE("render_braces keeps escaped braces literal") {
    CHECK(render_braces("{{\"k\": \"{v}\"}}", {{"v", "1"}}) == "{\"k\": \"1\"}");
    CHECK(render_braces("{{{x}}}", {{"x", "y"}}) == "{y}");
}

TEST_CASE("render_braces strict mode rejects unbound placeholders") {
    CHECK_THROWS_AS(render_braces("{missing}", {}), MissingInputError);
    CHECK_THROWS_WITH(render_braces("{missing}", {}),
                      doctest::Contains("unbound placeholder 'missing'"));
    CHECK(render_braces("{missing}", {}, false) == "{missing}");
}

TEST_CASE("render_braces ignores non-identifier brace spans") {
    CHECK(render_braces("code { body } end", {}) == "code { body } end");
    CHECK(render_braces("a {1bad} b", {}) == "a {1bad} b");
}

TEST_CASE("brace_placeholders lists identifiers once per occurrence") {
    auto names = brace_placeholders("{a} {b} {{skip}} {a}");
    REQUIRE(names.size() == 3);
    CHECK(names[0] == "a");
    CHECK(names[1] == "b");
    CHECK(names[2] == "a");
}

TEST_CASE("render_angle binds known slots and keeps unknown ones") {
    CHECK(render_angle("T: <t> U: <u>", {{"t", "x"}}) == "T: x U: <u>");
    CHECK(render_angle("<a><a>", {{"a", "z"}}) == "zz");
}

TEST_CASE("truncate_chars appends a marker only when over the limit") {
    CHECK(truncate_chars("short", 10) == "short");
    const std::string cut = truncate_chars("0123456789", 4);
    CHECK(cut.substr(0, 4) == "0123");
    CHECK(cut.find("truncated") != std::string::npos);
}

TEST_CASE("contains_ci is case-insensitive") {
    CHECK(contains_ci("Output JSON only", "json"));
    CHECK(contains_ci("JSON", "json"));
    CHECK_FALSE(contains_ci("jsn", "json"));
    CHECK_FALSE(contains_ci("", "json"));
    CHECK(contains_ci("anything", ""));
}

TEST_CASE("write then read round-trips bytes") {
    const auto path = std::filesystem::temp_directory_path() / "nodeforge_util_rt.txt";
    write_text_file(path, "line1\nline2\n");
    CHECK(read_text_file(path) == "line1\nline2\n");
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_text_file(path), StorageError);
}
