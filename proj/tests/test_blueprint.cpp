#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nodeforge/errors.hpp"
#include "support.hpp"

using namespace nodeforge;
using testsupport::make_chain_library;
using testsupport::make_node;

TEST_CASE("a well-formed blueprint validates") {
    const auto node = make_node("Clean_Node", NodeType::LLM_Generator, {}, {"question"},
                                {"answer"}, "Q: {question}");
    const ValidationReport report = validate_blueprint(node);
    CHECK(report.ok);
    CHECK(report.violations.empty());
    CHECK(report.to_string() == "ok");
}

TEST_CASE("missing prompt sections are flagged with the marker name") {
    auto node = make_node("Bad_Node", NodeType::LLM_Generator, {}, {"q"}, {"a"}, "Q: {q}");
    node.prompt_template = "no markers at all {q}";
    const ValidationReport report = validate_blueprint(node);
    REQUIRE_FALSE(report.ok);
    bool system_flagged = false;
    bool user_flagged = false;
    for (const auto& v : report.violations) {
        if (v == "missing prompt section: \"System Prompt:\"") system_flagged = true;
        if (v == "missing prompt section: \"User Prompt:\"") user_flagged = true;
    }
    CHECK(system_flagged);
    CHECK(user_flagged);
}

TEST_CASE("tools and type must agree") {
    auto rag = make_node("Rag_Node", NodeType::Retrieval_RAG, {}, {"q"}, {"ctx"},
                         "Q: {q}\n{retrieved_context}");
    rag.tools_needed = {};
    auto report = validate_blueprint(rag);
    REQUIRE_FALSE(report.ok);
    CHECK(report.violations.front().find("tools/type mismatch") == 0);

    auto generator = make_node("Gen_Node", NodeType::LLM_Generator, {}, {"q"}, {"a"}, "{q}");
    generator.tools_needed = {"Search"};
    report = validate_blueprint(generator);
    REQUIRE_FALSE(report.ok);
    CHECK(report.violations.front().find("tools/type mismatch") == 0);
}

TEST_CASE("unknown placeholders are rejected, retrieved_context is reserved") {
    auto node = make_node("Slot_Node", NodeType::LLM_Generator, {}, {"q"}, {"a"},
                          "{q} and {mystery}");
    const auto report = validate_blueprint(node);
    REQUIRE_FALSE(report.ok);
    CHECK(report.violations.front() ==
          "unknown placeholder: {mystery} is not an input key or reserved slot");

    auto rag = make_node("Ctx_Node", NodeType::Retrieval_RAG, {}, {"q"}, {"ctx"},
                         "{q}\n{retrieved_context}");
    CHECK(validate_blueprint(rag).ok);
}

TEST_CASE("invalid names and negative versions are flagged") {
    auto node = make_node("Ok_Node", NodeType::LLM_Generator, {}, {"q"}, {"a"}, "{q}");
    node.node_name = "bad name!";
    CHECK_FALSE(validate_blueprint(node).ok);
    node = make_node("Ok_Node", NodeType::LLM_Generator, {}, {"q"}, {"a"}, "{q}");
    node.version = -1;
    const auto report = validate_blueprint(node);
    REQUIRE_FALSE(report.ok);
    CHECK(report.violations.front() == "negative version");
}

TEST_CASE("library validation covers wiring and structure") {
    NodeLibrary library = make_chain_library();
    CHECK(validate_library(library).ok);

    SUBCASE("duplicate node name") {
        library.nodes.push_back(library.nodes.front());
        const auto report = validate_library(library);
        REQUIRE_FALSE(report.ok);
        CHECK(report.violations.front() == "duplicate node name: First_Node");
    }
    SUBCASE("dangling dependency") {
        library.nodes[1].dependencies = {"Ghost_Node"};
        const auto report = validate_library(library);
        REQUIRE_FALSE(report.ok);
        bool found = false;
        for (const auto& v : report.violations) {
            if (v == "dangling dependency: Middle_Node depends on missing Ghost_Node")
                found = true;
        }
        CHECK(found);
    }
    SUBCASE("cycle") {
        library.nodes[0].dependencies = {"Last_Node"};
        const auto report = validate_library(library);
        REQUIRE_FALSE(report.ok);
        bool found = false;
        for (const auto& v : report.violations) {
            if (v.find("dependency cycle involving:") == 0) found = true;
        }
        CHECK(found);
    }
    SUBCASE("unresolvable input") {
        library.connections_plan["Middle_Node"].erase("draft");
        const auto report = validate_library(library);
        REQUIRE_FALSE(report.ok);
        bool found = false;
        for (const auto& v : report.violations) {
            if (v == "unresolvable input: Middle_Node.draft has no source in connections_plan")
                found = true;
        }
        CHECK(found);
    }
    SUBCASE("wiring source must be an ancestor") {
        library.connections_plan["Middle_Node"]["draft"] = "Last_Node.final_answer";
        const auto report = validate_library(library);
        CHECK_FALSE(report.ok);
    }
    SUBCASE("wiring for undeclared input") {
        library.connections_plan["Middle_Node"]["extra"] = "First_Node.draft";
        const auto report = validate_library(library);
        REQUIRE_FALSE(report.ok);
        bool found = false;
        for (const auto& v : report.violations) {
            if (v == "wiring for undeclared input: Middle_Node.extra") found = true;
        }
        CHECK(found);
    }
    SUBCASE("two sinks") {
        library.nodes.push_back(make_node("Side_Node", NodeType::LLM_Generator,
                                          {"First_Node"}, {"draft"}, {"note"}, "{draft}"));
        library.connections_plan["Side_Node"] = {{"draft", "First_Node.draft"}};
        const auto report = validate_library(library);
        REQUIRE_FALSE(report.ok);
        bool found = false;
        for (const auto& v : report.violations) {
            if (v.find("expected exactly one sink, found 2") == 0) found = true;
        }
        CHECK(found);
    }
}

TEST_CASE("topological order is deterministic and lexicographic among ready nodes") {
    NodeLibrary library;
    library.nodes.push_back(make_node("Zeta_Node", NodeType::LLM_Generator, {}, {"q"}, {"z"},
                                      "{q}"));
    library.nodes.push_back(make_node("Alpha_Node", NodeType::LLM_Generator, {}, {"q"}, {"a"},
                                      "{q}"));
    library.nodes.push_back(make_node("Merge_Node", NodeType::LLM_Generator,
                                      {"Zeta_Node", "Alpha_Node"}, {"a", "z"}, {"m"},
                                      "{a} {z}"));
    library.connections_plan = {
        {"Zeta_Node", {{"q", "input.question"}}},
        {"Alpha_Node", {{"q", "input.question"}}},
        {"Merge_Node", {{"a", "Alpha_Node.a"}, {"z", "Zeta_Node.z"}}},
    };
    const PipelineGraph graph = build_pipeline_graph(library);
    REQUIRE(graph.ordered_nodes.size() == 3);
    CHECK(graph.ordered_nodes[0] == "Alpha_Node");
    CHECK(graph.ordered_nodes[1] == "Zeta_Node");
    CHECK(graph.ordered_nodes[2] == "Merge_Node");
    CHECK(graph.edges.count({"Zeta_Node", "Merge_Node"}) == 1);
}

TEST_CASE("graph construction throws typed errors") {
    NodeLibrary library = make_chain_library();
    library.nodes[0].dependencies = {"Last_Node"};
    CHECK_THROWS_AS(build_pipeline_graph(library), CycleError);

    library = make_chain_library();
    library.nodes[2].dependencies = {"Ghost_Node"};
    CHECK_THROWS_AS(build_pipeline_graph(library), DanglingDependencyError);
}

TEST_CASE("transitive dependencies include indirect ancestors") {
    const NodeLibrary library = make_chain_library();
    const auto ancestors = transitive_dependencies(library, "Last_Node");
    CHECK(ancestors == std::set<std::string>{"First_Node", "Middle_Node"});
    CHECK(transitive_dependencies(library, "First_Node").empty());
}

TEST_CASE("sink and final answer key") {
    NodeLibrary library = make_chain_library();
    CHECK(sink_node(library).node_name == "Last_Node");
    CHECK(final_answer_key(library) == "final_answer");

    library.nodes[2].output_keys = {"verdict", "note"};
    CHECK(final_answer_key(library) == "verdict");
}

TEST_CASE("wiring source grammar") {
    WiringSource source = parse_wiring_source("input.question");
    CHECK(source.kind == WiringSource::Kind::initial_input);
    CHECK(source.key == "question");

    source = parse_wiring_source("First_Node.draft");
    CHECK(source.kind == WiringSource::Kind::node_key);
    CHECK(source.node == "First_Node");
    CHECK(source.key == "draft");

    source = parse_wiring_source("First_Node.*");
    CHECK(source.kind == WiringSource::Kind::node_whole);
    CHECK(source.node == "First_Node");

    CHECK_THROWS_AS(parse_wiring_source("nodot"), WiringError);
    CHECK_THROWS_AS(parse_wiring_source(".leading"), WiringError);
    CHECK_THROWS_AS(parse_wiring_source("trailing."), WiringError);
    CHECK_THROWS_AS(parse_wiring_source("a.b c"), WiringError);
}

TEST_CASE("serialization round-trips and is byte-stable") {
    const NodeLibrary library = make_chain_library();
    const std::string first = serialize_library(library);
    const std::string second = serialize_library(deserialize_library(first));
    CHECK(first == second);
    CHECK(first.back() == '\n');
    CHECK(deserialize_library(first) == library);
}

TEST_CASE("deserialization reports the offending path") {
    CHECK_THROWS_AS(deserialize_library("not json"), SchemaError);
    try {
        deserialize_library("not json");
    } catch (const SchemaError& error) {
        CHECK(error.path() == "$");
    }

    nlohmann::json document = library_to_json(make_chain_library());
    document["nodes"][1].erase("node_type");
    try {
        library_from_json(document);
        FAIL("expected SchemaError");
    } catch (const SchemaError& error) {
        CHECK(error.path() == "nodes[1].node_type");
    }

    document = library_to_json(make_chain_library());
    document["nodes"][0]["version"] = -3;
    CHECK_THROWS_AS(library_from_json(document), SchemaError);

    document = library_to_json(make_chain_library());
    document["nodes"][0]["node_type"] = "Validator_Tool";
    CHECK_THROWS_AS(library_from_json(document), SchemaError);
}

namespace {

/// Random valid DAG library: nodes named Node_00.., edges only from lower to
/// higher indices, one forced sink.
NodeLibrary random_library(std::mt19937_64& rng) {
    NodeLibrary library;
    library.pipeline_description = "random library";
    const int n = 2 + static_cast<int>(rng() % 6);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) {
        std::string digits = std::to_string(i);
        if (digits.size() < 2) digits.insert(digits.begin(), '0');
        names.push_back("Node_" + digits);
    }
    for (int i = 0; i < n; ++i) {
        std::vector<std::string> deps;
        std::vector<std::string> inputs;
        std::map<std::string, std::string> wiring;
        if (i == 0) {
            inputs = {"question"};
            wiring["question"] = "input.question";
        } else {
            for (int j = 0; j < i; ++j) {
                const bool backbone = j == i - 1;  // keeps the sink unique
                if (backbone || rng() % 3 == 0) {
                    deps.push_back(names[j]);
                    const std::string key = "k" + std::to_string(j);
                    inputs.push_back(key);
                    wiring[key] = rng() % 4 == 0 ? names[j] + ".*" : names[j] + ".out";
                }
            }
        }
        std::string body;
        for (const auto& key : inputs) body += "{" + key + "} ";
        auto node = make_node(names[i], NodeType::LLM_Generator, deps, inputs,
                              {i == n - 1 ? "final_answer" : "out"}, body);
        node.version = static_cast<std::int64_t>(rng() % 5);
        library.nodes.push_back(node);
        library.connections_plan[names[i]] = wiring;
    }
    // Chain guarantee above only links i-1 -> i, so the last node is the sink.
    library.provenance = {"random", "mock", rng()};
    library.epoch = static_cast<std::int64_t>(rng() % 10);
    return library;
}

}  // namespace

TEST_CASE("500 random libraries: valid, acyclic, deterministic order, round-trip") {
    std::mt19937_64 rng(20260815ULL);
    for (int trial = 0; trial < 500; ++trial) {
        const NodeLibrary library = random_library(rng);
        const ValidationReport report = validate_library(library);
        if (!report.ok) {
            CAPTURE(report.to_string());
            REQUIRE(report.ok);
        }
        const PipelineGraph graph = build_pipeline_graph(library);
        REQUIRE(graph.ordered_nodes.size() == library.nodes.size());
        std::map<std::string, std::size_t> position;
        for (std::size_t i = 0; i < graph.ordered_nodes.size(); ++i) {
            position[graph.ordered_nodes[i]] = i;
        }
        for (const auto& node : library.nodes) {
            for (const auto& dep : node.dependencies) {
                REQUIRE(position.at(dep) < position.at(node.node_name));
            }
        }
        const std::string bytes = serialize_library(library);
        const NodeLibrary reloaded = deserialize_library(bytes);
        REQUIRE(reloaded == library);
        REQUIRE(serialize_library(reloaded) == bytes);
    }
}
