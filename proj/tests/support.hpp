#pragma once

#include <string>

#include "nodeforge/blueprint.hpp"
#include "nodeforge/prompts.hpp"
#include "nodeforge/providers.hpp"

namespace testsupport {

inline std::string fixtures_dir() { return NODEFORGE_FIXTURES_DIR; }
inline std::string assets_dir() { return NODEFORGE_ASSETS; }
inline std::string cli_path() { return NODEFORGE_CLI_PATH; }

inline nodeforge::PromptLibrary prompts() { return nodeforge::PromptLibrary(assets_dir()); }

inline nodeforge::NodeBlueprint make_node(std::string name, nodeforge::NodeType type,
                                          std::vector<std::string> deps,
                                          std::vector<std::string> inputs,
                                          std::vector<std::string> outputs,
                                          std::string user_body) {
    nodeforge::NodeBlueprint node;
    node.node_name = std::move(name);
    node.node_type = type;
    node.description = "test node";
    node.dependencies = std::move(deps);
    node.input_keys = std::move(inputs);
    node.output_keys = std::move(outputs);
    node.logic_description = "test logic";
    node.prompt_template =
        "System Prompt:\nYou are the " + node.node_name + " stage.\n\nUser Prompt:\n" +
        std::move(user_body);
    if (type == nodeforge::NodeType::Retrieval_RAG) node.tools_needed = {"Search"};
    node.all_code = "def run(self, input_data):\n    return output_data";
    return node;
}

/// Linear chain First_Node -> Middle_Node -> Last_Node over one string each.
inline nodeforge::NodeLibrary make_chain_library() {
    nodeforge::NodeLibrary library;
    library.pipeline_description = "three-stage chain";
    library.nodes.push_back(make_node("First_Node", nodeforge::NodeType::LLM_Generator, {},
                                      {"question"}, {"draft"}, "Question: {question}"));
    library.nodes.push_back(make_node("Middle_Node", nodeforge::NodeType::LLM_Generator,
                                      {"First_Node"}, {"draft"}, {"review"},
                                      "Draft: {draft}"));
    library.nodes.push_back(make_node("Last_Node", nodeforge::NodeType::LLM_Generator,
                                      {"Middle_Node"}, {"review"}, {"final_answer"},
                                      "Review: {review}"));
    library.connections_plan = {
        {"First_Node", {{"question", "input.question"}}},
        {"Middle_Node", {{"draft", "First_Node.draft"}}},
        {"Last_Node", {{"review", "Middle_Node.review"}}},
    };
    library.provenance = {"unit", "mock", 7};
    return library;
}

inline std::shared_ptr<nodeforge::MockProvider> chain_executor_mock() {
    auto mock = std::make_shared<nodeforge::MockProvider>();
    mock->add_chat_rule({{"First_Node"}, {}, "draft text", -1});
    mock->add_chat_rule({{"Middle_Node"}, {}, "review text", -1});
    mock->add_chat_rule({{"Last_Node"}, {}, "final text", -1});
    return mock;
}

}  // namespace testsupport
