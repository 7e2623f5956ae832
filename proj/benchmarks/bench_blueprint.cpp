#include <string>

#include <benchmark/benchmark.h>

#include "nodeforge/blueprint.hpp"

namespace {

nodeforge::NodeLibrary chain_library(int length) {
    nodeforge::NodeLibrary library;
    library.pipeline_description = "benchmark chain";
    for (int i = 0; i < length; ++i) {
        nodeforge::NodeBlueprint node;
        node.node_name = "Stage_" + std::to_string(i);
        node.description = "benchmark stage";
        node.input_keys = {"field"};
        node.output_keys = {i + 1 == length ? "final_answer" : "field"};
        node.logic_description = "pass through";
        node.prompt_template = "System Prompt:\nStage.\n\nUser Prompt:\nUse {field}.";
        if (i > 0) node.dependencies = {"Stage_" + std::to_string(i - 1)};
        library.connections_plan[node.node_name] = {
            {"field", i == 0 ? "input.field" : "Stage_" + std::to_string(i - 1) + ".field"}};
        library.nodes.push_back(std::move(node));
    }
    return library;
}

void BM_BuildPipelineGraph(benchmark::State& state) {
    const auto library = chain_library(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(nodeforge::build_pipeline_graph(library));
    }
}
BENCHMARK(BM_BuildPipelineGraph)->Arg(5)->Arg(20)->Arg(80);

void BM_ValidateLibrary(benchmark::State& state) {
    const auto library = chain_library(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(nodeforge::validate_library(library));
    }
}
BENCHMARK(BM_ValidateLibrary)->Arg(5)->Arg(20);

void BM_SerializeRoundTrip(benchmark::State& state) {
    const auto library = chain_library(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            nodeforge::deserialize_library(nodeforge::serialize_library(library)));
    }
}
BENCHMARK(BM_SerializeRoundTrip)->Arg(5)->Arg(20);

}  // namespace
