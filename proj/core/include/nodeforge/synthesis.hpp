#pragma once

#include <string>
#include <vector>

#include "nodeforge/blueprint.hpp"
#include "nodeforge/harvest.hpp"
#include "nodeforge/llm.hpp"
#include "nodeforge/prompts.hpp"

namespace nodeforge {

struct SynthesisOptions {
    int sample_previews = 3;
    std::size_t preview_char_budget = 2000;
};

/// One Designer chat with the two-part generation prompt, then one follow-up
/// Designer call that re-emits the generated Connections code as a
/// declarative wiring map. Invalid output triggers one regeneration attempt,
/// then ValidationError.
NodeLibrary generate_initial_nodes(const std::string& task_thinking,
                                   const std::vector<QaPair>& sample_previews,
                                   const std::vector<StrategyAnalysis>& analyses,
                                   LlmGateway& designer, const PromptLibrary& prompts,
                                   const Provenance& provenance,
                                   const SynthesisOptions& options = {});

/// One corrective re-prompt embedding the violations; a second failure is
/// terminal and carries both reports.
NodeLibrary regenerate_on_failure(const std::string& previous_output,
                                  const ValidationReport& violations, LlmGateway& designer,
                                  const PromptLibrary& prompts, const Provenance& provenance);

}  // namespace nodeforge
