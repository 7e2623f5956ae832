#pragma once

#include <ostream>
#include <string>

#include "nodeforge/config.hpp"

namespace nodeforge {

/// 0 success, 2 usage/validation, 3 provider/backend, 4 storage.
int exit_code_for(const std::exception& error);

int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_optimize(const RunConfig& config, const std::string& library_file, std::ostream& out,
                 std::ostream& err);
int cmd_run(const RunConfig& config, const std::string& library_file, std::ostream& out,
            std::ostream& err);
int cmd_score(const RunConfig& config, const std::string& trajectory_file, std::ostream& out,
              std::ostream& err);
int cmd_inspect(const std::string& run_dir, std::ostream& out, std::ostream& err);

}  // namespace nodeforge
