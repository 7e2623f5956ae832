#include "nodeforge/commands.hpp"

#include <filesystem>
#include <functional>
#include <sstream>

#include "nodeforge/errors.hpp"
#include "nodeforge/synthesis.hpp"
#include "nodeforge/trajectory.hpp"
#include "nodeforge/util.hpp"

namespace nodeforge {
namespace {

namespace fs = std::filesystem;

std::string padded3(std::int64_t value) {
    std::string digits = std::to_string(value);
    while (digits.size() < 3) digits.insert(digits.begin(), '0');
    return digits;
}

int dispatch(std::ostream& err, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const std::exception& error) {
        err << "error: " << error.what() << "\n";
        return exit_code_for(error);
    }
}

std::string require_out(const RunConfig& config, const char* command) {
    if (config.out.empty()) {
        throw ConfigError(std::string(command) + " requires an output directory (--out)");
    }
    return config.out;
}

void write_json(const fs::path& path, const nlohmann::json& document) {
    write_text_file(path, document.dump(2) + "\n");
}

struct Session {
    std::unique_ptr<LlmGateway> designer;
    std::unique_ptr<LlmGateway> executor;
    std::unique_ptr<SearchBackend> search;
    PromptLibrary prompts;

    explicit Session(const RunConfig& config)
        : designer(make_gateway(config.designer)),
          executor(make_gateway(config.executor)),
          search(make_search_backend(config.search)),
          prompts(PromptLibrary::resolve_assets_dir(config.assets_dir)) {}

    RuntimeEnv env(const RunConfig& config) {
        return RuntimeEnv{*executor,
                          *designer,
                          *search,
                          prompts,
                          config.rounds,
                          engine_kind_from_string(config.node_search_engine)};
    }
};

std::vector<std::string> ids_for(const std::vector<QaPair>& samples) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < samples.size(); ++i) ids.push_back(sample_id_for(i));
    return ids;
}

}  // namespace

int exit_code_for(const std::exception& error) {
    if (dynamic_cast<const StorageError*>(&error)) return 4;
    if (dynamic_cast<const ProviderError*>(&error) ||
        dynamic_cast<const SearchBackendError*>(&error) ||
        dynamic_cast<const MalformedOutputError*>(&error) ||
        dynamic_cast<const UnsupportedError*>(&error)) {
        return 3;
    }
    if (dynamic_cast<const Error*>(&error)) return 2;
    return 1;
}

int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return dispatch(err, [&] {
        const std::string out_dir = require_out(config, "generate");
        const std::vector<QaPair> dataset =
            load_dataset(config.dataset, config.question_field, config.answer_field);
        Session session(config);
        const HarvestResult harvest = run_harvest(dataset, harvest_options_from(config),
                                                  *session.designer, *session.search,
                                                  session.prompts);
        for (const std::string& warning : harvest.warnings) {
            err << "warning: " << warning << "\n";
        }
        Provenance provenance;
        provenance.dataset = config.dataset;
        provenance.designer = session.designer->provider().name();
        provenance.seed = config.seed;
        SynthesisOptions options;
        options.sample_previews = config.sample_previews;
        options.preview_char_budget = config.preview_char_budget;
        const NodeLibrary library =
            generate_initial_nodes(harvest.profile.thinking, harvest.buffer.samples,
                                   harvest.analyses, *session.designer, session.prompts,
                                   provenance, options);
        write_text_file(fs::path(out_dir) / "config.json",
                        config_to_json(config).dump(2) + "\n");
        const fs::path library_path = fs::path(out_dir) / "library_epoch_000.json";
        write_text_file(library_path, serialize_library(library));
        out << "wrote " << library_path.string() << "\n";
        out << "nodes: " << library.nodes.size() << "\n";
    });
}

int cmd_optimize(const RunConfig& config, const std::string& library_file, std::ostream& out,
                 std::ostream& err) {
    return dispatch(err, [&] {
        const std::string out_dir = require_out(config, "optimize");
        NodeLibrary initial = deserialize_library(read_text_file(library_file));
        const ValidationReport report = validate_library(initial);
        if (!report.ok) throw ValidationError(report.to_string());

        const std::vector<QaPair> dataset =
            load_dataset(config.dataset, config.question_field, config.answer_field);
        const std::vector<std::string> sample_ids = ids_for(dataset);
        Session session(config);
        RuntimeEnv env = session.env(config);

        write_text_file(fs::path(out_dir) / "config.json",
                        config_to_json(config).dump(2) + "\n");
        write_text_file(fs::path(out_dir) / "library_epoch_000.json",
                        serialize_library(initial));

        const EpochHook hook = [&](std::int64_t epoch, const NodeLibrary& snapshot,
                                   const EpochReport& epoch_report,
                                   const std::vector<Trajectory>& trajectories) {
            const fs::path epoch_dir = fs::path(out_dir) / ("epoch_" + padded3(epoch));
            write_text_file(fs::path(out_dir) / ("library_epoch_" + padded3(epoch) + ".json"),
                            serialize_library(snapshot));
            write_json(epoch_dir / "rewards.json", ledger_to_json(epoch_report.ledger));
            write_json(epoch_dir / "report.json", report_to_json(epoch_report));
            for (const Trajectory& trajectory : trajectories) {
                write_text_file(epoch_dir / "trajectories" / (trajectory.sample_id + ".json"),
                                serialize_trajectory(trajectory));
            }
            out << "epoch " << epoch << ": bottleneck=" << epoch_report.ledger.bottleneck
                << " refined=" << (epoch_report.refinement_succeeded ? "yes" : "no") << "\n";
        };

        const OptimizationRun run = optimize(initial, dataset, sample_ids, env,
                                             optimize_options_from(config), hook);
        write_text_file(fs::path(out_dir) / "final_library.json",
                        serialize_library(run.final_library));
        write_json(fs::path(out_dir) / "final.json",
                   {{"policy", to_string(run.policy)}, {"chosen_epoch", run.chosen_epoch}});
        out << "final: epoch " << run.chosen_epoch << "\n";
    });
}

int cmd_run(const RunConfig& config, const std::string& library_file, std::ostream& out,
            std::ostream& err) {
    return dispatch(err, [&] {
        const std::string out_dir = require_out(config, "run");
        NodeLibrary library = deserialize_library(read_text_file(library_file));
        const ValidationReport report = validate_library(library);
        if (!report.ok) throw ValidationError(report.to_string());

        const std::vector<QaPair> dataset =
            load_dataset(config.dataset, config.question_field, config.answer_field);
        Session session(config);
        RuntimeEnv env = session.env(config);
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            const Trajectory trajectory =
                run_pipeline(library, dataset[i], sample_id_for(i), env);
            const fs::path path =
                fs::path(out_dir) / "trajectories" / (trajectory.sample_id + ".json");
            write_text_file(path, serialize_trajectory(trajectory));
            out << trajectory.sample_id << ": " << path.string() << "\n";
        }
    });
}

int cmd_score(const RunConfig& config, const std::string& trajectory_file, std::ostream& out,
              std::ostream& err) {
    return dispatch(err, [&] {
        const Trajectory trajectory =
            deserialize_trajectory(read_text_file(trajectory_file));
        Session session(config);
        const TrajectoryScore score =
            score_trajectory(trajectory, config.alpha, *session.executor, session.prompts,
                             delta_mode_from_string(config.delta_mode));
        nlohmann::json document = trajectory_score_to_json(score);
        document["sample_id"] = trajectory.sample_id;
        out << document.dump(2) << "\n";
    });
}

int cmd_inspect(const std::string& run_dir, std::ostream& out, std::ostream& err) {
    return dispatch(err, [&] {
        if (!fs::exists(fs::path(run_dir) / "config.json")) {
            throw ConfigError("not a run directory (missing config.json): " + run_dir);
        }
        std::int64_t epoch = 1;
        while (true) {
            const fs::path report_path =
                fs::path(run_dir) / ("epoch_" + padded3(epoch)) / "report.json";
            if (!fs::exists(report_path)) break;
            const EpochReport report =
                report_from_json(nlohmann::json::parse(read_text_file(report_path)));
            double sum = 0.0;
            for (const auto& [node, mean] : report.ledger.per_node_mean) sum += mean;
            const double mean =
                report.ledger.per_node_mean.empty()
                    ? 0.0
                    : sum / static_cast<double>(report.ledger.per_node_mean.size());
            out << "epoch " << report.epoch << ": bottleneck=" << report.ledger.bottleneck
                << " mean_reward=" << nlohmann::json(mean).dump() << " refined="
                << (report.refined_node.empty() ? "-" : report.refined_node) << "\n";
            ++epoch;
        }
        const fs::path final_path = fs::path(run_dir) / "final.json";
        if (fs::exists(final_path)) {
            const nlohmann::json final_marker =
                nlohmann::json::parse(read_text_file(final_path));
            out << "policy=" << final_marker.at("policy").get<std::string>()
                << " chosen_epoch=" << final_marker.at("chosen_epoch").get<std::int64_t>()
                << "\n";
        }
    });
}

}  // namespace nodeforge
