#include "socsim/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "socsim/crowd_gen.hpp"
#include "socsim/svg_plot.hpp"
#include "socsim/trajectory_io.hpp"

namespace socsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "socsim 1.0.0";

json report_to_json(const MetricReport& report) {
    json j{{"dtw", report.dtw},
           {"mape_percent", report.mape_percent},
           {"mape_skipped", report.mape_skipped},
           {"w1", report.w1},
           {"w1_band", to_string(report.w1_band)}};
    if (report.zscore_max_abs) {
        j["run_dtw"] = report.run_dtw;
        j["zscore_max_abs"] = *report.zscore_max_abs;
    }
    return j;
}

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::string provider;
    std::string endpoint;
    std::string prompts_dir;
};

/// Validates, wires providers (and the generated crowd when requested), and
/// executes the scenario.
RunResult execute_scenario(ScenarioConfig config, const RunOptions& options,
                           const std::string& scenario_dir) {
    if (options.seed) config.rng_seed = *options.seed;

    const auto violations = validate_scenario(config);
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << "scenario is invalid:";
        for (const auto& violation : violations) {
            msg << "\n  [" << violation.where << "] " << violation.message;
        }
        throw SchemaError(msg.str());
    }

    ProviderSet providers =
        make_providers(config, options.provider, options.endpoint, options.prompts_dir);

    if (config.crowd.generate) {
        fs::path graph_path = config.crowd.generate->graph_path;
        if (graph_path.is_relative()) graph_path = fs::path(scenario_dir) / graph_path;
        GroupGraph graph = GroupGraph::load(graph_path.string());
        HashedBowEncoder encoder;
        auto built = build_crowd(config, graph, encoder, *providers.crowd);
        Engine engine(config, providers, std::move(built.agents));
        return engine.run();
    }
    Engine engine(config, providers);
    return engine.run();
}

std::vector<int> parse_controls(const std::string& csv) {
    std::vector<int> controls;
    std::string token;
    std::istringstream in(csv);
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        controls.push_back(std::stoi(token));
    }
    return controls;
}

int to_exit_code(const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    if (dynamic_cast<const RunAborted*>(&ex) || dynamic_cast<const ProviderUnavailable*>(&ex) ||
        dynamic_cast<const MalformedPolicyOutput*>(&ex)) {
        return 2;
    }
    return 1;
}

} // namespace

void write_bundle(const RunResult& result, const std::string& dir,
                  const std::optional<MetricReport>& metrics) {
    fs::create_directories(dir);
    const fs::path base(dir);
    write_trajectory_file(result.trajectory, (base / "trajectory.tsv").string());
    write_attitudes_file(result.trajectory, (base / "attitudes.tsv").string());
    write_run_log(result.log, (base / "run_log.ndjson").string());
    write_overview_svg(result.trajectory, (base / "overview.svg").string());

    json bundle;
    if (metrics) bundle["metrics"] = report_to_json(*metrics);
    bundle["scenario"] = to_json(result.config);
    bundle["schema_version"] = 1;
    bundle["seed"] = result.config.rng_seed;
    bundle["tool_version"] = kToolVersion;
    std::ofstream out(base / "bundle.json", std::ios::binary);
    if (!out) throw FileError("cannot write bundle.json under " + dir);
    out << bundle.dump(2) << "\n";
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"intervention-aware social event simulator"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    RunOptions options;
    std::string ref_path;
    std::string controls_csv;
    std::string simulated_path;
    std::string reference_path;
    std::vector<std::string> repeat_paths;
    std::string bundle_path;

    auto add_provider_flags = [&](CLI::App* cmd) {
        cmd->add_option("--seed", options.seed, "override the scenario rng seed");
        cmd->add_option("--provider", options.provider, "force one policy backend for every role")
            ->check(CLI::IsMember({"scripted", "rules", "remote"}));
        cmd->add_option("--endpoint", options.endpoint,
                        "chat-completions endpoint for --provider remote");
        cmd->add_option("--prompts", options.prompts_dir,
                        "prompt template directory (default: prompts)");
    };

    CLI::App* cmd_run = app.add_subcommand("run", "simulate a scenario and write a run bundle");
    cmd_run->add_option("scenario", scenario_path, "scenario file")->required();
    cmd_run->add_option("--out", out_dir, "output directory (default: out)");
    cmd_run->add_option("--ref", ref_path, "reference trajectory for a metric report");
    add_provider_flags(cmd_run);

    CLI::App* cmd_controls =
        app.add_subcommand("controls", "run baseline plus counterfactual controls");
    cmd_controls->add_option("scenario", scenario_path, "scenario file")->required();
    cmd_controls->add_option("--out", out_dir, "output directory (default: out)");
    cmd_controls->add_option("--controls", controls_csv, "comma list of control ids (1..5)");
    add_provider_flags(cmd_controls);

    CLI::App* cmd_eval = app.add_subcommand("eval", "evaluate a trajectory against a reference");
    cmd_eval->add_option("simulated", simulated_path, "simulated trajectory file")->required();
    cmd_eval->add_option("reference", reference_path, "reference trajectory file")->required();
    cmd_eval->add_option("repeats", repeat_paths, "repeat-run trajectory files");

    CLI::App* cmd_classify =
        app.add_subcommand("classify", "classify the opinion evolution mode of a run bundle");
    cmd_classify->add_option("bundle", bundle_path, "run bundle directory or attitudes file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (cmd_run->parsed()) {
            ScenarioConfig config = load_scenario(scenario_path);
            const std::string scenario_dir = fs::path(scenario_path).parent_path().string();
            RunResult result = execute_scenario(config, options, scenario_dir);

            std::optional<MetricReport> metrics;
            if (!ref_path.empty()) {
                metrics = evaluate(result.trajectory, read_trajectory_file(ref_path));
            }
            write_bundle(result, out_dir, metrics);
            std::cout << "run complete: " << result.trajectory.horizon() << " days, "
                      << result.trajectory.agent_ids.size() << " groups, bundle in " << out_dir
                      << "\n";
            if (metrics) std::cout << format_report(*metrics);
            return 0;
        }

        if (cmd_controls->parsed()) {
            ScenarioConfig config = load_scenario(scenario_path);
            const std::string scenario_dir = fs::path(scenario_path).parent_path().string();
            const std::vector<int> controls = parse_controls(controls_csv);

            std::vector<std::pair<std::string, Eigen::VectorXd>> runs;
            RunResult baseline = execute_scenario(config, options, scenario_dir);
            write_bundle(baseline, (fs::path(out_dir) / "baseline").string());
            runs.emplace_back("baseline", baseline.trajectory.views_series());

            for (int control : controls) {
                RunResult result =
                    execute_scenario(apply_control(config, control), options, scenario_dir);
                const std::string name = "control" + std::to_string(control);
                write_bundle(result, (fs::path(out_dir) / name).string());
                runs.emplace_back(name, result.trajectory.views_series());
            }

            std::ofstream table(fs::path(out_dir) / "comparison.tsv", std::ios::binary);
            if (!table) throw FileError("cannot write comparison.tsv under " + out_dir);
            table << "# socsim-controls v1\n";
            table << "run\ttotal_views";
            for (int t = 1; t <= baseline.trajectory.horizon(); ++t) table << "\tday" << t;
            table << "\n";
            for (const auto& [name, views] : runs) {
                table << name << "\t" << format_double(views.sum());
                for (Eigen::Index i = 0; i < views.size(); ++i) {
                    table << "\t" << format_double(views[i]);
                }
                table << "\n";
            }

            write_overlay_svg(runs, spans_of(baseline.trajectory),
                              (fs::path(out_dir) / "overlay.svg").string());
            std::cout << "controls complete: " << runs.size() << " runs, outputs in " << out_dir
                      << "\n";
            return 0;
        }

        if (cmd_eval->parsed()) {
            const Trajectory simulated = read_trajectory_file(simulated_path);
            const Trajectory reference = read_trajectory_file(reference_path);
            std::vector<Trajectory> repeats;
            for (const auto& path : repeat_paths) repeats.push_back(read_trajectory_file(path));
            const MetricReport report = evaluate(simulated, reference, repeats);
            std::cout << format_report(report);
            return 0;
        }

        if (cmd_classify->parsed()) {
            fs::path attitudes_path(bundle_path);
            if (fs::is_directory(attitudes_path)) attitudes_path /= "attitudes.tsv";
            const Trajectory trajectory = read_attitudes_file(attitudes_path.string());
            const EvolutionMode mode = classify_evolution(trajectory.attitudes);
            const fs::path plot_path = attitudes_path.parent_path() / "attitudes.svg";
            write_attitudes_svg(trajectory, plot_path.string());
            std::cout << to_string(mode) << "\n";
            return 0;
        }
    } catch (const std::exception& ex) {
        return to_exit_code(ex);
    }
    return 0;
}

} // namespace socsim
