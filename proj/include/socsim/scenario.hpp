#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "socsim/types.hpp"

namespace socsim {

/// Engine tuning knobs. Defaults reflect the shipped configuration; every
/// value can be overridden per scenario.
struct EngineParams {
    // crowd generation
    double lambda = 0.5;                 // embedding / prompt-score blend
    int topk_k = 2;
    double relevance_threshold = 0.7;
    std::int64_t default_population_size = 10000;
    double initial_attitude_low = -0.2;
    double initial_attitude_high = 0.2;
    double initial_epsilon = 0.5;

    // agent state
    int memory_cap = 32;

    // engagement mapping. views = population * view_rate * multiplier(I^t)
    double view_rate = 0.005;
    double like_rate = 0.1;
    double comment_rate = 0.05;
    double share_rate = 0.02;
    std::map<InterventionKind, double> multipliers = default_multipliers();

    // rule-based provider
    double rule_gain = 0.5;
    double rule_visibility_threshold = 0.75;
    double rule_attitude_threshold = 0.6;

    // counterfactual control 3
    int control_time_offset = 2;

    static std::map<InterventionKind, double> default_multipliers();
};

/// A scheduled source-side intervention; schedule entries always take
/// precedence over provider decisions.
struct ScheduleEntry {
    int t = 1;
    InterventionKind kind = InterventionKind::Inactive;
    double valence = 0.0;
    std::string message;
};

struct SourceAgentSpec {
    std::string id;
    std::string policy = "rules";  // scripted | rules | remote
    std::vector<ScheduleEntry> schedule;
};

struct CrowdAgentSpec {
    std::string agent_id;
    std::string group_name;
    std::int64_t population_size = 1;
    std::optional<double> attitude;
    std::optional<double> epsilon;
};

/// Candidate subgroup supplied in the scenario for fine-grained
/// specialization of one coarse template.
struct SubgroupCandidateSpec {
    std::string name;
    std::string description;
    std::optional<double> initial_attitude;
    std::optional<std::int64_t> population_size;
};

/// Crowd generation parameters: a group-graph file plus optional
/// per-template candidate pools.
struct CrowdGenSpec {
    std::string graph_path;
    std::map<std::string, std::vector<SubgroupCandidateSpec>> candidates;
};

struct CrowdSpec {
    std::string policy = "rules";  // scripted | rules | remote
    std::vector<CrowdAgentSpec> agents;
    std::optional<CrowdGenSpec> generate;
    // Optional explicit adjacency (pairs of agent ids); fully connected when absent.
    std::vector<std::pair<std::string, std::string>> adjacency;
    bool adjacency_explicit = false;
};

/// Everything that determines a run. Same config + seed implies a
/// bit-identical trajectory.
struct ScenarioConfig {
    int schema_version = 1;
    Event event;
    std::vector<SourceAgentSpec> source_agents;
    CrowdSpec crowd;
    EngineParams engine;
    std::uint64_t rng_seed = 0;
    std::optional<int> control;
    nlohmann::json scripted = nlohmann::json::array();  // scripted provider schedule
};

struct Violation {
    std::string where;
    std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Checks every range and structural constraint; violations are data, not
/// failures. Empty report means the config is runnable.
ValidationReport validate_scenario(const ScenarioConfig& config);

nlohmann::json to_json(const ScenarioConfig& config);
ScenarioConfig scenario_from_json(const nlohmann::json& j);

/// Canonical text form: 2-space indent, sorted keys, trailing newline.
/// serialize(deserialize(file)) is byte-identical for canonical files.
std::string serialize_scenario(const ScenarioConfig& config);

ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const ScenarioConfig& config, const std::string& path);

} // namespace socsim
