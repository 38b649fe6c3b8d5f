#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "socsim/opinion_dynamics.hpp"
#include "socsim/policy.hpp"
#include "socsim/rng.hpp"
#include "socsim/scenario.hpp"
#include "socsim/types.hpp"

namespace socsim {

/// Snapshot of the world after a timestep is finalized. Logs are append-only.
struct WorldState {
    int t = 0;
    Event event;
    std::vector<CrowdAgentState> crowd;
    PopulationSignal population_signal;
    std::vector<std::pair<int, InterventionVector>> intervention_log;
    std::vector<std::pair<int, DiscussionSignal>> discussion_log;
    Rng rng{0};
};

/// One instrumented record per phase event, in execution order.
struct LogRecord {
    int t = 0;
    std::string phase;
    nlohmann::json detail = nlohmann::json::object();
};

/// One crowd agent's sampled action for a timestep, with its payload.
struct SampledAction {
    std::string agent_id;
    ActionKind kind = ActionKind::UpdateOpinion;
    std::optional<double> epsilon;          // SelectPartner
    std::vector<DiscussionReply> replies;   // DiscussOpinion
    std::optional<double> updated_opinion;  // UpdateOpinion
    std::string update_reason;
    std::string reasoning_trace;  // logged for audit, never interpreted
};

/// Decision backends for a run: one per source agent, one for the crowd, and
/// an optional engagement backend (the deterministic mapping applies when
/// absent).
struct ProviderSet {
    std::map<std::string, ProviderPtr> sources;
    ProviderPtr crowd;
    ProviderPtr engagement;
};

struct RunResult {
    Trajectory trajectory;
    std::vector<LogRecord> log;
    ScenarioConfig config;  // effective config, controls applied
};

/// Executes the closed simulation loop. Within each timestep the phases run
/// strictly in order: intervention selection, action sampling, peer
/// communication, state update, population aggregation, engagement emission.
/// One engine per run; a run is a pure function of (config, providers) when
/// the providers are pure.
class Engine {
public:
    Engine(ScenarioConfig config, ProviderSet providers);

    /// Explicit crowd (pre-built, e.g. by the crowd generation pipeline).
    Engine(ScenarioConfig config, ProviderSet providers, std::vector<CrowdAgentState> crowd);

    RunResult run();

    // phase operations, exposed for direct testing. The json out-parameters
    // collect audit material (reasoning traces, dropped-reply warnings) for
    // the run log.
    WorldState initialize() const;
    InterventionVector select_interventions(const WorldState& state,
                                            nlohmann::json* traces = nullptr);
    std::vector<SampledAction> sample_actions(const WorldState& state,
                                              const InterventionVector& interventions);
    DiscussionSignal communicate(const std::vector<SampledAction>& actions,
                                 const WorldState& state,
                                 const std::vector<double>& effective_epsilon,
                                 nlohmann::json* warnings = nullptr);
    std::vector<CrowdAgentState> update_states(const WorldState& state,
                                               const std::vector<SampledAction>& actions,
                                               const DiscussionSignal& discussion,
                                               const InterventionVector& interventions,
                                               const std::vector<double>& effective_epsilon,
                                               nlohmann::json* traces = nullptr);
    EngagementVector emit_engagement(const PopulationSignal& signal,
                                     const InterventionVector& interventions,
                                     const DiscussionSignal& discussion, const WorldState& state);

    /// Epsilon in effect at this timestep: the SelectPartner payload when that
    /// action was just sampled, the carried value otherwise.
    static std::vector<double> effective_epsilons(const WorldState& state,
                                                  const std::vector<SampledAction>& actions);

    const ScenarioConfig& config() const { return config_; }
    const std::vector<CrowdAgentState>& crowd_template() const { return crowd_; }

private:
    nlohmann::json source_context(const WorldState& state, const std::string& source_id) const;
    double visibility(const WorldState& state) const;

    ScenarioConfig config_;
    ProviderSet providers_;
    std::vector<CrowdAgentState> crowd_;
    Adjacency adjacency_;
    std::map<std::string, Eigen::Index> agent_index_;
};

/// Population aggregation Phi: population-weighted mean attitude, the fixed
/// 8-bin histogram over [-1, 1], and per-action tallies.
PopulationSignal aggregate_population(const std::vector<CrowdAgentState>& crowd,
                                      const std::vector<SampledAction>& actions);

/// Initial crowd states from an explicit agent list. Agents without an
/// explicit attitude draw from the seeded initial distribution.
std::vector<CrowdAgentState> crowd_from_specs(const std::vector<CrowdAgentSpec>& specs,
                                              const EngineParams& params, std::uint64_t seed);

/// Counterfactual controls 1..5: disable commenting, remove all
/// interventions, shift intervention times, drop the second / the first
/// scheduled intervention.
ScenarioConfig apply_control(const ScenarioConfig& config, int control_id);

/// Builds the provider set a scenario asks for ("scripted" entries come from
/// the config; "remote" requires remote options). provider_override replaces
/// every policy choice when non-empty.
ProviderSet make_providers(const ScenarioConfig& config, const std::string& provider_override = "",
                           const std::string& remote_endpoint = "",
                           const std::string& prompts_dir = "");

} // namespace socsim
