#include "socsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "socsim/remote_policy.hpp"

namespace socsim {

using nlohmann::json;

namespace {

constexpr const char* kWorldDescription =
    "a text-based social network where events evolve through source-side "
    "interventions and crowd deliberation";

json signal_to_json(const PopulationSignal& signal) {
    json counts = json::object();
    for (const auto& [action, count] : signal.action_counts) {
        counts[to_string(action)] = count;
    }
    return json{{"action_counts", std::move(counts)},
                {"attitude_histogram", signal.attitude_histogram},
                {"mean_attitude", signal.mean_attitude},
                {"total_active_population", signal.total_active_population}};
}

json interventions_to_json(const InterventionVector& interventions) {
    json list = json::array();
    for (const auto& entry : interventions) {
        list.push_back(json{{"kind", to_string(entry.kind)},
                            {"message", entry.message},
                            {"source_id", entry.source_id},
                            {"valence", entry.valence}});
    }
    return list;
}

json engagement_to_json(const EngagementVector& vec) {
    return json{{"comments", vec.comments},
                {"likes", vec.likes},
                {"shares", vec.shares},
                {"views", vec.views}};
}

Adjacency build_adjacency(const ScenarioConfig& config,
                          const std::vector<CrowdAgentState>& crowd) {
    const auto n = static_cast<Eigen::Index>(crowd.size());
    if (!config.crowd.adjacency_explicit) {
        return Adjacency::fully_connected(n);
    }
    std::map<std::string, Eigen::Index> index;
    for (Eigen::Index i = 0; i < n; ++i) index[crowd[static_cast<std::size_t>(i)].agent_id] = i;
    Adjacency adjacency(n);
    for (const auto& [a, b] : config.crowd.adjacency) {
        auto ia = index.find(a);
        auto ib = index.find(b);
        if (ia != index.end() && ib != index.end()) {
            adjacency.set(ia->second, ib->second, true);
        }
    }
    return adjacency;
}

OpinionVector opinions_of(const std::vector<CrowdAgentState>& crowd) {
    OpinionVector x(static_cast<Eigen::Index>(crowd.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        x[i] = attitude_to_opinion(crowd[static_cast<std::size_t>(i)].attitude);
    }
    return x;
}

} // namespace

PopulationSignal aggregate_population(const std::vector<CrowdAgentState>& crowd,
                                      const std::vector<SampledAction>& actions) {
    PopulationSignal signal;
    double weighted = 0.0;
    for (const auto& agent : crowd) {
        weighted += static_cast<double>(agent.population_size) * agent.attitude;
        signal.total_active_population += agent.population_size;
        signal.attitude_histogram[static_cast<std::size_t>(attitude_bin(agent.attitude))] += 1;
    }
    signal.mean_attitude = signal.total_active_population > 0
                               ? weighted / static_cast<double>(signal.total_active_population)
                               : 0.0;
    for (const auto& action : actions) {
        signal.action_counts[action.kind] += 1;
    }
    return signal;
}

std::vector<CrowdAgentState> crowd_from_specs(const std::vector<CrowdAgentSpec>& specs,
                                              const EngineParams& params, std::uint64_t seed) {
    std::vector<CrowdAgentState> crowd;
    crowd.reserve(specs.size());
    for (const auto& spec : specs) {
        CrowdAgentState agent;
        agent.agent_id = spec.agent_id;
        agent.group_name = spec.group_name.empty() ? spec.agent_id : spec.group_name;
        agent.population_size = spec.population_size;
        if (spec.attitude) {
            agent.attitude = *spec.attitude;
        } else {
            Rng rng(seed ^ fnv1a(spec.agent_id));
            agent.attitude =
                rng.uniform(params.initial_attitude_low, params.initial_attitude_high);
        }
        agent.epsilon = spec.epsilon.value_or(params.initial_epsilon);
        agent.cognitive_state = "group " + agent.group_name;
        crowd.push_back(std::move(agent));
    }
    return crowd;
}

// -- engine ------------------------------------------------------------------------

Engine::Engine(ScenarioConfig config, ProviderSet providers)
    : Engine(std::move(config), std::move(providers), {}) {
    crowd_ = crowd_from_specs(config_.crowd.agents, config_.engine, config_.rng_seed);
    adjacency_ = build_adjacency(config_, crowd_);
    agent_index_.clear();
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(crowd_.size()); ++i) {
        agent_index_[crowd_[static_cast<std::size_t>(i)].agent_id] = i;
    }
}

Engine::Engine(ScenarioConfig config, ProviderSet providers, std::vector<CrowdAgentState> crowd)
    : config_(std::move(config)), providers_(std::move(providers)), crowd_(std::move(crowd)),
      adjacency_(build_adjacency(config_, crowd_)) {
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(crowd_.size()); ++i) {
        agent_index_[crowd_[static_cast<std::size_t>(i)].agent_id] = i;
    }
}

WorldState Engine::initialize() const {
    if (crowd_.empty()) {
        throw EmptyCrowd("cannot initialize a world without crowd agents");
    }
    WorldState state;
    state.t = 0;
    state.event = config_.event;
    state.event.trajectory.clear();
    state.crowd = crowd_;
    state.population_signal = aggregate_population(state.crowd, {});
    state.rng = Rng(config_.rng_seed);
    return state;
}

double Engine::visibility(const WorldState& state) const {
    double cumulative = 0.0;
    for (const auto& vec : state.event.trajectory) cumulative += vec.views;
    const double base = config_.engine.view_rate *
                        static_cast<double>(state.population_signal.total_active_population) *
                        std::max(1, state.t);
    return base > 0.0 ? cumulative / base : 0.0;
}

json Engine::source_context(const WorldState& state, const std::string& source_id) const {
    const int t = state.t + 1;
    json trajectory = json::array();
    for (const auto& vec : state.event.trajectory) trajectory.push_back(engagement_to_json(vec));

    json history = json::array();
    for (const auto& [when, vec] : state.intervention_log) {
        for (const auto& entry : vec) {
            if (entry.source_id == source_id && entry.active()) {
                history.push_back(json{{"kind", to_string(entry.kind)}, {"t", when}});
            }
        }
    }

    const double mean = state.population_signal.mean_attitude;
    std::ostringstream opinion_summary;
    opinion_summary << "mean attitude " << mean << " across "
                    << state.crowd.size() << " groups";

    json context;
    context["source_agent_name"] = source_id;
    context["world_description"] = kWorldDescription;
    context["day_n"] = t;
    context["t"] = t;
    context["event_description"] = state.event.title;
    context["opinion_summary"] = opinion_summary.str();
    context["mean_attitude"] = mean;
    context["mean_state"] = signal_to_json(state.population_signal);
    context["visibility"] = visibility(state);
    context["intervention_history"] = std::move(history);
    context["policy_goal"] = "keep public discourse accurate and stable";
    context["risk_assessment"] =
        std::abs(mean) > 0.6 ? "elevated polarity risk" : "routine monitoring";
    context["trajectory"] = std::move(trajectory);
    context["last_engagement"] = state.event.trajectory.empty()
                                     ? json()
                                     : engagement_to_json(state.event.trajectory.back());
    return context;
}

InterventionVector Engine::select_interventions(const WorldState& state, json* traces) {
    const int t = state.t + 1;
    InterventionVector interventions;
    const bool forced_inactive = config_.control && *config_.control == 2;
    for (const auto& source : config_.source_agents) {
        Intervention entry;
        entry.source_id = source.id;
        if (forced_inactive) {
            interventions.push_back(std::move(entry));
            continue;
        }
        const ScheduleEntry* scheduled = nullptr;
        for (const auto& candidate : source.schedule) {
            if (candidate.t == t) {
                scheduled = &candidate;
                break;
            }
        }
        if (scheduled) {
            entry.kind = scheduled->kind;
            entry.valence = scheduled->kind == InterventionKind::Inactive ? 0.0
                                                                          : scheduled->valence;
            entry.message = scheduled->message;
        } else {
            auto it = providers_.sources.find(source.id);
            if (it == providers_.sources.end() || !it->second) {
                throw PolicyUnavailable("no provider configured for source '" + source.id + "'");
            }
            PolicyRequest request;
            request.role = PolicyRole::SourceAgent;
            request.t = t;
            request.agent_id = source.id;
            request.context = source_context(state, source.id);
            PolicyResponse response = it->second->decide(request);
            response.validate(PolicyRole::SourceAgent);
            entry.kind = response.intervention;
            entry.valence = entry.kind == InterventionKind::Inactive ? 0.0 : response.valence;
            entry.message = response.message;
            if (traces && !response.reasoning_trace.empty()) {
                (*traces)[source.id] = response.reasoning_trace;
            }
        }
        interventions.push_back(std::move(entry));
    }
    return interventions;
}

std::vector<SampledAction> Engine::sample_actions(const WorldState& state,
                                                  const InterventionVector& interventions) {
    const int t = state.t + 1;
    if (!providers_.crowd) {
        throw PolicyUnavailable("no crowd provider configured");
    }
    const OpinionVector opinions = opinions_of(state.crowd);
    const bool commenting_disabled = config_.control && *config_.control == 1;

    std::vector<SampledAction> actions;
    actions.reserve(state.crowd.size());
    for (std::size_t idx = 0; idx < state.crowd.size(); ++idx) {
        const CrowdAgentState& agent = state.crowd[idx];

        json neighbors = json::array();
        for (Eigen::Index j : epsilon_neighborhood(static_cast<Eigen::Index>(idx), opinions,
                                                   adjacency_, agent.epsilon)) {
            if (j == static_cast<Eigen::Index>(idx)) continue;
            const auto& peer = state.crowd[static_cast<std::size_t>(j)];
            neighbors.push_back(json{{"agent_id", peer.agent_id}, {"attitude", peer.attitude}});
        }

        PolicyRequest request;
        request.role = PolicyRole::CrowdAction;
        request.t = t;
        request.agent_id = agent.agent_id;
        request.context["agent_name"] = agent.agent_id;
        request.context["world_description"] = kWorldDescription;
        request.context["day_n"] = t;
        request.context["t"] = t;
        request.context["event_description"] = state.event.title;
        request.context["intervention_vector"] = interventions_to_json(interventions);
        request.context["mean_state"] = signal_to_json(state.population_signal);
        request.context["previous_state"] = agent.cognitive_state;
        request.context["memory_trace"] = agent.memory_trace;
        request.context["interaction_range"] = agent.epsilon;
        request.context["opinions"] = agent.attitude;
        request.context["attitude"] = agent.attitude;
        request.context["neighbors"] = std::move(neighbors);

        PolicyResponse response = providers_.crowd->decide(request);
        response.validate(PolicyRole::CrowdAction);

        SampledAction action;
        action.agent_id = agent.agent_id;
        action.kind = response.action;
        action.epsilon = response.epsilon;
        action.replies = response.replies;
        action.updated_opinion = response.updated_opinion;
        action.update_reason = response.update_reason;
        action.reasoning_trace = response.reasoning_trace;
        for (auto& reply : action.replies) reply.from_agent = agent.agent_id;
        if (commenting_disabled && action.kind == ActionKind::DiscussOpinion) {
            // control 1: commenting is a no-op
            action.kind = ActionKind::UpdateOpinion;
            action.replies.clear();
        }
        actions.push_back(std::move(action));
    }
    return actions;
}

std::vector<double> Engine::effective_epsilons(const WorldState& state,
                                               const std::vector<SampledAction>& actions) {
    std::vector<double> epsilons;
    epsilons.reserve(state.crowd.size());
    for (std::size_t i = 0; i < state.crowd.size(); ++i) {
        const auto& action = actions[i];
        if (action.kind == ActionKind::SelectPartner && action.epsilon) {
            epsilons.push_back(*action.epsilon);
        } else {
            epsilons.push_back(state.crowd[i].epsilon);
        }
    }
    return epsilons;
}

DiscussionSignal Engine::communicate(const std::vector<SampledAction>& actions,
                                     const WorldState& state,
                                     const std::vector<double>& effective_epsilon,
                                     json* warnings) {
    const OpinionVector opinions = opinions_of(state.crowd);
    DiscussionSignal signal;
    for (std::size_t idx = 0; idx < actions.size(); ++idx) {
        const auto& action = actions[idx];
        if (action.kind != ActionKind::DiscussOpinion) continue;
        const auto neighborhood = epsilon_neighborhood(
            static_cast<Eigen::Index>(idx), opinions, adjacency_, effective_epsilon[idx]);
        for (const auto& reply : action.replies) {
            auto target = agent_index_.find(reply.to_agent);
            std::string drop_reason;
            if (target == agent_index_.end()) {
                drop_reason = "unknown target agent '" + reply.to_agent + "'";
            } else if (target->second == static_cast<Eigen::Index>(idx)) {
                drop_reason = "self-addressed reply";
            } else if (std::find(neighborhood.begin(), neighborhood.end(), target->second) ==
                       neighborhood.end()) {
                drop_reason = "target outside sender's epsilon neighborhood";
            }
            if (!drop_reason.empty()) {
                if (warnings) {
                    warnings->push_back(json{{"from", action.agent_id},
                                             {"reason", drop_reason},
                                             {"to", reply.to_agent}});
                }
                continue;
            }
            signal.push_back(reply);
        }
    }
    return signal;
}

std::vector<CrowdAgentState> Engine::update_states(const WorldState& state,
                                                   const std::vector<SampledAction>& actions,
                                                   const DiscussionSignal& discussion,
                                                   const InterventionVector& interventions,
                                                   const std::vector<double>& effective_epsilon,
                                                   json* traces) {
    if (!providers_.crowd) {
        throw PolicyUnavailable("no crowd provider configured");
    }
    const int t = state.t + 1;
    const OpinionVector opinions = opinions_of(state.crowd);

    std::string active_summary;
    for (const auto& entry : interventions) {
        if (!entry.active()) continue;
        if (!active_summary.empty()) active_summary += "+";
        active_summary += to_string(entry.kind);
    }
    if (active_summary.empty()) active_summary = "none";

    std::vector<CrowdAgentState> next = state.crowd;
    for (std::size_t idx = 0; idx < next.size(); ++idx) {
        CrowdAgentState& agent = next[idx];
        const auto neighborhood = epsilon_neighborhood(
            static_cast<Eigen::Index>(idx), opinions, adjacency_, effective_epsilon[idx]);
        std::vector<double> neighborhood_attitudes;
        neighborhood_attitudes.reserve(neighborhood.size());
        for (Eigen::Index j : neighborhood) {
            neighborhood_attitudes.push_back(state.crowd[static_cast<std::size_t>(j)].attitude);
        }

        PolicyResponse reasoning;
        agent.attitude =
            hybrid_attitude_update(state.crowd[idx], discussion, interventions,
                                   neighborhood_attitudes, *providers_.crowd, t, &reasoning);
        if (!reasoning.cognitive_state.empty()) {
            agent.cognitive_state = reasoning.cognitive_state;  // reasoning path fired
        }
        if (traces && !reasoning.reasoning_trace.empty()) {
            (*traces)[agent.agent_id] = reasoning.reasoning_trace;
        }

        std::int64_t replies_in = 0;
        for (const auto& reply : discussion) {
            if (reply.to_agent == agent.agent_id) ++replies_in;
        }
        std::ostringstream memory;
        memory << "t=" << t << " action=" << to_string(actions[idx].kind)
               << " replies_in=" << replies_in << " interventions=" << active_summary;
        agent.memory_trace.push_back(memory.str());
        while (static_cast<int>(agent.memory_trace.size()) > config_.engine.memory_cap) {
            agent.memory_trace.erase(agent.memory_trace.begin());
        }

        agent.epsilon = effective_epsilon[idx];
        agent.last_action = actions[idx].kind;
    }
    return next;
}

EngagementVector Engine::emit_engagement(const PopulationSignal& signal,
                                         const InterventionVector& interventions,
                                         const DiscussionSignal& discussion,
                                         const WorldState& state) {
    const auto& eng = config_.engine;
    const double multiplier = visibility_multiplier(interventions, eng.multipliers);
    const bool has_discussion = !discussion.empty();

    if (providers_.engagement) {
        const int t = state.t + 1;
        double mean_epsilon = 0.0;
        for (const auto& agent : state.crowd) mean_epsilon += agent.epsilon;
        if (!state.crowd.empty()) mean_epsilon /= static_cast<double>(state.crowd.size());

        PolicyRequest request;
        request.role = PolicyRole::EngagementHint;
        request.t = t;
        request.agent_id = "population";
        request.context["agent_name"] = "population";
        request.context["world_description"] = kWorldDescription;
        request.context["day_n"] = t;
        request.context["event_description"] = state.event.title;
        request.context["intervention_vector"] = interventions_to_json(interventions);
        request.context["mean_state"] = signal_to_json(signal);
        request.context["previous_state"] = "";
        request.context["memory_trace"] = json::array();
        request.context["interaction_range"] = mean_epsilon;
        request.context["opinions"] = signal.mean_attitude;
        request.context["population"] =
            static_cast<double>(signal.total_active_population);
        request.context["view_rate"] = eng.view_rate;
        request.context["like_rate"] = eng.like_rate;
        request.context["comment_rate"] = eng.comment_rate;
        request.context["share_rate"] = eng.share_rate;
        request.context["multiplier"] = multiplier;
        request.context["mean_attitude"] = signal.mean_attitude;
        request.context["has_discussion"] = has_discussion;

        PolicyResponse response = providers_.engagement->decide(request);
        response.validate(PolicyRole::EngagementHint);
        return *response.engagement;
    }

    EngagementVector vec;
    vec.views = static_cast<double>(signal.total_active_population) * eng.view_rate * multiplier;
    vec.likes = vec.views * eng.like_rate * (signal.mean_attitude + 1.0) / 2.0;
    vec.comments = vec.views * eng.comment_rate * (has_discussion ? 1.0 : 0.5);
    vec.shares = vec.views * eng.share_rate * std::abs(signal.mean_attitude);
    return vec;
}

RunResult Engine::run() {
    RunResult result;
    result.config = config_;

    WorldState state = initialize();
    const auto n = static_cast<Eigen::Index>(state.crowd.size());
    const int horizon = config_.event.horizon_days;

    result.trajectory.agent_ids.reserve(state.crowd.size());
    for (const auto& agent : state.crowd) result.trajectory.agent_ids.push_back(agent.agent_id);
    result.trajectory.attitudes.resize(horizon + 1, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        result.trajectory.attitudes(0, i) = state.crowd[static_cast<std::size_t>(i)].attitude;
    }

    result.log.push_back(LogRecord{
        0, "init",
        json{{"agents", state.crowd.size()},
             {"mean_attitude", state.population_signal.mean_attitude},
             {"total_population", state.population_signal.total_active_population}}});

    for (int t = 1; t <= horizon; ++t) {
        auto guarded = [&](const char* phase, auto&& fn) {
            try {
                return fn();
            } catch (const RunAborted&) {
                throw;
            } catch (const std::exception& ex) {
                throw RunAborted(t, phase, ex.what());
            }
        };

        json source_traces = json::object();
        const InterventionVector interventions =
            guarded("intervention", [&] { return select_interventions(state, &source_traces); });
        json intervention_detail{{"active", any_active(interventions)},
                                 {"entries", interventions_to_json(interventions)}};
        if (!source_traces.empty()) intervention_detail["traces"] = std::move(source_traces);
        result.log.push_back(LogRecord{t, "intervention", std::move(intervention_detail)});

        const std::vector<SampledAction> actions =
            guarded("action", [&] { return sample_actions(state, interventions); });
        json action_counts = json::object();
        json action_traces = json::object();
        for (const auto& action : actions) {
            const std::string key = to_string(action.kind);
            action_counts[key] = action_counts.value(key, 0) + 1;
            if (!action.reasoning_trace.empty()) {
                action_traces[action.agent_id] = action.reasoning_trace;
            }
        }
        json action_detail{{"counts", std::move(action_counts)}};
        if (!action_traces.empty()) action_detail["traces"] = std::move(action_traces);
        result.log.push_back(LogRecord{t, "action", std::move(action_detail)});

        const std::vector<double> epsilons = effective_epsilons(state, actions);
        json warnings = json::array();
        const DiscussionSignal discussion =
            guarded("communicate", [&] { return communicate(actions, state, epsilons, &warnings); });
        result.log.push_back(LogRecord{
            t, "communicate", json{{"dropped", std::move(warnings)}, {"kept", discussion.size()}}});

        json update_traces = json::object();
        state.crowd = guarded("update", [&] {
            return update_states(state, actions, discussion, interventions, epsilons,
                                 &update_traces);
        });
        json update_detail{{"reasoning_path", !discussion.empty() || any_active(interventions)}};
        if (!update_traces.empty()) update_detail["traces"] = std::move(update_traces);
        result.log.push_back(LogRecord{t, "update", std::move(update_detail)});

        state.population_signal = aggregate_population(state.crowd, actions);
        result.log.push_back(
            LogRecord{t, "aggregate", json{{"signal", signal_to_json(state.population_signal)}}});

        const EngagementVector engagement = guarded("emit", [&] {
            return emit_engagement(state.population_signal, interventions, discussion, state);
        });
        result.log.push_back(LogRecord{t, "emit", engagement_to_json(engagement)});

        state.event.trajectory.push_back(engagement);
        state.intervention_log.emplace_back(t, interventions);
        state.discussion_log.emplace_back(t, discussion);
        state.t = t;

        result.trajectory.engagement.push_back(engagement);
        for (Eigen::Index i = 0; i < n; ++i) {
            result.trajectory.attitudes(t, i) = state.crowd[static_cast<std::size_t>(i)].attitude;
        }
    }

    result.trajectory.interventions = state.intervention_log;
    result.trajectory.discussions = state.discussion_log;
    return result;
}

// -- controls -----------------------------------------------------------------------

ScenarioConfig apply_control(const ScenarioConfig& config, int control_id) {
    if (control_id < 1 || control_id > 5) {
        throw Error("control must be in 1..5, got " + std::to_string(control_id));
    }
    ScenarioConfig modified = config;
    modified.control = control_id;

    // chronological index over all sources' schedule entries
    struct Ref {
        int t;
        std::size_t source;
        std::size_t entry;
    };
    std::vector<Ref> refs;
    for (std::size_t s = 0; s < config.source_agents.size(); ++s) {
        for (std::size_t e = 0; e < config.source_agents[s].schedule.size(); ++e) {
            refs.push_back(Ref{config.source_agents[s].schedule[e].t, s, e});
        }
    }
    std::stable_sort(refs.begin(), refs.end(),
                     [](const Ref& a, const Ref& b) { return a.t < b.t; });

    switch (control_id) {
        case 1:
            break;  // engine coerces DiscussOpinion to a no-op
        case 2:
            for (auto& source : modified.source_agents) source.schedule.clear();
            break;
        case 3: {
            if (refs.empty()) {
                throw MissingScheduleEntry("control 3 requires a non-empty intervention schedule");
            }
            const int offset = config.engine.control_time_offset;
            for (auto& source : modified.source_agents) {
                std::vector<ScheduleEntry> shifted;
                for (auto entry : source.schedule) {
                    entry.t += offset;
                    if (entry.t >= 1 && entry.t <= config.event.horizon_days) {
                        shifted.push_back(entry);
                    }
                }
                source.schedule = std::move(shifted);
            }
            break;
        }
        case 4: {
            if (refs.size() < 2) {
                throw MissingScheduleEntry("control 4 requires a second scheduled intervention");
            }
            const Ref& target = refs[1];
            auto& schedule = modified.source_agents[target.source].schedule;
            schedule.erase(schedule.begin() + static_cast<std::ptrdiff_t>(target.entry));
            break;
        }
        case 5: {
            if (refs.empty()) {
                throw MissingScheduleEntry("control 5 requires a scheduled intervention");
            }
            const Ref& target = refs[0];
            auto& schedule = modified.source_agents[target.source].schedule;
            schedule.erase(schedule.begin() + static_cast<std::ptrdiff_t>(target.entry));
            break;
        }
    }
    return modified;
}

// -- provider wiring ------------------------------------------------------------------

ProviderSet make_providers(const ScenarioConfig& config, const std::string& provider_override,
                           const std::string& remote_endpoint, const std::string& prompts_dir) {
    ProviderPtr scripted;
    ProviderPtr rules;
    ProviderPtr remote;

    auto resolve = [&](const std::string& requested) -> ProviderPtr {
        const std::string policy = provider_override.empty() ? requested : provider_override;
        if (policy == "scripted") {
            if (!scripted) scripted = ScriptedProvider::from_config(config.scripted);
            return scripted;
        }
        if (policy == "rules") {
            if (!rules) {
                RuleBasedProvider::Params params;
                params.gain = config.engine.rule_gain;
                params.visibility_threshold = config.engine.rule_visibility_threshold;
                params.attitude_threshold = config.engine.rule_attitude_threshold;
                rules = std::make_shared<RuleBasedProvider>(params);
            }
            return rules;
        }
        if (policy == "remote") {
            if (!remote) {
                if (remote_endpoint.empty()) {
                    throw Error("remote policy requested but no endpoint configured");
                }
                RemoteOptions options;
                options.endpoint = remote_endpoint;
                remote = std::make_shared<RemoteChatProvider>(
                    options, PromptSet::load_dir(prompts_dir.empty() ? "prompts" : prompts_dir));
            }
            return remote;
        }
        throw Error("unknown policy '" + policy + "'");
    };

    ProviderSet providers;
    for (const auto& source : config.source_agents) {
        providers.sources[source.id] = resolve(source.policy);
    }
    providers.crowd = resolve(config.crowd.policy);
    return providers;
}

} // namespace socsim
