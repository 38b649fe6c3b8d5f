#include "socsim/scenario.hpp"

#include <fstream>
#include <sstream>

namespace socsim {

using nlohmann::json;

std::map<InterventionKind, double> EngineParams::default_multipliers() {
    return {
        {InterventionKind::Prohibition, 0.5},
        {InterventionKind::Refutation, 1.1},
        {InterventionKind::Publicity, 1.5},
        {InterventionKind::Response, 1.2},
        {InterventionKind::Announcement, 1.3},
        {InterventionKind::Inactive, 1.0},
    };
}

namespace {

void check_range(ValidationReport& report, const std::string& where, double value,
                 double lo, double hi, const std::string& name) {
    if (!(value >= lo && value <= hi)) {
        std::ostringstream msg;
        msg << name << " " << value << " outside [" << lo << ", " << hi << "]";
        report.push_back({where, msg.str()});
    }
}

} // namespace

ValidationReport validate_scenario(const ScenarioConfig& config) {
    ValidationReport report;

    if (config.schema_version != 1) {
        report.push_back({"schema_version",
                          "unsupported schema_version " + std::to_string(config.schema_version)});
    }
    if (config.event.horizon_days < 1) {
        report.push_back({"event", "horizon_days must be >= 1"});
    }
    if (config.event.id.empty()) {
        report.push_back({"event", "id must be non-empty"});
    }

    const bool generated = config.crowd.generate.has_value();
    if (!generated) {
        if (config.event.domain.empty()) {
            report.push_back({"event", "domain must be non-empty (no crowd generation requested)"});
        }
        if (config.event.country.empty()) {
            report.push_back({"event", "country must be non-empty (no crowd generation requested)"});
        }
    }

    // sources
    std::map<std::string, int> source_ids;
    for (const auto& source : config.source_agents) {
        const std::string where = "source_agents." + source.id;
        if (source.id.empty()) report.push_back({where, "source id must be non-empty"});
        if (++source_ids[source.id] == 2) {
            report.push_back({where, "duplicate source id '" + source.id + "'"});
        }
        if (source.policy != "scripted" && source.policy != "rules" && source.policy != "remote") {
            report.push_back({where, "unknown policy '" + source.policy + "'"});
        }
        for (const auto& entry : source.schedule) {
            if (entry.t < 1 || entry.t > config.event.horizon_days) {
                report.push_back({where, "schedule entry t=" + std::to_string(entry.t) +
                                             " outside 1.." +
                                             std::to_string(config.event.horizon_days)});
            }
            check_range(report, where, entry.valence, -1.0, 1.0, "schedule valence");
            if (entry.kind == InterventionKind::Inactive && entry.valence != 0.0) {
                report.push_back({where, "Inactive schedule entry must have valence 0"});
            }
        }
    }

    // crowd
    if (config.crowd.agents.empty() && !generated) {
        report.push_back({"crowd", "crowd must list agents or request generation"});
    }
    if (!config.crowd.agents.empty() && generated) {
        report.push_back({"crowd", "crowd must specify exactly one of agents / generate"});
    }
    if (config.crowd.policy != "scripted" && config.crowd.policy != "rules" &&
        config.crowd.policy != "remote") {
        report.push_back({"crowd", "unknown policy '" + config.crowd.policy + "'"});
    }
    std::map<std::string, int> agent_ids;
    for (const auto& agent : config.crowd.agents) {
        const std::string where = "crowd.agents." + agent.agent_id;
        if (agent.agent_id.empty()) report.push_back({where, "agent_id must be non-empty"});
        if (++agent_ids[agent.agent_id] == 2) {
            report.push_back({where, "duplicate agent_id '" + agent.agent_id + "'"});
        }
        if (agent.population_size < 1) {
            report.push_back({where, "population_size must be >= 1"});
        }
        if (agent.attitude) {
            check_range(report, where, *agent.attitude, -1.0, 1.0,
                        "agent '" + agent.agent_id + "' attitude");
        }
        if (agent.epsilon) {
            check_range(report, where, *agent.epsilon, 0.0, 1.0,
                        "agent '" + agent.agent_id + "' epsilon");
        }
    }
    for (const auto& [a, b] : config.crowd.adjacency) {
        if (!agent_ids.count(a) || !agent_ids.count(b)) {
            report.push_back({"crowd.adjacency", "edge (" + a + ", " + b +
                                                     ") references unknown agent"});
        }
    }

    // engine
    const auto& eng = config.engine;
    check_range(report, "engine", eng.lambda, 0.0, 1.0, "lambda");
    if (eng.topk_k < 1) report.push_back({"engine", "topk_k must be >= 1"});
    check_range(report, "engine", eng.relevance_threshold, 0.0, 1.0, "relevance_threshold");
    if (eng.memory_cap < 1) report.push_back({"engine", "memory_cap must be >= 1"});
    if (eng.default_population_size < 1) {
        report.push_back({"engine", "default_population_size must be >= 1"});
    }
    check_range(report, "engine", eng.view_rate, 0.0, 1.0, "view_rate");
    check_range(report, "engine", eng.like_rate, 0.0, 1.0, "like_rate");
    check_range(report, "engine", eng.comment_rate, 0.0, 1.0, "comment_rate");
    check_range(report, "engine", eng.share_rate, 0.0, 1.0, "share_rate");
    for (const auto& [kind, value] : eng.multipliers) {
        if (value <= 0.0) {
            report.push_back({"engine", "multiplier for " + to_string(kind) + " must be > 0"});
        }
    }
    check_range(report, "engine", eng.initial_attitude_low, -1.0, 1.0, "initial_attitude_low");
    check_range(report, "engine", eng.initial_attitude_high, -1.0, 1.0, "initial_attitude_high");
    if (eng.initial_attitude_low > eng.initial_attitude_high) {
        report.push_back({"engine", "initial_attitude_low must be <= initial_attitude_high"});
    }
    check_range(report, "engine", eng.initial_epsilon, 0.0, 1.0, "initial_epsilon");
    check_range(report, "engine", eng.rule_gain, 0.0, 1.0, "rule_gain");
    if (eng.rule_visibility_threshold < 0.0) {
        report.push_back({"engine", "rule_visibility_threshold must be >= 0"});
    }
    check_range(report, "engine", eng.rule_attitude_threshold, 0.0, 1.0,
                "rule_attitude_threshold");

    if (config.control && (*config.control < 1 || *config.control > 5)) {
        report.push_back({"control", "control must be in 1..5"});
    }

    return report;
}

// -- json ------------------------------------------------------------------------

namespace {

json multipliers_to_json(const std::map<InterventionKind, double>& multipliers) {
    json j = json::object();
    for (const auto& [kind, value] : multipliers) j[to_string(kind)] = value;
    return j;
}

std::map<InterventionKind, double> multipliers_from_json(const json& j) {
    auto multipliers = EngineParams::default_multipliers();
    for (const auto& [key, value] : j.items()) {
        multipliers[intervention_kind_from_string(key)] = value.get<double>();
    }
    return multipliers;
}

json engine_to_json(const EngineParams& eng) {
    return json{
        {"comment_rate", eng.comment_rate},
        {"control_time_offset", eng.control_time_offset},
        {"default_population_size", eng.default_population_size},
        {"initial_attitude_high", eng.initial_attitude_high},
        {"initial_attitude_low", eng.initial_attitude_low},
        {"initial_epsilon", eng.initial_epsilon},
        {"lambda", eng.lambda},
        {"like_rate", eng.like_rate},
        {"memory_cap", eng.memory_cap},
        {"multipliers", multipliers_to_json(eng.multipliers)},
        {"relevance_threshold", eng.relevance_threshold},
        {"rule_attitude_threshold", eng.rule_attitude_threshold},
        {"rule_gain", eng.rule_gain},
        {"rule_visibility_threshold", eng.rule_visibility_threshold},
        {"share_rate", eng.share_rate},
        {"topk_k", eng.topk_k},
        {"view_rate", eng.view_rate},
    };
}

EngineParams engine_from_json(const json& j) {
    EngineParams eng;
    eng.comment_rate = j.value("comment_rate", eng.comment_rate);
    eng.control_time_offset = j.value("control_time_offset", eng.control_time_offset);
    eng.default_population_size = j.value("default_population_size", eng.default_population_size);
    eng.initial_attitude_high = j.value("initial_attitude_high", eng.initial_attitude_high);
    eng.initial_attitude_low = j.value("initial_attitude_low", eng.initial_attitude_low);
    eng.initial_epsilon = j.value("initial_epsilon", eng.initial_epsilon);
    eng.lambda = j.value("lambda", eng.lambda);
    eng.like_rate = j.value("like_rate", eng.like_rate);
    eng.memory_cap = j.value("memory_cap", eng.memory_cap);
    if (j.contains("multipliers")) eng.multipliers = multipliers_from_json(j.at("multipliers"));
    eng.relevance_threshold = j.value("relevance_threshold", eng.relevance_threshold);
    eng.rule_attitude_threshold = j.value("rule_attitude_threshold", eng.rule_attitude_threshold);
    eng.rule_gain = j.value("rule_gain", eng.rule_gain);
    eng.rule_visibility_threshold =
        j.value("rule_visibility_threshold", eng.rule_visibility_threshold);
    eng.share_rate = j.value("share_rate", eng.share_rate);
    eng.topk_k = j.value("topk_k", eng.topk_k);
    eng.view_rate = j.value("view_rate", eng.view_rate);
    return eng;
}

} // namespace

json to_json(const ScenarioConfig& config) {
    json j;
    j["schema_version"] = config.schema_version;
    json event{
        {"content", config.event.content}, {"country", config.event.country},
        {"domain", config.event.domain},   {"horizon_days", config.event.horizon_days},
        {"id", config.event.id},           {"title", config.event.title},
    };
    j["event"] = std::move(event);

    json sources = json::array();
    for (const auto& source : config.source_agents) {
        json s{{"id", source.id}, {"policy", source.policy}};
        if (!source.schedule.empty()) {
            json schedule = json::array();
            for (const auto& entry : source.schedule) {
                json e{{"kind", to_string(entry.kind)}, {"t", entry.t},
                       {"valence", entry.valence}};
                if (!entry.message.empty()) e["message"] = entry.message;
                schedule.push_back(std::move(e));
            }
            s["schedule"] = std::move(schedule);
        }
        sources.push_back(std::move(s));
    }
    j["source_agents"] = std::move(sources);

    json crowd;
    crowd["policy"] = config.crowd.policy;
    if (!config.crowd.agents.empty()) {
        json agents = json::array();
        for (const auto& agent : config.crowd.agents) {
            json a{{"agent_id", agent.agent_id},
                   {"group_name", agent.group_name},
                   {"population_size", agent.population_size}};
            if (agent.attitude) a["attitude"] = *agent.attitude;
            if (agent.epsilon) a["epsilon"] = *agent.epsilon;
            agents.push_back(std::move(a));
        }
        crowd["agents"] = std::move(agents);
    }
    if (config.crowd.generate) {
        json gen{{"graph_path", config.crowd.generate->graph_path}};
        if (!config.crowd.generate->candidates.empty()) {
            json candidates = json::object();
            for (const auto& [tmpl, pool] : config.crowd.generate->candidates) {
                json list = json::array();
                for (const auto& cand : pool) {
                    json c{{"description", cand.description}, {"name", cand.name}};
                    if (cand.initial_attitude) c["initial_attitude"] = *cand.initial_attitude;
                    if (cand.population_size) c["population_size"] = *cand.population_size;
                    list.push_back(std::move(c));
                }
                candidates[tmpl] = std::move(list);
            }
            gen["candidates"] = std::move(candidates);
        }
        crowd["generate"] = std::move(gen);
    }
    if (config.crowd.adjacency_explicit) {
        json edges = json::array();
        for (const auto& [a, b] : config.crowd.adjacency) {
            edges.push_back(json::array({a, b}));
        }
        crowd["adjacency"] = std::move(edges);
    }
    j["crowd"] = std::move(crowd);

    j["engine"] = engine_to_json(config.engine);
    j["rng_seed"] = config.rng_seed;
    if (config.control) j["control"] = *config.control;
    if (!config.scripted.empty()) j["scripted"] = config.scripted;
    return j;
}

ScenarioConfig scenario_from_json(const json& j) {
    ScenarioConfig config;
    config.schema_version = j.value("schema_version", 0);

    const json& event = j.at("event");
    config.event.id = event.value("id", "");
    config.event.title = event.value("title", "");
    config.event.content = event.value("content", "");
    config.event.domain = event.value("domain", "");
    config.event.country = event.value("country", "");
    config.event.horizon_days = event.value("horizon_days", 7);

    for (const json& s : j.value("source_agents", json::array())) {
        SourceAgentSpec source;
        source.id = s.value("id", "");
        source.policy = s.value("policy", "rules");
        for (const json& e : s.value("schedule", json::array())) {
            ScheduleEntry entry;
            entry.t = e.value("t", 1);
            entry.kind = intervention_kind_from_string(e.value("kind", "Inactive"));
            entry.valence = e.value("valence", 0.0);
            entry.message = e.value("message", "");
            source.schedule.push_back(std::move(entry));
        }
        config.source_agents.push_back(std::move(source));
    }

    if (j.contains("crowd")) {
        const json& crowd = j.at("crowd");
        config.crowd.policy = crowd.value("policy", "rules");
        for (const json& a : crowd.value("agents", json::array())) {
            CrowdAgentSpec agent;
            agent.agent_id = a.value("agent_id", "");
            agent.group_name = a.value("group_name", agent.agent_id);
            agent.population_size = a.value("population_size", std::int64_t{1});
            if (a.contains("attitude")) agent.attitude = a.at("attitude").get<double>();
            if (a.contains("epsilon")) agent.epsilon = a.at("epsilon").get<double>();
            config.crowd.agents.push_back(std::move(agent));
        }
        if (crowd.contains("generate")) {
            const json& gen = crowd.at("generate");
            CrowdGenSpec spec;
            spec.graph_path = gen.value("graph_path", "");
            const json candidate_pools = gen.value("candidates", json::object());
            for (const auto& [tmpl, list] : candidate_pools.items()) {
                std::vector<SubgroupCandidateSpec> pool;
                for (const json& c : list) {
                    SubgroupCandidateSpec cand;
                    cand.name = c.value("name", "");
                    cand.description = c.value("description", "");
                    if (c.contains("initial_attitude")) {
                        cand.initial_attitude = c.at("initial_attitude").get<double>();
                    }
                    if (c.contains("population_size")) {
                        cand.population_size = c.at("population_size").get<std::int64_t>();
                    }
                    pool.push_back(std::move(cand));
                }
                spec.candidates[tmpl] = std::move(pool);
            }
            config.crowd.generate = std::move(spec);
        }
        if (crowd.contains("adjacency")) {
            config.crowd.adjacency_explicit = true;
            for (const json& edge : crowd.at("adjacency")) {
                config.crowd.adjacency.emplace_back(edge.at(0).get<std::string>(),
                                                    edge.at(1).get<std::string>());
            }
        }
    }

    if (j.contains("engine")) config.engine = engine_from_json(j.at("engine"));
    config.rng_seed = j.value("rng_seed", std::uint64_t{0});
    if (j.contains("control")) config.control = j.at("control").get<int>();
    if (j.contains("scripted")) config.scripted = j.at("scripted");
    return config;
}

std::string serialize_scenario(const ScenarioConfig& config) {
    return to_json(config).dump(2) + "\n";
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open scenario file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw SchemaError("scenario '" + path + "' is not valid JSON: " + ex.what());
    }
    try {
        return scenario_from_json(j);
    } catch (const json::exception& ex) {
        throw SchemaError("scenario '" + path + "' is malformed: " + ex.what());
    }
}

void save_scenario(const ScenarioConfig& config, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write scenario file: " + path);
    out << serialize_scenario(config);
}

} // namespace socsim
