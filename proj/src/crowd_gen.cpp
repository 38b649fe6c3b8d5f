#include "socsim/crowd_gen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "socsim/rng.hpp"

namespace socsim {

using nlohmann::json;

// -- graph -----------------------------------------------------------------------

std::size_t GroupGraph::add_node(std::size_t parent, GroupNode node) {
    if (parent >= nodes_.size()) {
        throw IndexOutOfRange("parent node " + std::to_string(parent) + " does not exist");
    }
    nodes_.push_back(std::move(node));
    const std::size_t id = nodes_.size() - 1;
    nodes_[parent].children.push_back(id);
    return id;
}

void GroupGraph::insert_branch(const std::string& country, const std::string& domain,
                               std::vector<GroupTemplate> templates) {
    std::size_t country_node = 0;
    bool found = false;
    for (std::size_t child : nodes_[root()].children) {
        if (nodes_[child].country == country && nodes_[child].domain.empty()) {
            country_node = child;
            found = true;
            break;
        }
    }
    if (!found) {
        country_node = add_node(root(), GroupNode{country, "", {}, {}});
    }
    for (std::size_t child : nodes_[country_node].children) {
        if (nodes_[child].country == country && nodes_[child].domain == domain) {
            nodes_[child].templates = std::move(templates);
            return;
        }
    }
    add_node(country_node, GroupNode{country, domain, std::move(templates), {}});
}

ValidationReport GroupGraph::validate() const {
    ValidationReport report;
    std::map<std::pair<std::string, std::string>, int> paths;
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
        const GroupNode& node = nodes_[id];
        if (id != root() && ++paths[{node.country, node.domain}] == 2) {
            report.push_back({"group_graph", "duplicate node path (" + node.country + ", " +
                                                 node.domain + ")"});
        }
        for (const auto& tmpl : node.templates) {
            if (tmpl.name.empty()) {
                report.push_back({"group_graph", "template with empty name under (" +
                                                     node.country + ", " + node.domain + ")"});
            }
        }
        for (std::size_t child : node.children) {
            if (child >= nodes_.size()) {
                report.push_back({"group_graph", "dangling child index"});
            }
        }
    }
    return report;
}

namespace {

json node_to_json(const GroupGraph& graph, std::size_t id) {
    const GroupNode& node = graph.node(id);
    json j = json::object();
    if (!node.country.empty()) j["country"] = node.country;
    if (!node.domain.empty()) j["domain"] = node.domain;
    if (!node.templates.empty()) {
        json templates = json::array();
        for (const auto& tmpl : node.templates) {
            templates.push_back(json{{"description", tmpl.description},
                                     {"name", tmpl.name},
                                     {"population_size", tmpl.population_size}});
        }
        j["templates"] = std::move(templates);
    }
    if (!node.children.empty()) {
        json children = json::array();
        for (std::size_t child : node.children) children.push_back(node_to_json(graph, child));
        j["children"] = std::move(children);
    }
    return j;
}

void node_from_json(GroupGraph& graph, std::size_t parent, const json& j) {
    GroupNode node;
    node.country = j.value("country", "");
    node.domain = j.value("domain", "");
    for (const json& t : j.value("templates", json::array())) {
        GroupTemplate tmpl;
        tmpl.name = t.value("name", "");
        tmpl.description = t.value("description", "");
        tmpl.population_size = t.value("population_size", std::int64_t{10000});
        node.templates.push_back(std::move(tmpl));
    }
    const std::size_t id = graph.add_node(parent, std::move(node));
    for (const json& child : j.value("children", json::array())) {
        node_from_json(graph, id, child);
    }
}

} // namespace

json GroupGraph::to_json() const {
    json root_children = json::array();
    for (std::size_t child : nodes_[root()].children) {
        root_children.push_back(node_to_json(*this, child));
    }
    return json{{"root", json{{"children", std::move(root_children)}}},
                {"schema_version", 1}};
}

GroupGraph GroupGraph::from_json(const json& j) {
    if (j.value("schema_version", 0) != 1) {
        throw SchemaError("group graph: unsupported schema_version");
    }
    GroupGraph graph;
    for (const json& child : j.value("root", json::object()).value("children", json::array())) {
        node_from_json(graph, graph.root(), child);
    }
    return graph;
}

GroupGraph GroupGraph::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open group graph: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw SchemaError("group graph '" + path + "' is not valid JSON: " + ex.what());
    }
    return from_json(j);
}

void GroupGraph::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write group graph: " + path);
    out << to_json().dump(2) << "\n";
}

std::vector<GroupTemplate> bfs_retrieve_templates(const GroupGraph& graph,
                                                  const std::string& domain,
                                                  const std::string& country) {
    std::deque<std::size_t> queue{graph.root()};
    while (!queue.empty()) {
        const std::size_t id = queue.front();
        queue.pop_front();
        const GroupNode& node = graph.node(id);
        if (id != graph.root() && node.country == country && node.domain == domain) {
            return node.templates;
        }
        for (std::size_t child : node.children) queue.push_back(child);
    }
    return {};
}

std::vector<GroupTemplate> fallback_templates(GroupGraph& graph, const Event& event,
                                              PolicyProvider& provider) {
    PolicyRequest request;
    request.role = PolicyRole::FallbackTemplates;
    request.agent_id = event.id;
    request.context["event_text"] = event.title + " " + event.content;
    request.context["domain"] = event.domain;
    request.context["country"] = event.country;

    PolicyResponse response = provider.decide(request);
    response.validate(PolicyRole::FallbackTemplates);
    if (!response.templates.empty()) {
        graph.insert_branch(event.country, event.domain, response.templates);
    }
    return response.templates;
}

std::pair<std::string, std::string> parse_event_attributes(const std::string& event_text,
                                                           PolicyProvider& parser) {
    if (event_text.empty()) {
        throw MalformedParserOutput("event text is empty");
    }
    PolicyRequest request;
    request.role = PolicyRole::EventParser;
    request.context["event_text"] = event_text;

    PolicyResponse response;
    try {
        response = parser.decide(request);
    } catch (const ProviderUnavailable& ex) {
        throw ParserUnavailable(ex.what());
    }
    if (response.domain.empty() || response.country.empty()) {
        throw MalformedParserOutput("parser response missing domain or country");
    }
    return {response.domain, response.country};
}

// -- encoder ---------------------------------------------------------------------

Eigen::VectorXd HashedBowEncoder::encode(const std::string& text) const {
    Eigen::VectorXd vec = Eigen::VectorXd::Zero(dim_);
    std::string token;
    auto flush = [&] {
        if (!token.empty()) {
            vec[static_cast<Eigen::Index>(fnv1a(token) % static_cast<std::uint64_t>(dim_))] +=
                1.0;
            token.clear();
        }
    };
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else {
            flush();
        }
    }
    flush();
    return vec;
}

// -- scoring and selection ----------------------------------------------------------

double relevance_score(const CandidateSubgroup& candidate, const Event& event,
                       const Encoder& encoder, PolicyProvider& scorer, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw Error("lambda " + std::to_string(lambda) + " outside [0, 1]");
    }
    const std::string candidate_text = candidate.name + " " + candidate.description;
    const std::string event_text = event.title + " " + event.content;
    const Eigen::VectorXd a = encoder.encode(candidate_text);
    const Eigen::VectorXd b = encoder.encode(event_text);
    if (a.size() != b.size()) {
        throw EncoderMismatch("embedding lengths differ: " + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()));
    }
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) {
        throw EncoderMismatch("all-zero embedding cannot be scored by cosine");
    }
    const double cosine = clamp_unit(a.dot(b) / (na * nb));

    PolicyRequest request;
    request.role = PolicyRole::RelevanceScorer;
    request.agent_id = candidate.name;
    request.context["candidate_text"] = candidate_text;
    request.context["candidate_name"] = candidate.name;
    request.context["event_text"] = event_text;
    PolicyResponse response = scorer.decide(request);
    if (!response.relevance || !(*response.relevance >= 0.0 && *response.relevance <= 1.0)) {
        throw ScorerOutOfRange("prompt relevance score missing or outside [0, 1]");
    }
    return lambda * cosine + (1.0 - lambda) * *response.relevance;
}

std::vector<CandidateSubgroup> select_subgroups(std::vector<CandidateSubgroup> candidates,
                                                int topk_k, double threshold) {
    if (candidates.empty()) {
        throw EmptyCandidatePool("cannot select subgroups from an empty candidate pool");
    }
    // deduplicate by name, keeping the best-scored entry
    std::map<std::string, CandidateSubgroup> by_name;
    for (auto& candidate : candidates) {
        auto it = by_name.find(candidate.name);
        if (it == by_name.end() || candidate.relevance > it->second.relevance) {
            by_name[candidate.name] = std::move(candidate);
        }
    }
    std::vector<CandidateSubgroup> pool;
    pool.reserve(by_name.size());
    for (auto& [name, candidate] : by_name) pool.push_back(std::move(candidate));

    // canonical order: descending score, lexicographic name on ties
    std::sort(pool.begin(), pool.end(), [](const CandidateSubgroup& a, const CandidateSubgroup& b) {
        if (a.relevance != b.relevance) return a.relevance > b.relevance;
        return a.name < b.name;
    });

    const std::size_t k = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(topk_k));
    std::vector<CandidateSubgroup> selected;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (i < k || pool[i].relevance >= threshold) selected.push_back(pool[i]);
    }
    return selected;
}

namespace {

std::string sanitize_id(const std::string& name) {
    std::string id;
    for (char c : name) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            id.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!id.empty() && id.back() != '_') {
            id.push_back('_');
        }
    }
    while (!id.empty() && id.back() == '_') id.pop_back();
    return id.empty() ? "agent" : id;
}

} // namespace

std::vector<CrowdAgentState> instantiate_crowd(const std::vector<CandidateSubgroup>& selected,
                                               const EngineParams& params, std::uint64_t seed) {
    std::vector<CrowdAgentState> agents;
    agents.reserve(selected.size());
    for (const auto& subgroup : selected) {
        CrowdAgentState agent;
        agent.agent_id = sanitize_id(subgroup.name);
        agent.group_name = subgroup.name;
        agent.population_size =
            subgroup.population_size.value_or(params.default_population_size);
        if (subgroup.initial_attitude) {
            agent.attitude = *subgroup.initial_attitude;
        } else {
            Rng rng(seed ^ fnv1a(subgroup.name));
            agent.attitude =
                rng.uniform(params.initial_attitude_low, params.initial_attitude_high);
        }
        agent.epsilon = params.initial_epsilon;
        std::ostringstream state;
        state << "group " << subgroup.name;
        if (!subgroup.description.empty()) state << ": " << subgroup.description;
        agent.cognitive_state = state.str();
        agents.push_back(std::move(agent));
    }
    return agents;
}

CrowdBuildResult build_crowd(const ScenarioConfig& config, GroupGraph& graph,
                             const Encoder& encoder, PolicyProvider& provider) {
    CrowdBuildResult result;
    Event event = config.event;

    result.domain = event.domain;
    result.country = event.country;
    if (result.domain.empty() || result.country.empty()) {
        std::tie(result.domain, result.country) =
            parse_event_attributes(event.title + " " + event.content, provider);
        event.domain = result.domain;
        event.country = result.country;
    }

    std::vector<GroupTemplate> templates =
        bfs_retrieve_templates(graph, result.domain, result.country);
    if (templates.empty()) {
        templates = fallback_templates(graph, event, provider);
    }
    if (templates.empty()) {
        throw EmptyCandidatePool("no population templates for (" + result.domain + ", " +
                                 result.country + ")");
    }

    const auto& pools =
        config.crowd.generate ? config.crowd.generate->candidates
                              : std::map<std::string, std::vector<SubgroupCandidateSpec>>{};

    for (const auto& tmpl : templates) {
        std::vector<CandidateSubgroup> candidates;
        auto it = pools.find(tmpl.name);
        if (it != pools.end() && !it->second.empty()) {
            for (const auto& spec : it->second) {
                CandidateSubgroup candidate;
                candidate.name = spec.name;
                candidate.parent_template = tmpl.name;
                candidate.description = spec.description;
                candidate.initial_attitude = spec.initial_attitude;
                candidate.population_size =
                    spec.population_size ? spec.population_size
                                         : std::optional<std::int64_t>(tmpl.population_size);
                candidates.push_back(std::move(candidate));
            }
        } else {
            // no fine-grained pool: specialize the template as itself
            CandidateSubgroup candidate;
            candidate.name = tmpl.name;
            candidate.parent_template = tmpl.name;
            candidate.description = tmpl.description;
            candidate.population_size = tmpl.population_size;
            candidates.push_back(std::move(candidate));
        }
        for (auto& candidate : candidates) {
            candidate.relevance =
                relevance_score(candidate, event, encoder, provider, config.engine.lambda);
        }
        auto selected = select_subgroups(std::move(candidates), config.engine.topk_k,
                                         config.engine.relevance_threshold);
        for (auto& subgroup : selected) {
            const bool seen = std::any_of(
                result.selected.begin(), result.selected.end(),
                [&](const CandidateSubgroup& other) { return other.name == subgroup.name; });
            if (!seen) result.selected.push_back(std::move(subgroup));
        }
    }

    result.agents = instantiate_crowd(result.selected, config.engine, config.rng_seed);
    return result;
}

} // namespace socsim
