#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "socsim/policy.hpp"
#include "socsim/scenario.hpp"
#include "socsim/types.hpp"

namespace socsim {

// -- hierarchical group graph ----------------------------------------------------

struct GroupNode {
    std::string country;
    std::string domain;
    std::vector<GroupTemplate> templates;
    std::vector<std::size_t> children;
};

/// Rooted tree of coarse population templates keyed by (country, domain).
/// Construction through add_node keeps it acyclic by design; validate()
/// reports duplicate paths and empty template names.
///
/// The graph is a value type: concurrent readers take a copy (the snapshot),
/// and fallback insertion mutates one owned instance which is then assigned
/// back (the commit). Scoring never mutates the graph.
class GroupGraph {
public:
    GroupGraph() : nodes_(1) {}

    std::size_t root() const { return 0; }
    std::size_t node_count() const { return nodes_.size(); }
    const GroupNode& node(std::size_t id) const { return nodes_.at(id); }

    std::size_t add_node(std::size_t parent, GroupNode node);

    /// Finds or creates country -> (country, domain) and stores the templates
    /// there, so later lookups are served by BFS instead of the provider.
    void insert_branch(const std::string& country, const std::string& domain,
                       std::vector<GroupTemplate> templates);

    ValidationReport validate() const;

    nlohmann::json to_json() const;
    static GroupGraph from_json(const nlohmann::json& j);
    static GroupGraph load(const std::string& path);
    void save(const std::string& path) const;

private:
    std::vector<GroupNode> nodes_;
};

/// Templates of the shallowest node matching (country, domain) in
/// breadth-first order from the root; empty when no branch exists.
std::vector<GroupTemplate> bfs_retrieve_templates(const GroupGraph& graph,
                                                  const std::string& domain,
                                                  const std::string& country);

/// Provider-backed branch retrieval for events the graph does not cover yet.
/// Non-empty results are inserted into the graph.
std::vector<GroupTemplate> fallback_templates(GroupGraph& graph, const Event& event,
                                              PolicyProvider& provider);

/// (domain, country) extraction from raw event text via the parser provider.
std::pair<std::string, std::string> parse_event_attributes(const std::string& event_text,
                                                           PolicyProvider& parser);

// -- fine-grained specialization ----------------------------------------------------

struct CandidateSubgroup {
    std::string name;
    std::string parent_template;
    std::string description;
    double relevance = 0.0;  // in [0, 1] once scored
    std::optional<double> initial_attitude;
    std::optional<std::int64_t> population_size;
};

/// Fixed-length text embedding.
class Encoder {
public:
    virtual ~Encoder() = default;
    virtual Eigen::VectorXd encode(const std::string& text) const = 0;
};

/// Deterministic hashed bag-of-words vectorizer; tests and the default
/// pipeline need no model weights.
class HashedBowEncoder : public Encoder {
public:
    explicit HashedBowEncoder(Eigen::Index dim = 64) : dim_(dim) {}
    Eigen::VectorXd encode(const std::string& text) const override;

private:
    Eigen::Index dim_;
};

/// Blended relevance: lambda * cos(phi(c), phi(e)) + (1 - lambda) * psi(c, e).
/// Cosine is clamped to [0, 1] so the blend stays in the scorer's range.
double relevance_score(const CandidateSubgroup& candidate, const Event& event,
                       const Encoder& encoder, PolicyProvider& scorer, double lambda);

/// TopK union threshold selection, deduplicated by name and returned in
/// canonical order (descending score, ties by ascending name).
std::vector<CandidateSubgroup> select_subgroups(std::vector<CandidateSubgroup> candidates,
                                                int topk_k, double threshold);

/// One crowd agent per selected subgroup. Initial attitudes come from the
/// config override or a seeded uniform draw on
/// [initial_attitude_low, initial_attitude_high]; pure in (selection,
/// defaults, seed).
std::vector<CrowdAgentState> instantiate_crowd(const std::vector<CandidateSubgroup>& selected,
                                               const EngineParams& params, std::uint64_t seed);

// -- pipeline -------------------------------------------------------------------------

struct CrowdBuildResult {
    std::vector<CrowdAgentState> agents;
    std::string domain;
    std::string country;
    std::vector<CandidateSubgroup> selected;
};

/// Full adaptive crowd construction: attribute parsing, coarse BFS retrieval
/// (with provider fallback), per-template candidate scoring, TopK-union
/// selection, and instantiation.
CrowdBuildResult build_crowd(const ScenarioConfig& config, GroupGraph& graph,
                             const Encoder& encoder, PolicyProvider& provider);

} // namespace socsim
