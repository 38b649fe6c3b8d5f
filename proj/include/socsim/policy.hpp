#pragma once

#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "socsim/types.hpp"

namespace socsim {

/// Decision surfaces a provider can be asked to serve.
enum class PolicyRole {
    SourceAgent,        // pick an intervention (or stay inactive)
    CrowdAction,        // pick SelectPartner / DiscussOpinion / UpdateOpinion
    CrowdAttitude,      // reasoning-path attitude update
    EventParser,        // extract (domain, country) from event text
    RelevanceScorer,    // prompt-based relevance in [0, 1]
    FallbackTemplates,  // population templates when the graph has no branch
    EngagementHint,     // provider-driven engagement vector
};

std::string to_string(PolicyRole role);
PolicyRole policy_role_from_string(const std::string& name);

/// A single decision request. context carries the structured fields the
/// matching prompt template requires.
struct PolicyRequest {
    PolicyRole role = PolicyRole::CrowdAction;
    int t = 0;
    std::string agent_id;
    nlohmann::json context = nlohmann::json::object();
};

/// Role-dependent structured result. Numeric fields are range-checked before
/// anything reaches the engine; reasoning_trace is logged, never interpreted.
struct PolicyResponse {
    // SourceAgent
    InterventionKind intervention = InterventionKind::Inactive;
    double valence = 0.0;
    std::string message;

    // CrowdAction
    ActionKind action = ActionKind::UpdateOpinion;
    std::optional<double> epsilon;          // SelectPartner payload
    std::vector<DiscussionReply> replies;   // DiscussOpinion payload

    // CrowdAttitude / UpdateOpinion payload
    std::optional<double> updated_opinion;
    std::string update_reason;
    std::string cognitive_state;

    // EventParser
    std::string domain;
    std::string country;

    // RelevanceScorer
    std::optional<double> relevance;

    // FallbackTemplates
    std::vector<GroupTemplate> templates;

    // EngagementHint
    std::optional<EngagementVector> engagement;

    std::string reasoning_trace;

    /// Throws SchemaError when a field violates its declared range for the
    /// given role.
    void validate(PolicyRole role) const;

    nlohmann::json to_json() const;
    static PolicyResponse from_json(const nlohmann::json& j);
};

/// Pluggable decision backend. Implementations must be safe for concurrent
/// decide() calls.
class PolicyProvider {
public:
    virtual ~PolicyProvider() = default;
    virtual PolicyResponse decide(const PolicyRequest& request) = 0;
    virtual std::string name() const = 0;
};

using ProviderPtr = std::shared_ptr<PolicyProvider>;

/// Per-role neutral response: Inactive intervention, UpdateOpinion with no
/// change, empty parse, relevance 0.5, no templates, zero engagement.
PolicyResponse neutral_response(PolicyRole role, const PolicyRequest& request);

// -- scripted ------------------------------------------------------------------

/// Test double answering by lookup. Schedule keys are (role, t, agent_id);
/// "*" matches any agent and t = -1 matches any timestep (exact entries win).
/// Unmatched requests get the role's neutral default.
class ScriptedProvider : public PolicyProvider {
public:
    struct Entry {
        PolicyRole role = PolicyRole::CrowdAction;
        int t = -1;
        std::string agent_id = "*";
        PolicyResponse response;
    };

    explicit ScriptedProvider(std::vector<Entry> schedule);

    /// Builds from the scenario's "scripted" JSON array.
    static std::shared_ptr<ScriptedProvider> from_config(const nlohmann::json& entries);

    PolicyResponse decide(const PolicyRequest& request) override;
    std::string name() const override { return "scripted"; }

    /// Number of decide() calls served so far (matched or not).
    std::int64_t call_count() const { return calls_.load(); }

private:
    using Key = std::tuple<PolicyRole, int, std::string>;
    std::map<Key, PolicyResponse> schedule_;
    mutable std::atomic<std::int64_t> calls_{0};
};

// -- rule based ----------------------------------------------------------------

/// Deterministic stand-in for LLM reasoning. Source agents fire Publicity
/// when visibility is below rule_visibility_threshold, Response when
/// |mean attitude| exceeds rule_attitude_threshold, else stay inactive.
/// Crowd actions cycle by timestep: SelectPartner (t%3==1),
/// DiscussOpinion (t%3==2), UpdateOpinion (t%3==0). Attitudes move toward
/// the mean signal valence: A' = clamp(A + gain * (v - A)).
class RuleBasedProvider : public PolicyProvider {
public:
    struct Params {
        double gain = 0.5;
        double visibility_threshold = 0.75;
        double attitude_threshold = 0.6;
    };

    RuleBasedProvider();
    explicit RuleBasedProvider(Params params);

    PolicyResponse decide(const PolicyRequest& request) override;
    std::string name() const override { return "rules"; }

private:
    PolicyResponse decide_source(const PolicyRequest& request) const;
    PolicyResponse decide_action(const PolicyRequest& request) const;
    PolicyResponse decide_attitude(const PolicyRequest& request) const;
    PolicyResponse decide_engagement(const PolicyRequest& request) const;

    Params params_;
};

/// Mean valence of active interventions plus tone-weighted replies; empty
/// pool keeps the prior attitude. Shared by the rule-based provider and its
/// tests.
double signal_valence(const nlohmann::json& interventions, const nlohmann::json& replies,
                      double prior_attitude);

/// Deterministic lexical overlap in [0, 1] (token Jaccard), the rule-based
/// stand-in for prompt-scored relevance.
double token_jaccard(const std::string& a, const std::string& b);

} // namespace socsim
