#include "socsim/policy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace socsim {

using nlohmann::json;

std::string to_string(PolicyRole role) {
    switch (role) {
        case PolicyRole::SourceAgent: return "source_agent";
        case PolicyRole::CrowdAction: return "crowd_action";
        case PolicyRole::CrowdAttitude: return "crowd_attitude";
        case PolicyRole::EventParser: return "event_parser";
        case PolicyRole::RelevanceScorer: return "relevance_scorer";
        case PolicyRole::FallbackTemplates: return "fallback_templates";
        case PolicyRole::EngagementHint: return "engagement";
    }
    return "crowd_action";
}

PolicyRole policy_role_from_string(const std::string& name) {
    if (name == "source_agent") return PolicyRole::SourceAgent;
    if (name == "crowd_action") return PolicyRole::CrowdAction;
    if (name == "crowd_attitude") return PolicyRole::CrowdAttitude;
    if (name == "event_parser") return PolicyRole::EventParser;
    if (name == "relevance_scorer") return PolicyRole::RelevanceScorer;
    if (name == "fallback_templates") return PolicyRole::FallbackTemplates;
    if (name == "engagement") return PolicyRole::EngagementHint;
    throw SchemaError("unknown policy role: '" + name + "'");
}

// -- response -------------------------------------------------------------------

void PolicyResponse::validate(PolicyRole role) const {
    auto require_range = [](double value, double lo, double hi, const std::string& field) {
        if (!(value >= lo && value <= hi)) {
            std::ostringstream msg;
            msg << field << " " << value << " outside [" << lo << ", " << hi << "]";
            throw SchemaError(msg.str());
        }
    };

    switch (role) {
        case PolicyRole::SourceAgent:
            require_range(valence, -1.0, 1.0, "valence");
            if (intervention == InterventionKind::Inactive && valence != 0.0) {
                throw SchemaError("Inactive intervention must carry valence 0");
            }
            break;
        case PolicyRole::CrowdAction:
            if (action == ActionKind::SelectPartner) {
                if (!epsilon) throw SchemaError("SelectPartner response missing epsilon");
                require_range(*epsilon, 0.0, 1.0, "epsilon");
            }
            if (updated_opinion) require_range(*updated_opinion, -1.0, 1.0, "updated_opinion");
            break;
        case PolicyRole::CrowdAttitude:
            if (!updated_opinion) throw SchemaError("attitude response missing updated_opinion");
            require_range(*updated_opinion, -1.0, 1.0, "updated_opinion");
            break;
        case PolicyRole::EventParser:
            break;  // empty fields surface as MalformedParserOutput at the call site
        case PolicyRole::RelevanceScorer:
            if (!relevance) throw SchemaError("scorer response missing relevance");
            require_range(*relevance, 0.0, 1.0, "relevance");
            break;
        case PolicyRole::FallbackTemplates:
            for (const auto& tmpl : templates) {
                if (tmpl.name.empty()) throw SchemaError("fallback template with empty name");
                if (tmpl.population_size < 1) {
                    throw SchemaError("fallback template population_size must be >= 1");
                }
            }
            break;
        case PolicyRole::EngagementHint: {
            if (!engagement) throw SchemaError("engagement response missing engagement vector");
            const auto& e = *engagement;
            if (e.views < 0 || e.likes < 0 || e.comments < 0 || e.shares < 0) {
                throw SchemaError("engagement components must be non-negative");
            }
            break;
        }
    }
}

json PolicyResponse::to_json() const {
    json j = json::object();
    if (intervention != InterventionKind::Inactive) j["kind"] = to_string(intervention);
    if (valence != 0.0) j["valence"] = valence;
    if (!message.empty()) j["message"] = message;
    if (action != ActionKind::UpdateOpinion) j["action"] = to_string(action);
    if (epsilon) j["epsilon"] = *epsilon;
    if (!replies.empty()) {
        json list = json::array();
        for (const auto& reply : replies) {
            list.push_back(json{{"reply_content", reply.content},
                                {"reply_tone", to_string(reply.tone)},
                                {"target_agent_id", reply.to_agent}});
        }
        j["responses"] = std::move(list);
    }
    if (updated_opinion) j["updated_opinion"] = *updated_opinion;
    if (!update_reason.empty()) j["update_reason"] = update_reason;
    if (!cognitive_state.empty()) j["cognitive_state"] = cognitive_state;
    if (!domain.empty()) j["domain"] = domain;
    if (!country.empty()) j["country"] = country;
    if (relevance) j["relevance"] = *relevance;
    if (!templates.empty()) {
        json list = json::array();
        for (const auto& tmpl : templates) {
            list.push_back(json{{"description", tmpl.description},
                                {"name", tmpl.name},
                                {"population_size", tmpl.population_size}});
        }
        j["templates"] = std::move(list);
    }
    if (engagement) {
        j["engagement_vector"] = json{{"comments", engagement->comments},
                                      {"likes", engagement->likes},
                                      {"shares", engagement->shares},
                                      {"views", engagement->views}};
    }
    if (!reasoning_trace.empty()) j["reasoning_trace"] = reasoning_trace;
    return j;
}

PolicyResponse PolicyResponse::from_json(const json& j) {
    PolicyResponse response;
    if (j.contains("kind")) {
        response.intervention = intervention_kind_from_string(j.at("kind").get<std::string>());
    } else if (j.contains("selected_intervention")) {
        response.intervention =
            intervention_kind_from_string(j.at("selected_intervention").get<std::string>());
    }
    response.valence = j.value("valence", 0.0);
    response.message = j.value("message", "");
    if (j.contains("action")) {
        response.action = action_kind_from_string(j.at("action").get<std::string>());
    } else if (j.contains("selected_action")) {
        response.action = action_kind_from_string(j.at("selected_action").get<std::string>());
    }
    if (j.contains("epsilon")) response.epsilon = j.at("epsilon").get<double>();
    for (const json& r : j.value("responses", json::array())) {
        DiscussionReply reply;
        reply.to_agent = r.value("target_agent_id", "");
        reply.content = r.value("reply_content", "");
        reply.tone = reply_tone_from_string(r.value("reply_tone", "neutral"));
        response.replies.push_back(std::move(reply));
    }
    if (j.contains("updated_opinion")) {
        response.updated_opinion = j.at("updated_opinion").get<double>();
    }
    response.update_reason = j.value("update_reason", "");
    response.cognitive_state = j.value("cognitive_state", "");
    response.domain = j.value("domain", "");
    response.country = j.value("country", "");
    if (j.contains("relevance")) response.relevance = j.at("relevance").get<double>();
    for (const json& t : j.value("templates", json::array())) {
        GroupTemplate tmpl;
        tmpl.name = t.value("name", "");
        tmpl.description = t.value("description", "");
        tmpl.population_size = t.value("population_size", std::int64_t{10000});
        response.templates.push_back(std::move(tmpl));
    }
    if (j.contains("engagement_vector")) {
        const json& e = j.at("engagement_vector");
        EngagementVector vec;
        vec.views = e.value("views", 0.0);
        vec.likes = e.value("likes", 0.0);
        vec.comments = e.value("comments", 0.0);
        vec.shares = e.value("shares", 0.0);
        response.engagement = vec;
    }
    response.reasoning_trace = j.value("reasoning_trace", "");
    return response;
}

PolicyResponse neutral_response(PolicyRole role, const PolicyRequest& request) {
    PolicyResponse response;
    switch (role) {
        case PolicyRole::SourceAgent:
            response.intervention = InterventionKind::Inactive;
            break;
        case PolicyRole::CrowdAction:
            response.action = ActionKind::UpdateOpinion;
            break;
        case PolicyRole::CrowdAttitude:
            response.updated_opinion = request.context.value("attitude", 0.0);
            response.update_reason = "self_reflection";
            break;
        case PolicyRole::EventParser:
            break;
        case PolicyRole::RelevanceScorer:
            response.relevance = 0.5;
            break;
        case PolicyRole::FallbackTemplates:
            break;
        case PolicyRole::EngagementHint:
            response.engagement = EngagementVector{};
            break;
    }
    return response;
}

// -- scripted -------------------------------------------------------------------

ScriptedProvider::ScriptedProvider(std::vector<Entry> schedule) {
    for (auto& entry : schedule) {
        entry.response.validate(entry.role);
        schedule_[Key{entry.role, entry.t, entry.agent_id}] = std::move(entry.response);
    }
}

std::shared_ptr<ScriptedProvider> ScriptedProvider::from_config(const json& entries) {
    std::vector<Entry> schedule;
    for (const json& e : entries) {
        Entry entry;
        entry.role = policy_role_from_string(e.value("role", "crowd_action"));
        entry.t = e.value("t", -1);
        entry.agent_id = e.value("agent_id", "*");
        entry.response = PolicyResponse::from_json(e.value("response", json::object()));
        schedule.push_back(std::move(entry));
    }
    return std::make_shared<ScriptedProvider>(std::move(schedule));
}

PolicyResponse ScriptedProvider::decide(const PolicyRequest& request) {
    calls_.fetch_add(1);
    const Key keys[] = {
        Key{request.role, request.t, request.agent_id},
        Key{request.role, request.t, "*"},
        Key{request.role, -1, request.agent_id},
        Key{request.role, -1, "*"},
    };
    for (const auto& key : keys) {
        auto it = schedule_.find(key);
        if (it != schedule_.end()) return it->second;
    }
    return neutral_response(request.role, request);
}

// -- rule based -----------------------------------------------------------------

RuleBasedProvider::RuleBasedProvider() : RuleBasedProvider(Params{}) {}

RuleBasedProvider::RuleBasedProvider(Params params) : params_(params) {}

double signal_valence(const json& interventions, const json& replies, double prior_attitude) {
    double sum = 0.0;
    int count = 0;
    for (const json& entry : interventions) {
        sum += entry.value("valence", 0.0);
        ++count;
    }
    for (const json& reply : replies) {
        sum += tone_valence(reply_tone_from_string(reply.value("reply_tone", "neutral")));
        ++count;
    }
    return count == 0 ? prior_attitude : sum / count;
}

double token_jaccard(const std::string& a, const std::string& b) {
    auto tokenize = [](const std::string& text) {
        std::set<std::string> tokens;
        std::string current;
        for (char c : text) {
            if (std::isalnum(static_cast<unsigned char>(c))) {
                current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            } else if (!current.empty()) {
                tokens.insert(current);
                current.clear();
            }
        }
        if (!current.empty()) tokens.insert(current);
        return tokens;
    };
    const auto ta = tokenize(a);
    const auto tb = tokenize(b);
    if (ta.empty() && tb.empty()) return 0.0;
    std::size_t common = 0;
    for (const auto& token : ta) common += tb.count(token);
    const std::size_t total = ta.size() + tb.size() - common;
    return total == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(total);
}

PolicyResponse RuleBasedProvider::decide(const PolicyRequest& request) {
    switch (request.role) {
        case PolicyRole::SourceAgent: return decide_source(request);
        case PolicyRole::CrowdAction: return decide_action(request);
        case PolicyRole::CrowdAttitude: return decide_attitude(request);
        case PolicyRole::EventParser: {
            PolicyResponse response;
            response.domain = "General";
            response.country = "Global";
            return response;
        }
        case PolicyRole::RelevanceScorer: {
            PolicyResponse response;
            response.relevance = token_jaccard(request.context.value("candidate_text", ""),
                                               request.context.value("event_text", ""));
            return response;
        }
        case PolicyRole::FallbackTemplates: {
            PolicyResponse response;
            response.templates.push_back(GroupTemplate{
                "general public", "broad audience following the event", 10000});
            return response;
        }
        case PolicyRole::EngagementHint: return decide_engagement(request);
    }
    return neutral_response(request.role, request);
}

PolicyResponse RuleBasedProvider::decide_source(const PolicyRequest& request) const {
    const double visibility = request.context.value("visibility", 0.0);
    const double mean_attitude = request.context.value("mean_attitude", 0.0);
    PolicyResponse response;
    if (visibility < params_.visibility_threshold) {
        response.intervention = InterventionKind::Publicity;
        response.valence = 0.3;
        response.message = "raising event exposure";
    } else if (std::abs(mean_attitude) > params_.attitude_threshold) {
        response.intervention = InterventionKind::Response;
        // lean against the prevailing polarity
        response.valence = mean_attitude > 0 ? -0.5 : 0.5;
        response.message = "institutional feedback on public stance";
    } else {
        response.intervention = InterventionKind::Inactive;
    }
    return response;
}

PolicyResponse RuleBasedProvider::decide_action(const PolicyRequest& request) const {
    const int t = request.context.value("t", request.t);
    const double attitude = request.context.value("attitude", 0.0);
    PolicyResponse response;
    switch (((t % 3) + 3) % 3) {
        case 1:
            response.action = ActionKind::SelectPartner;
            // stronger stances narrow the interaction range
            response.epsilon = clamp_unit(1.0 - std::abs(attitude));
            break;
        case 2: {
            response.action = ActionKind::DiscussOpinion;
            for (const json& peer : request.context.value("neighbors", json::array())) {
                DiscussionReply reply;
                reply.to_agent = peer.value("agent_id", "");
                const double gap = std::abs(attitude - peer.value("attitude", 0.0));
                reply.tone = gap < 0.3   ? ReplyTone::Supportive
                             : gap > 0.7 ? ReplyTone::Opposing
                                         : ReplyTone::Neutral;
                std::ostringstream content;
                content << "day " << t << ": my stance is " << attitude;
                reply.content = content.str();
                response.replies.push_back(std::move(reply));
            }
            break;
        }
        default:
            response.action = ActionKind::UpdateOpinion;
            response.updated_opinion = attitude;
            response.update_reason = "self_reflection";
            break;
    }
    return response;
}

PolicyResponse RuleBasedProvider::decide_attitude(const PolicyRequest& request) const {
    const double attitude = request.context.value("attitude", 0.0);
    const double target = signal_valence(request.context.value("interventions", json::array()),
                                         request.context.value("replies", json::array()),
                                         attitude);
    PolicyResponse response;
    response.updated_opinion = clamp_attitude(attitude + params_.gain * (target - attitude));
    response.update_reason = "source_intervention";
    std::ostringstream state;
    state << "stance moved toward signal valence " << target;
    response.cognitive_state = state.str();
    return response;
}

PolicyResponse RuleBasedProvider::decide_engagement(const PolicyRequest& request) const {
    // mirrors the engine's deterministic mapping from the context fields
    const double population = request.context.value("population", 0.0);
    const double view_rate = request.context.value("view_rate", 0.005);
    const double multiplier = request.context.value("multiplier", 1.0);
    const double mean_attitude = request.context.value("mean_attitude", 0.0);
    const bool has_discussion = request.context.value("has_discussion", false);
    EngagementVector vec;
    vec.views = population * view_rate * multiplier;
    vec.likes = vec.views * request.context.value("like_rate", 0.1) * (mean_attitude + 1.0) / 2.0;
    vec.comments = vec.views * request.context.value("comment_rate", 0.05) *
                   (has_discussion ? 1.0 : 0.5);
    vec.shares = vec.views * request.context.value("share_rate", 0.02) * std::abs(mean_attitude);
    PolicyResponse response;
    response.engagement = vec;
    return response;
}

} // namespace socsim
