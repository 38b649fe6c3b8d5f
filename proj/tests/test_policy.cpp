#include <doctest.h>

#include "socsim/policy.hpp"
#include "test_support.hpp"

using namespace socsim;
using nlohmann::json;

namespace {

PolicyRequest make_request(PolicyRole role, int t, const std::string& agent,
                           json context = json::object()) {
    PolicyRequest request;
    request.role = role;
    request.t = t;
    request.agent_id = agent;
    request.context = std::move(context);
    return request;
}

} // namespace

TEST_CASE("scripted provider answers by lookup and defaults to neutral") {
    PolicyResponse publicity;
    publicity.intervention = InterventionKind::Publicity;
    publicity.valence = 0.4;
    ScriptedProvider provider({test::scripted_entry(PolicyRole::SourceAgent, 1, "gov",
                                                    publicity)});

    const auto hit = provider.decide(make_request(PolicyRole::SourceAgent, 1, "gov"));
    CHECK(hit.intervention == InterventionKind::Publicity);

    const auto miss = provider.decide(make_request(PolicyRole::SourceAgent, 2, "gov"));
    CHECK(miss.intervention == InterventionKind::Inactive);
    CHECK(miss.valence == 0.0);

    const auto crowd =
        provider.decide(make_request(PolicyRole::CrowdAction, 1, "students"));
    CHECK(crowd.action == ActionKind::UpdateOpinion);  // no-change default

    CHECK(provider.call_count() == 3);
}

TEST_CASE("scripted wildcards match any agent or timestep, exact entries win") {
    PolicyResponse any_agent;
    any_agent.updated_opinion = 0.5;
    PolicyResponse exact;
    exact.updated_opinion = -0.5;
    ScriptedProvider provider({
        test::scripted_entry(PolicyRole::CrowdAttitude, 1, "*", any_agent),
        test::scripted_entry(PolicyRole::CrowdAttitude, 1, "students", exact),
    });
    CHECK(*provider.decide(make_request(PolicyRole::CrowdAttitude, 1, "students"))
               .updated_opinion == -0.5);
    CHECK(*provider.decide(make_request(PolicyRole::CrowdAttitude, 1, "parents"))
               .updated_opinion == 0.5);
}

TEST_CASE("invalid scripted entries are rejected at construction") {
    PolicyResponse bad_opinion;
    bad_opinion.updated_opinion = 2.0;
    CHECK_THROWS_AS(ScriptedProvider({test::scripted_entry(PolicyRole::CrowdAttitude, 1, "g",
                                                           bad_opinion)}),
                    SchemaError);

    PolicyResponse bad_epsilon;
    bad_epsilon.action = ActionKind::SelectPartner;
    bad_epsilon.epsilon = 1.5;
    CHECK_THROWS_AS(ScriptedProvider({test::scripted_entry(PolicyRole::CrowdAction, 1, "g",
                                                           bad_epsilon)}),
                    SchemaError);

    PolicyResponse inactive_with_valence;
    inactive_with_valence.intervention = InterventionKind::Inactive;
    inactive_with_valence.valence = 0.3;
    CHECK_THROWS_AS(ScriptedProvider({test::scripted_entry(PolicyRole::SourceAgent, 1, "g",
                                                           inactive_with_valence)}),
                    SchemaError);
}

TEST_CASE("rule-based source policy follows its documented rule") {
    RuleBasedProvider provider;

    const auto low_visibility = provider.decide(
        make_request(PolicyRole::SourceAgent, 1, "gov", {{"visibility", 0.0},
                                                         {"mean_attitude", 0.0}}));
    CHECK(low_visibility.intervention == InterventionKind::Publicity);

    const auto polarized = provider.decide(
        make_request(PolicyRole::SourceAgent, 3, "gov", {{"visibility", 1.2},
                                                         {"mean_attitude", -0.7}}));
    CHECK(polarized.intervention == InterventionKind::Response);

    const auto calm = provider.decide(
        make_request(PolicyRole::SourceAgent, 3, "gov", {{"visibility", 1.2},
                                                         {"mean_attitude", 0.1}}));
    CHECK(calm.intervention == InterventionKind::Inactive);
    CHECK(calm.valence == 0.0);
}

TEST_CASE("rule-based crowd actions cycle by timestep") {
    RuleBasedProvider provider;
    json context{{"t", 1},
                 {"attitude", 0.4},
                 {"neighbors", json::array({json{{"agent_id", "peer"}, {"attitude", 0.5}}})}};

    context["t"] = 1;
    auto select = provider.decide(make_request(PolicyRole::CrowdAction, 1, "g", context));
    CHECK(select.action == ActionKind::SelectPartner);
    CHECK(*select.epsilon == doctest::Approx(0.6));  // 1 - |0.4|

    context["t"] = 2;
    auto discuss = provider.decide(make_request(PolicyRole::CrowdAction, 2, "g", context));
    CHECK(discuss.action == ActionKind::DiscussOpinion);
    REQUIRE(discuss.replies.size() == 1);
    CHECK(discuss.replies[0].to_agent == "peer");
    CHECK(discuss.replies[0].tone == ReplyTone::Supportive);  // |0.4-0.5| < 0.3

    context["t"] = 3;
    auto update = provider.decide(make_request(PolicyRole::CrowdAction, 3, "g", context));
    CHECK(update.action == ActionKind::UpdateOpinion);
    CHECK(*update.updated_opinion == doctest::Approx(0.4));
}

TEST_CASE("rule-based responses are pure") {
    RuleBasedProvider provider;
    const auto request = make_request(PolicyRole::CrowdAttitude, 4, "g",
                                      {{"attitude", 0.2},
                                       {"interventions", json::array({json{{"valence", 0.8}}})},
                                       {"replies", json::array()}});
    const auto first = provider.decide(request);
    const auto second = provider.decide(request);
    CHECK(first.to_json() == second.to_json());
    CHECK(*first.updated_opinion == doctest::Approx(0.2 + 0.5 * (0.8 - 0.2)));
}

TEST_CASE("rule-based engagement hints mirror the deterministic mapping") {
    RuleBasedProvider provider;
    const auto response = provider.decide(make_request(
        PolicyRole::EngagementHint, 2, "population",
        {{"population", 100000.0}, {"view_rate", 0.005}, {"multiplier", 1.5},
         {"mean_attitude", 0.5}, {"has_discussion", true}, {"like_rate", 0.1},
         {"comment_rate", 0.05}, {"share_rate", 0.02}}));
    REQUIRE(response.engagement.has_value());
    CHECK(response.engagement->views == doctest::Approx(750.0));
    CHECK(response.engagement->likes == doctest::Approx(750.0 * 0.1 * 0.75));
    CHECK(response.engagement->comments == doctest::Approx(750.0 * 0.05));
    CHECK(response.engagement->shares == doctest::Approx(750.0 * 0.02 * 0.5));
}

TEST_CASE("signal valence pools interventions and reply tones") {
    CHECK(signal_valence(json::array({json{{"valence", 1.0}}}), json::array(), 0.0) == 1.0);
    CHECK(signal_valence(json::array(), json::array(), 0.42) == 0.42);  // empty pool keeps prior
    const auto mixed = signal_valence(
        json::array({json{{"valence", 1.0}}}),
        json::array({json{{"reply_tone", "opposing"}}, json{{"reply_tone", "neutral"}}}), 0.0);
    CHECK(mixed == doctest::Approx(0.0));  // (1 - 1 + 0) / 3
}

TEST_CASE("token jaccard is a sane lexical overlap") {
    CHECK(token_jaccard("students on campus", "students on campus") == doctest::Approx(1.0));
    CHECK(token_jaccard("alpha beta", "gamma delta") == doctest::Approx(0.0));
    CHECK(token_jaccard("", "") == doctest::Approx(0.0));
    const double half = token_jaccard("spoiled meat report", "spoiled meat recall");
    CHECK(half == doctest::Approx(0.5));  // 2 shared of 4 distinct
}

TEST_CASE("neutral responses satisfy their role invariants") {
    for (PolicyRole role : {PolicyRole::SourceAgent, PolicyRole::CrowdAction,
                            PolicyRole::CrowdAttitude, PolicyRole::RelevanceScorer,
                            PolicyRole::FallbackTemplates, PolicyRole::EngagementHint}) {
        PolicyRequest request = make_request(role, 1, "g", {{"attitude", 0.25}});
        CHECK_NOTHROW(neutral_response(role, request).validate(role));
    }
}

TEST_CASE("policy response json round-trip keeps role fields") {
    PolicyResponse response;
    response.action = ActionKind::DiscussOpinion;
    DiscussionReply reply;
    reply.to_agent = "peers";
    reply.content = "agreed";
    reply.tone = ReplyTone::Supportive;
    response.replies.push_back(reply);
    response.reasoning_trace = "because";

    const auto parsed = PolicyResponse::from_json(response.to_json());
    CHECK(parsed.action == ActionKind::DiscussOpinion);
    REQUIRE(parsed.replies.size() == 1);
    CHECK(parsed.replies[0].to_agent == "peers");
    CHECK(parsed.replies[0].tone == ReplyTone::Supportive);
    CHECK(parsed.reasoning_trace == "because");
}
