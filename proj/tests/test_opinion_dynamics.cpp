#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "socsim/opinion_dynamics.hpp"
#include "socsim/rng.hpp"
#include "test_support.hpp"

using namespace socsim;

namespace {

OpinionVector make_opinions(std::initializer_list<double> values) {
    OpinionVector x(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) x[i++] = v;
    return x;
}

/// Straight-from-the-definition oracle used to cross-check dynamics_step.
OpinionVector step_oracle(const OpinionVector& x, const Adjacency& adj, double eps) {
    const Eigen::Index n = x.size();
    OpinionVector next(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<Eigen::Index> nbhd;
        if (eps <= 0.0) {
            nbhd = {i};
        } else if (eps >= 1.0) {
            for (Eigen::Index j = 0; j < n; ++j) nbhd.push_back(j);
        } else {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i || (adj(i, j) && std::abs(x[i] - x[j]) <= eps)) nbhd.push_back(j);
            }
        }
        double sum = 0.0;
        for (Eigen::Index j : nbhd) sum += x[j];
        next[i] = sum / static_cast<double>(nbhd.size());
    }
    return next;
}

} // namespace

TEST_CASE("epsilon neighborhood limiting cases") {
    const auto x = make_opinions({0.2, 0.5, 0.9});
    const auto adj = Adjacency::fully_connected(3);

    CHECK(epsilon_neighborhood(0, x, adj, 1.0) == std::vector<Eigen::Index>{0, 1, 2});
    CHECK(epsilon_neighborhood(0, x, adj, 0.0) == std::vector<Eigen::Index>{0});
    CHECK(epsilon_neighborhood(2, x, adj, 0.0) == std::vector<Eigen::Index>{2});
}

TEST_CASE("epsilon neighborhood applies the bounded-confidence threshold") {
    // derived by enumerating all pairwise |x_i - x_j|:
    // |0.1-0.3| = 0.2 <= 0.25, |0.1-0.8| = 0.7 > 0.25
    const auto x = make_opinions({0.1, 0.3, 0.8});
    const auto adj = Adjacency::fully_connected(3);
    CHECK(epsilon_neighborhood(0, x, adj, 0.25) == std::vector<Eigen::Index>{0, 1});
    CHECK(epsilon_neighborhood(1, x, adj, 0.25) == std::vector<Eigen::Index>{0, 1});
    CHECK(epsilon_neighborhood(2, x, adj, 0.25) == std::vector<Eigen::Index>{2});
}

TEST_CASE("epsilon neighborhood rejects bad indices") {
    const auto x = make_opinions({0.1, 0.9});
    const auto adj = Adjacency::fully_connected(2);
    CHECK_THROWS_AS(epsilon_neighborhood(5, x, adj, 0.5), IndexOutOfRange);
    CHECK_THROWS_AS(epsilon_neighborhood(-1, x, adj, 0.5), IndexOutOfRange);
}

TEST_CASE("dynamics step limiting cases") {
    const auto adj3 = Adjacency::fully_connected(3);

    const auto uniform = dynamics_step(make_opinions({0.0, 0.5, 1.0}), adj3, 1.0);
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(uniform[i] == doctest::Approx(0.5).epsilon(1e-12));

    const auto x = make_opinions({0.3, 0.7, 0.1});
    const auto frozen = dynamics_step(x, adj3, 0.0);
    CHECK(frozen == x);  // exact identity
}

TEST_CASE("dynamics step reproduces the hand-evaluated bounded-confidence example") {
    // each neighborhood evaluated by hand: {0,1} and {2,3} cluster
    const auto adj = Adjacency::fully_connected(4);
    const auto next = dynamics_step(make_opinions({0.1, 0.2, 0.8, 0.9}), adj, 0.3);
    CHECK(next[0] == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(next[1] == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(next[2] == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(next[3] == doctest::Approx(0.85).epsilon(1e-12));
}

TEST_CASE("dynamics step properties over random instances") {
    Rng rng(2024);

    SUBCASE("epsilon 0 is the identity and epsilon 1 the global mean") {
        for (int round = 0; round < 200; ++round) {
            const auto n = static_cast<Eigen::Index>(2 + rng.next_u64() % 11);
            OpinionVector x(n);
            for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.next_double();
            const auto adj = Adjacency::fully_connected(n);

            CHECK(dynamics_step(x, adj, 0.0) == x);
            const double mean = x.mean();
            const auto consensus = dynamics_step(x, adj, 1.0);
            for (Eigen::Index i = 0; i < n; ++i) {
                CHECK(std::abs(consensus[i] - mean) <= 1e-12);
            }
        }
    }

    SUBCASE("outputs stay inside the convex hull of the input") {
        for (int round = 0; round < 100; ++round) {
            const auto n = static_cast<Eigen::Index>(2 + rng.next_u64() % 8);
            OpinionVector x(n);
            for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.next_double();
            const auto next = dynamics_step(x, Adjacency::fully_connected(n), rng.next_double());
            CHECK(next.minCoeff() >= x.minCoeff() - 1e-15);
            CHECK(next.maxCoeff() <= x.maxCoeff() + 1e-15);
        }
    }

    SUBCASE("epsilon 1 update is permutation-equivariant") {
        OpinionVector x(5);
        for (Eigen::Index i = 0; i < 5; ++i) x[i] = rng.next_double();
        const auto base = dynamics_step(x, Adjacency::fully_connected(5), 1.0);
        OpinionVector permuted(5);
        const Eigen::Index perm[5] = {3, 0, 4, 1, 2};
        for (Eigen::Index i = 0; i < 5; ++i) permuted[i] = x[perm[i]];
        const auto permuted_step = dynamics_step(permuted, Adjacency::fully_connected(5), 1.0);
        for (Eigen::Index i = 0; i < 5; ++i) {
            CHECK(permuted_step[i] == doctest::Approx(base[perm[i]]).epsilon(1e-12));
        }
    }

    SUBCASE("matches the definition oracle on 4-agent instances") {
        for (int round = 0; round < 200; ++round) {
            OpinionVector x(4);
            for (Eigen::Index i = 0; i < 4; ++i) x[i] = rng.next_double();
            Adjacency adj(4);
            for (Eigen::Index i = 0; i < 4; ++i) {
                for (Eigen::Index j = i + 1; j < 4; ++j) {
                    adj.set(i, j, rng.next_double() < 0.7);
                }
            }
            const double eps = rng.next_double();
            const auto expected = step_oracle(x, adj, eps);
            const auto actual = dynamics_step(x, adj, eps);
            for (Eigen::Index i = 0; i < 4; ++i) {
                CHECK(actual[i] == doctest::Approx(expected[i]).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("hybrid update takes the neighborhood mean when both signals are empty") {
    CrowdAgentState agent;
    agent.agent_id = "g";
    agent.attitude = 0.0;
    test::FailingProvider policy;  // must never be consulted on this branch

    const double result = hybrid_attitude_update(agent, {}, {}, {0.2, 0.4}, policy);
    CHECK(result == doctest::Approx(0.3).epsilon(1e-12));

    Rng rng(99);
    for (int round = 0; round < 50; ++round) {
        std::vector<double> attitudes;
        double sum = 0.0;
        const int count = 1 + static_cast<int>(rng.next_u64() % 6);
        for (int i = 0; i < count; ++i) {
            attitudes.push_back(rng.uniform(-1.0, 1.0));
            sum += attitudes.back();
        }
        const double mean = sum / count;
        CHECK(std::abs(hybrid_attitude_update(agent, {}, {}, attitudes, policy) - mean) <= 1e-12);
    }

    InterventionVector inactive(2);
    inactive[0].source_id = "a";
    inactive[1].source_id = "b";
    CHECK(hybrid_attitude_update(agent, {}, inactive, {0.5}, policy) ==
          doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(hybrid_attitude_update(agent, {}, {}, {}, policy), Error);
}

TEST_CASE("hybrid update routes through the policy when a signal is present") {
    CrowdAgentState agent;
    agent.agent_id = "g";
    agent.attitude = 0.0;

    InterventionVector interventions(1);
    interventions[0].source_id = "gov";
    interventions[0].kind = InterventionKind::Publicity;
    interventions[0].valence = 1.0;

    SUBCASE("scripted policy echoes its configured attitude") {
        PolicyResponse response;
        response.updated_opinion = 0.9;
        ScriptedProvider policy(
            {test::scripted_entry(PolicyRole::CrowdAttitude, -1, "g", response)});
        CHECK(hybrid_attitude_update(agent, {}, interventions, {0.0}, policy) ==
              doctest::Approx(0.9));
    }

    SUBCASE("rule-based policy moves halfway toward the signal valence") {
        RuleBasedProvider policy;  // gain 0.5
        CHECK(hybrid_attitude_update(agent, {}, interventions, {0.0}, policy) ==
              doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("discussion alone also fires the reasoning path") {
        DiscussionSignal discussion(1);
        discussion[0].from_agent = "peer";
        discussion[0].to_agent = "g";
        discussion[0].tone = ReplyTone::Opposing;
        RuleBasedProvider policy;
        // target valence -1, gain 0.5
        CHECK(hybrid_attitude_update(agent, discussion, {}, {0.0}, policy) ==
              doctest::Approx(-0.5).epsilon(1e-12));
    }

    SUBCASE("policy errors propagate") {
        test::FailingProvider policy;
        CHECK_THROWS_AS(hybrid_attitude_update(agent, {}, interventions, {0.0}, policy),
                        ProviderUnavailable);
    }
}

TEST_CASE("evolution classification") {
    SUBCASE("convergence to a shared stance is consensus") {
        Eigen::MatrixXd series(3, 4);
        series.row(0) << -0.5, -0.2, 0.2, 0.5;
        series.row(1) << 0.2, 0.25, 0.3, 0.35;
        series.row(2) << 0.79, 0.8, 0.8, 0.81;
        CHECK(classify_evolution(series) == EvolutionMode::Consensus);
    }
    SUBCASE("sign-opposed halves are polarization") {
        Eigen::MatrixXd series(2, 4);
        series.row(0) << 0.1, 0.05, -0.05, -0.1;
        series.row(1) << 0.9, 0.9, -0.9, -0.9;
        CHECK(classify_evolution(series) == EvolutionMode::Polarization);
    }
    SUBCASE("same-sign weakening is attenuation") {
        Eigen::MatrixXd series(2, 3);
        series.row(0) << 0.6, 0.6, 0.6;
        series.row(1) << 0.2, 0.2, 0.2;
        CHECK(classify_evolution(series) == EvolutionMode::Attenuation);
    }
    SUBCASE("same-sign intensification is reinforcement") {
        Eigen::MatrixXd series(2, 4);
        series.row(0) << 0.1, 0.3, 0.5, 0.7;
        series.row(1) << 0.4, 0.6, 0.8, 0.95;
        CHECK(classify_evolution(series) == EvolutionMode::Reinforcement);
    }
    SUBCASE("polarization outranks consensus on ties") {
        // tight per-cluster spread, but sign-opposed clusters
        Eigen::MatrixXd series(2, 4);
        series.row(0) << 0.8, 0.8, -0.8, -0.8;
        series.row(1) << 0.2, 0.2, -0.2, -0.2;
        CHECK(classify_evolution(series) == EvolutionMode::Polarization);
    }
    SUBCASE("short series are rejected") {
        Eigen::MatrixXd series(1, 4);
        series.row(0) << 0.1, 0.2, 0.3, 0.4;
        CHECK_THROWS_AS(classify_evolution(series), SeriesTooShort);
    }
}
