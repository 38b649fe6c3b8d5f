#include "socsim/opinion_dynamics.hpp"

#include <cmath>
#include <numeric>

namespace socsim {

using nlohmann::json;

std::vector<Eigen::Index> epsilon_neighborhood(Eigen::Index i, const OpinionVector& opinions,
                                               const Adjacency& adjacency, double epsilon) {
    const Eigen::Index n = opinions.size();
    if (i < 0 || i >= n) {
        throw IndexOutOfRange("agent index " + std::to_string(i) + " outside 0.." +
                              std::to_string(n - 1));
    }
    if (adjacency.size() != n) {
        throw IndexOutOfRange("adjacency size does not match opinion vector");
    }
    if (epsilon <= 0.0) {
        return {i};  // fully self-isolated
    }
    if (epsilon >= 1.0) {
        std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
        std::iota(all.begin(), all.end(), Eigen::Index{0});
        return all;
    }
    std::vector<Eigen::Index> neighborhood;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) {
            neighborhood.push_back(j);  // self is always included
        } else if (adjacency(i, j) && std::abs(opinions[i] - opinions[j]) <= epsilon) {
            neighborhood.push_back(j);
        }
    }
    return neighborhood;
}

OpinionVector dynamics_step(const OpinionVector& opinions, const Adjacency& adjacency,
                            double epsilon) {
    if (epsilon <= 0.0) {
        return opinions;  // identity: every agent keeps its own opinion
    }
    const Eigen::Index n = opinions.size();
    if (epsilon >= 1.0) {
        return OpinionVector::Constant(n, opinions.mean());
    }
    OpinionVector next(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto neighborhood = epsilon_neighborhood(i, opinions, adjacency, epsilon);
        double sum = 0.0;
        for (Eigen::Index j : neighborhood) sum += opinions[j];
        next[i] = sum / static_cast<double>(neighborhood.size());
    }
    return next;
}

double hybrid_attitude_update(const CrowdAgentState& agent, const DiscussionSignal& discussion,
                              const InterventionVector& interventions,
                              const std::vector<double>& neighborhood_attitudes,
                              PolicyProvider& policy, int t,
                              PolicyResponse* response_out) {
    const bool reasoning_path = !discussion.empty() || any_active(interventions);
    if (!reasoning_path) {
        if (neighborhood_attitudes.empty()) {
            throw Error("hybrid update with empty signals requires a non-empty neighborhood");
        }
        double sum = 0.0;
        for (double a : neighborhood_attitudes) sum += a;
        return sum / static_cast<double>(neighborhood_attitudes.size());
    }

    PolicyRequest request;
    request.role = PolicyRole::CrowdAttitude;
    request.t = t;
    request.agent_id = agent.agent_id;
    request.context["t"] = t;
    request.context["attitude"] = agent.attitude;
    request.context["memory_trace"] = agent.memory_trace;
    json active = json::array();
    for (const auto& entry : interventions) {
        if (!entry.active()) continue;
        active.push_back(json{{"kind", to_string(entry.kind)},
                              {"message", entry.message},
                              {"source_id", entry.source_id},
                              {"valence", entry.valence}});
    }
    request.context["interventions"] = std::move(active);
    json replies = json::array();
    for (const auto& reply : discussion) {
        if (reply.to_agent != agent.agent_id) continue;
        replies.push_back(json{{"from_agent", reply.from_agent},
                               {"reply_content", reply.content},
                               {"reply_tone", to_string(reply.tone)}});
    }
    request.context["replies"] = std::move(replies);
    request.context["discussion_size"] = discussion.size();

    PolicyResponse response = policy.decide(request);
    response.validate(PolicyRole::CrowdAttitude);
    if (response_out) *response_out = response;
    return clamp_attitude(*response.updated_opinion);
}

std::string to_string(EvolutionMode mode) {
    switch (mode) {
        case EvolutionMode::Polarization: return "Polarization";
        case EvolutionMode::Consensus: return "Consensus";
        case EvolutionMode::Reinforcement: return "Reinforcement";
        case EvolutionMode::Attenuation: return "Attenuation";
    }
    return "Attenuation";
}

namespace {

double row_std(const Eigen::RowVectorXd& row) {
    const double mean = row.mean();
    return std::sqrt((row.array() - mean).square().mean());
}

} // namespace

EvolutionMode classify_evolution(const Eigen::MatrixXd& attitude_series) {
    if (attitude_series.rows() < 2) {
        throw SeriesTooShort("attitude series needs at least 2 timesteps, got " +
                             std::to_string(attitude_series.rows()));
    }
    const Eigen::RowVectorXd initial = attitude_series.row(0);
    const Eigen::RowVectorXd final_row = attitude_series.row(attitude_series.rows() - 1);
    const Eigen::Index n = attitude_series.cols();

    // Polarization: two sign-opposed clusters, each holding at least a
    // quarter of the agents, separated from neutral by the magnitude floor.
    const auto positive = (final_row.array() >= kClusterMagnitude).count();
    const auto negative = (final_row.array() <= -kClusterMagnitude).count();
    if (4 * positive >= n && 4 * negative >= n) {
        return EvolutionMode::Polarization;
    }

    const double initial_std = row_std(initial);
    const double final_std = row_std(final_row);
    if (final_std < kConsensusStd && final_std < initial_std) {
        return EvolutionMode::Consensus;
    }

    const double initial_magnitude = initial.array().abs().mean();
    const double final_magnitude = final_row.array().abs().mean();
    const double drift = final_magnitude - initial_magnitude;
    const bool sign_flip =
        ((initial.array() > 0.0 && final_row.array() < 0.0) ||
         (initial.array() < 0.0 && final_row.array() > 0.0))
            .any();
    if (drift >= kDriftThreshold && !sign_flip) {
        return EvolutionMode::Reinforcement;
    }
    if (drift <= -kDriftThreshold) {
        return EvolutionMode::Attenuation;
    }
    // weak drift: fall back to the drift direction
    return drift >= 0.0 ? EvolutionMode::Reinforcement : EvolutionMode::Attenuation;
}

} // namespace socsim
