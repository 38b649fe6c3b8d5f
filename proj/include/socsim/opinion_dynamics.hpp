#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "socsim/policy.hpp"
#include "socsim/types.hpp"

namespace socsim {

/// Opinions in the normalized [0, 1] space the bounded-confidence kernel
/// operates on (attitudes map through x = (A + 1) / 2).
using OpinionVector = Eigen::VectorXd;

/// Symmetric boolean relation over agent indices. Self-loops are never
/// stored; self-inclusion is handled by the update rule.
class Adjacency {
public:
    explicit Adjacency(Eigen::Index n)
        : edges_(Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false)) {}

    static Adjacency fully_connected(Eigen::Index n) {
        Adjacency adj(n);
        adj.edges_.setConstant(true);
        adj.edges_.diagonal().setConstant(false);
        return adj;
    }

    Eigen::Index size() const { return edges_.rows(); }

    bool operator()(Eigen::Index i, Eigen::Index j) const {
        return i != j && edges_(i, j);
    }

    void set(Eigen::Index i, Eigen::Index j, bool connected = true) {
        if (i == j) return;
        edges_(i, j) = connected;
        edges_(j, i) = connected;
    }

private:
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> edges_;
};

/// Adaptive neighborhood N_eps(i). eps = 0 is full self-isolation ({i});
/// eps = 1 includes every agent; in between, {i} plus connected agents whose
/// opinion differs by at most eps. Indices are returned in ascending order.
std::vector<Eigen::Index> epsilon_neighborhood(Eigen::Index i, const OpinionVector& opinions,
                                               const Adjacency& adjacency, double epsilon);

/// One synchronous bounded-confidence step: every component becomes the mean
/// opinion over its eps-neighborhood, all agents reading the same snapshot.
OpinionVector dynamics_step(const OpinionVector& opinions, const Adjacency& adjacency,
                            double epsilon);

/// Piecewise attitude update. When the discussion or intervention signal is
/// non-empty the reasoning path decides (policy response, clamped to
/// [-1, 1]); otherwise the attitude is the mean of the neighborhood
/// attitudes. When the reasoning path fires, the full policy response is
/// copied to response_out so callers can persist the cognitive state and
/// reasoning trace.
double hybrid_attitude_update(const CrowdAgentState& agent, const DiscussionSignal& discussion,
                              const InterventionVector& interventions,
                              const std::vector<double>& neighborhood_attitudes,
                              PolicyProvider& policy, int t = 0,
                              PolicyResponse* response_out = nullptr);

// -- evolution modes -----------------------------------------------------------

enum class EvolutionMode {
    Polarization,
    Consensus,
    Reinforcement,
    Attenuation,
};

std::string to_string(EvolutionMode mode);

// Classification thresholds. The mode taxonomy is qualitative; these
// quantitative boundaries are fixed here and documented in the formats guide.
inline constexpr double kConsensusStd = 0.15;
inline constexpr double kDriftThreshold = 0.1;
inline constexpr double kClusterFraction = 0.25;
inline constexpr double kClusterMagnitude = 0.15;

/// Classifies a run's attitude series (rows = timesteps, cols = agents).
/// Priority on ties: Polarization > Consensus > Reinforcement > Attenuation.
/// Throws SeriesTooShort for fewer than two rows.
EvolutionMode classify_evolution(const Eigen::MatrixXd& attitude_series);

} // namespace socsim
