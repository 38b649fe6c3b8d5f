#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "socsim/errors.hpp"

namespace socsim {

// -- engagement ----------------------------------------------------------------

/// Per-timestep platform response: (views, likes, comments, shares).
struct EngagementVector {
    double views = 0.0;
    double likes = 0.0;
    double comments = 0.0;
    double shares = 0.0;

    Eigen::Vector4d as_vector() const { return {views, likes, comments, shares}; }

    bool operator==(const EngagementVector&) const = default;
};

// -- interventions ---------------------------------------------------------------

/// The five source-side intervention types plus the explicit "no action" value.
enum class InterventionKind {
    Prohibition,
    Refutation,
    Publicity,
    Response,
    Announcement,
    Inactive,
};

std::string to_string(InterventionKind kind);
InterventionKind intervention_kind_from_string(const std::string& name);

/// One source agent's action at a timestep. valence is 0 whenever kind is
/// Inactive.
struct Intervention {
    std::string source_id;
    InterventionKind kind = InterventionKind::Inactive;
    double valence = 0.0;
    std::string message;

    bool active() const { return kind != InterventionKind::Inactive; }
};

/// One entry per registered source agent for a single timestep.
using InterventionVector = std::vector<Intervention>;

bool any_active(const InterventionVector& interventions);

/// Product of the visibility multipliers of all active interventions.
/// Simultaneous interventions compose multiplicatively.
double visibility_multiplier(const InterventionVector& interventions,
                             const std::map<InterventionKind, double>& multipliers);

// -- crowd actions and discussion -----------------------------------------------

enum class ActionKind {
    SelectPartner,
    DiscussOpinion,
    UpdateOpinion,
};

std::string to_string(ActionKind action);
ActionKind action_kind_from_string(const std::string& name);

enum class ReplyTone {
    Supportive,
    Neutral,
    Opposing,
};

std::string to_string(ReplyTone tone);
ReplyTone reply_tone_from_string(const std::string& name);

/// Numeric weight used by the rule-based attitude update: supportive +1,
/// neutral 0, opposing -1.
double tone_valence(ReplyTone tone);

struct DiscussionReply {
    std::string from_agent;
    std::string to_agent;
    std::string content;
    ReplyTone tone = ReplyTone::Neutral;
};

/// The full set of peer replies exchanged in one timestep; empty means no
/// discussion took place.
using DiscussionSignal = std::vector<DiscussionReply>;

// -- agents -----------------------------------------------------------------------

/// Group-level crowd agent: a population cluster with a shared attitude,
/// memory log, and interaction openness epsilon.
struct CrowdAgentState {
    std::string agent_id;
    std::string group_name;
    std::int64_t population_size = 1;
    std::string cognitive_state;
    std::vector<std::string> memory_trace;  // oldest first, bounded by the memory cap
    double attitude = 0.0;                  // in [-1, 1]
    double epsilon = 0.5;                   // in [0, 1]
    ActionKind last_action = ActionKind::UpdateOpinion;
};

// -- population aggregate -----------------------------------------------------------

/// Number of equal-width attitude histogram bins over [-1, 1].
inline constexpr int kAttitudeHistogramBins = 8;

/// Global summary of the crowd refreshed once per timestep.
struct PopulationSignal {
    double mean_attitude = 0.0;  // population-size weighted
    std::vector<std::int64_t> attitude_histogram =
        std::vector<std::int64_t>(kAttitudeHistogramBins, 0);
    std::int64_t total_active_population = 0;
    std::map<ActionKind, std::int64_t> action_counts;
};

/// Bin index of an attitude in the fixed [-1, 1] histogram.
int attitude_bin(double attitude);

// -- population templates ------------------------------------------------------------

/// Coarse population placeholder retrieved from the group graph (or a
/// fallback provider) before fine-grained specialization.
struct GroupTemplate {
    std::string name;
    std::string description;
    std::int64_t population_size = 10000;
};

// -- event ---------------------------------------------------------------------------

/// The simulated social event; trajectory grows one engagement vector per
/// simulated day.
struct Event {
    std::string id;
    std::string title;
    std::string content;
    std::string domain;
    std::string country;
    int horizon_days = 7;
    std::vector<EngagementVector> trajectory;
};

// -- run output ------------------------------------------------------------------------

/// Complete result of one simulation run. engagement[i] is day i+1; the
/// attitude matrix has one row per timestep (row 0 = initial state) and one
/// column per crowd agent.
struct Trajectory {
    std::vector<EngagementVector> engagement;
    std::vector<std::string> agent_ids;
    Eigen::MatrixXd attitudes;
    std::vector<std::pair<int, InterventionVector>> interventions;
    std::vector<std::pair<int, DiscussionSignal>> discussions;

    int horizon() const { return static_cast<int>(engagement.size()); }
    Eigen::VectorXd views_series() const;
};

// -- bijection between attitude and normalized opinion space ------------------------------

/// Attitudes live in [-1, 1]; the bounded-confidence kernel operates on
/// opinions in [0, 1]. x = (A + 1) / 2.
inline double attitude_to_opinion(double attitude) { return (attitude + 1.0) / 2.0; }
inline double opinion_to_attitude(double opinion) { return 2.0 * opinion - 1.0; }

inline double clamp_attitude(double a) { return a < -1.0 ? -1.0 : (a > 1.0 ? 1.0 : a); }
inline double clamp_unit(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

} // namespace socsim
