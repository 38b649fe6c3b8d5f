#include "socsim/types.hpp"

namespace socsim {

std::string to_string(InterventionKind kind) {
    switch (kind) {
        case InterventionKind::Prohibition: return "Prohibition";
        case InterventionKind::Refutation: return "Refutation";
        case InterventionKind::Publicity: return "Publicity";
        case InterventionKind::Response: return "Response";
        case InterventionKind::Announcement: return "Announcement";
        case InterventionKind::Inactive: return "Inactive";
    }
    return "Inactive";
}

InterventionKind intervention_kind_from_string(const std::string& name) {
    if (name == "Prohibition") return InterventionKind::Prohibition;
    if (name == "Refutation") return InterventionKind::Refutation;
    if (name == "Publicity") return InterventionKind::Publicity;
    if (name == "Response") return InterventionKind::Response;
    if (name == "Announcement") return InterventionKind::Announcement;
    if (name == "Inactive" || name == "None" || name.empty()) return InterventionKind::Inactive;
    throw SchemaError("unknown intervention kind: '" + name + "'");
}

bool any_active(const InterventionVector& interventions) {
    for (const auto& entry : interventions) {
        if (entry.active()) return true;
    }
    return false;
}

double visibility_multiplier(const InterventionVector& interventions,
                             const std::map<InterventionKind, double>& multipliers) {
    double product = 1.0;
    for (const auto& entry : interventions) {
        if (!entry.active()) continue;
        auto it = multipliers.find(entry.kind);
        if (it != multipliers.end()) product *= it->second;
    }
    return product;
}

std::string to_string(ActionKind action) {
    switch (action) {
        case ActionKind::SelectPartner: return "SelectPartner";
        case ActionKind::DiscussOpinion: return "DiscussOpinion";
        case ActionKind::UpdateOpinion: return "UpdateOpinion";
    }
    return "UpdateOpinion";
}

ActionKind action_kind_from_string(const std::string& name) {
    if (name == "SelectPartner") return ActionKind::SelectPartner;
    if (name == "DiscussOpinion") return ActionKind::DiscussOpinion;
    if (name == "UpdateOpinion") return ActionKind::UpdateOpinion;
    throw SchemaError("unknown action kind: '" + name + "'");
}

std::string to_string(ReplyTone tone) {
    switch (tone) {
        case ReplyTone::Supportive: return "supportive";
        case ReplyTone::Neutral: return "neutral";
        case ReplyTone::Opposing: return "opposing";
    }
    return "neutral";
}

ReplyTone reply_tone_from_string(const std::string& name) {
    if (name == "supportive") return ReplyTone::Supportive;
    if (name == "neutral") return ReplyTone::Neutral;
    if (name == "opposing") return ReplyTone::Opposing;
    throw SchemaError("unknown reply tone: '" + name + "'");
}

double tone_valence(ReplyTone tone) {
    switch (tone) {
        case ReplyTone::Supportive: return 1.0;
        case ReplyTone::Neutral: return 0.0;
        case ReplyTone::Opposing: return -1.0;
    }
    return 0.0;
}

int attitude_bin(double attitude) {
    const double width = 2.0 / kAttitudeHistogramBins;
    int bin = static_cast<int>((attitude + 1.0) / width);
    if (bin < 0) bin = 0;
    if (bin >= kAttitudeHistogramBins) bin = kAttitudeHistogramBins - 1;
    return bin;
}

Eigen::VectorXd Trajectory::views_series() const {
    Eigen::VectorXd series(static_cast<Eigen::Index>(engagement.size()));
    for (Eigen::Index i = 0; i < series.size(); ++i) {
        series[i] = engagement[static_cast<std::size_t>(i)].views;
    }
    return series;
}

} // namespace socsim
