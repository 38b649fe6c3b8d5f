#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

#include "socsim/types.hpp"

namespace socsim {

/// A day shaded because an intervention (or comment burst) was active.
struct PlotSpan {
    int day = 1;
    InterventionKind kind = InterventionKind::Inactive;
};

/// Fill color role per intervention kind, shared by every plot legend.
std::string span_color(InterventionKind kind);

/// Standalone SVG line chart: one polyline per named series over days
/// 1..horizon, with intervention days shaded per kind. No external plotting
/// dependency.
std::string render_line_plot(const std::string& title,
                             const std::vector<std::pair<std::string, Eigen::VectorXd>>& series,
                             const std::vector<PlotSpan>& spans, const std::string& y_label,
                             int first_day = 1);

/// Views-vs-time overview for a single run.
void write_overview_svg(const Trajectory& trajectory, const std::string& path);

/// Multi-run overlay (baseline vs counterfactual controls).
void write_overlay_svg(const std::vector<std::pair<std::string, Eigen::VectorXd>>& runs,
                       const std::vector<PlotSpan>& spans, const std::string& path);

/// Per-agent attitude series over the run.
void write_attitudes_svg(const Trajectory& trajectory, const std::string& path);

/// Shaded spans of a recorded run (one per active intervention entry).
std::vector<PlotSpan> spans_of(const Trajectory& trajectory);

} // namespace socsim
