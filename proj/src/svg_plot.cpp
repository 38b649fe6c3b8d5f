#include "socsim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace socsim {

std::string span_color(InterventionKind kind) {
    switch (kind) {
        case InterventionKind::Publicity: return "#C0C0EC";
        case InterventionKind::Announcement: return "#D1E5CE";
        case InterventionKind::Prohibition: return "#E2CDE4";
        case InterventionKind::Response: return "#E9D5D4";
        case InterventionKind::Refutation: return "#FFFFD1";
        case InterventionKind::Inactive: return "#FDF2F5";
    }
    return "#FDF2F5";
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 700.0;
constexpr double kTop = 46.0;
constexpr double kBottom = 370.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#7f7f7f", "#17becf", "#bcbd22"};

std::string fmt(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", value);
    return buffer;
}

std::string fmt_label(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

std::string escape_xml(const std::string& text) {
    std::string escaped;
    for (char c : text) {
        switch (c) {
            case '&': escaped += "&amp;"; break;
            case '<': escaped += "&lt;"; break;
            case '>': escaped += "&gt;"; break;
            default: escaped.push_back(c);
        }
    }
    return escaped;
}

} // namespace

std::string render_line_plot(const std::string& title,
                             const std::vector<std::pair<std::string, Eigen::VectorXd>>& series,
                             const std::vector<PlotSpan>& spans, const std::string& y_label,
                             int first_day) {
    Eigen::Index max_len = 0;
    double y_min = 0.0;
    double y_max = 0.0;
    bool any = false;
    for (const auto& [name, values] : series) {
        max_len = std::max(max_len, values.size());
        for (Eigen::Index i = 0; i < values.size(); ++i) {
            if (!any) {
                y_min = y_max = values[i];
                any = true;
            } else {
                y_min = std::min(y_min, values[i]);
                y_max = std::max(y_max, values[i]);
            }
        }
    }
    if (!any) {
        y_min = 0.0;
        y_max = 1.0;
    }
    if (y_max == y_min) {
        y_max += 1.0;
        y_min -= 1.0;
    }
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    const double x_lo = first_day - 0.5;
    const double x_hi = first_day + static_cast<double>(std::max<Eigen::Index>(max_len, 1)) - 0.5;
    auto x_of = [&](double day) {
        return kLeft + (day - x_lo) / (x_hi - x_lo) * (kRight - kLeft);
    };
    auto y_of = [&](double value) {
        return kBottom - (value - y_min) / (y_max - y_min) * (kBottom - kTop);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << escape_xml(title) << "</text>\n";

    // intervention spans behind everything else
    for (const auto& span : spans) {
        const double x0 = x_of(span.day - 0.5);
        const double x1 = x_of(span.day + 0.5);
        svg << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(kTop) << "\" width=\""
            << fmt(x1 - x0) << "\" height=\"" << fmt(kBottom - kTop) << "\" fill=\""
            << span_color(span.kind) << "\" fill-opacity=\"0.55\"/>\n";
    }

    // axes
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
        << kBottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kBottom << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double value = y_min + (y_max - y_min) * tick / 4.0;
        const double y = y_of(value);
        svg << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << fmt(y) << "\" x2=\"" << kLeft
            << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\" "
            << "font-family=\"sans-serif\" font-size=\"11\">" << fmt_label(value) << "</text>\n";
    }
    const int days = static_cast<int>(std::max<Eigen::Index>(max_len, 1));
    const int step = days > 14 ? (days + 13) / 14 : 1;
    for (int day = first_day; day < first_day + days; day += step) {
        const double x = x_of(day);
        svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << kBottom << "\" x2=\"" << fmt(x)
            << "\" y2=\"" << kBottom + 4 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(x) << "\" y=\"" << kBottom + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << day
            << "</text>\n";
    }
    svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 38
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">day</text>\n";
    svg << "<text x=\"18\" y=\"" << (kTop + kBottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 18 " << (kTop + kBottom) / 2 << ")\">" << escape_xml(y_label)
        << "</text>\n";

    // series
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& values = series[s].second;
        if (values.size() == 0) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << kPalette[s % 10]
            << "\" stroke-width=\"1.8\" points=\"";
        for (Eigen::Index i = 0; i < values.size(); ++i) {
            if (i) svg << " ";
            svg << fmt(x_of(first_day + static_cast<double>(i))) << ","
                << fmt(y_of(values[i]));
        }
        svg << "\"/>\n";
    }

    // legend: series first, then the span kinds present
    double legend_y = kTop + 8.0;
    for (std::size_t s = 0; s < series.size() && s < 12; ++s) {
        svg << "<line x1=\"" << kLeft + 10 << "\" y1=\"" << fmt(legend_y) << "\" x2=\""
            << kLeft + 34 << "\" y2=\"" << fmt(legend_y) << "\" stroke=\"" << kPalette[s % 10]
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << kLeft + 40 << "\" y=\"" << fmt(legend_y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(series[s].first)
            << "</text>\n";
        legend_y += 16.0;
    }
    std::set<InterventionKind> kinds;
    for (const auto& span : spans) kinds.insert(span.kind);
    for (InterventionKind kind : kinds) {
        svg << "<rect x=\"" << kLeft + 10 << "\" y=\"" << fmt(legend_y - 8)
            << "\" width=\"24\" height=\"12\" fill=\"" << span_color(kind)
            << "\" fill-opacity=\"0.55\"/>\n";
        svg << "<text x=\"" << kLeft + 40 << "\" y=\"" << fmt(legend_y + 2)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << to_string(kind)
            << "</text>\n";
        legend_y += 16.0;
    }

    svg << "</svg>\n";
    return svg.str();
}

std::vector<PlotSpan> spans_of(const Trajectory& trajectory) {
    std::vector<PlotSpan> spans;
    for (const auto& [t, interventions] : trajectory.interventions) {
        for (const auto& entry : interventions) {
            if (entry.active()) spans.push_back(PlotSpan{t, entry.kind});
        }
    }
    return spans;
}

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write: " + path);
    out << text;
}

} // namespace

void write_overview_svg(const Trajectory& trajectory, const std::string& path) {
    write_text(path, render_line_plot("event views over time",
                                      {{"views", trajectory.views_series()}},
                                      spans_of(trajectory), "views"));
}

void write_overlay_svg(const std::vector<std::pair<std::string, Eigen::VectorXd>>& runs,
                       const std::vector<PlotSpan>& spans, const std::string& path) {
    write_text(path, render_line_plot("baseline vs counterfactual controls", runs, spans,
                                      "views"));
}

void write_attitudes_svg(const Trajectory& trajectory, const std::string& path) {
    std::vector<std::pair<std::string, Eigen::VectorXd>> series;
    for (Eigen::Index i = 0; i < trajectory.attitudes.cols(); ++i) {
        series.emplace_back(trajectory.agent_ids[static_cast<std::size_t>(i)],
                            trajectory.attitudes.col(i));
    }
    write_text(path, render_line_plot("group attitude evolution", series, spans_of(trajectory),
                                      "attitude", 0));
}

} // namespace socsim
