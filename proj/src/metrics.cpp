#include "socsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace socsim {

std::string to_string(FidelityBand band) {
    switch (band) {
        case FidelityBand::HighFidelity: return "HighFidelity";
        case FidelityBand::Moderate: return "Moderate";
        case FidelityBand::Mismatch: return "Mismatch";
    }
    return "Mismatch";
}

FidelityBand classify_w1(double w1) {
    if (w1 < kW1HighFidelity) return FidelityBand::HighFidelity;
    if (w1 <= kW1Moderate) return FidelityBand::Moderate;
    return FidelityBand::Mismatch;
}

double wasserstein1(const Eigen::VectorXd& samples_a, const Eigen::VectorXd& samples_b) {
    if (samples_a.size() == 0 || samples_b.size() == 0) {
        throw EmptyInput("wasserstein1 requires non-empty sample lists");
    }
    std::vector<double> a(samples_a.data(), samples_a.data() + samples_a.size());
    std::vector<double> b(samples_b.data(), samples_b.data() + samples_b.size());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    // area between the two empirical CDFs, walking the merged breakpoints
    const double step_a = 1.0 / static_cast<double>(a.size());
    const double step_b = 1.0 / static_cast<double>(b.size());
    std::size_t ia = 0;
    std::size_t ib = 0;
    double cdf_a = 0.0;
    double cdf_b = 0.0;
    double area = 0.0;
    double previous = 0.0;
    bool first = true;
    while (ia < a.size() || ib < b.size()) {
        const double x = (ib >= b.size() || (ia < a.size() && a[ia] <= b[ib])) ? a[ia] : b[ib];
        if (!first) area += std::abs(cdf_a - cdf_b) * (x - previous);
        first = false;
        previous = x;
        while (ia < a.size() && a[ia] == x) {
            cdf_a += step_a;
            ++ia;
        }
        while (ib < b.size() && b[ib] == x) {
            cdf_b += step_b;
            ++ib;
        }
    }
    return area;
}

double mape(const std::vector<EngagementVector>& predicted,
            const std::vector<EngagementVector>& actual, std::int64_t* skipped_out) {
    if (predicted.size() != actual.size()) {
        throw LengthMismatch("mape: " + std::to_string(predicted.size()) + " predicted vs " +
                             std::to_string(actual.size()) + " actual timesteps");
    }
    double sum = 0.0;
    std::int64_t terms = 0;
    std::int64_t skipped = 0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        const Eigen::Vector4d p = predicted[t].as_vector();
        const Eigen::Vector4d a = actual[t].as_vector();
        for (int c = 0; c < 4; ++c) {
            if (a[c] == 0.0) {
                ++skipped;
                continue;
            }
            sum += std::abs(p[c] - a[c]) / std::abs(a[c]);
            ++terms;
        }
    }
    if (skipped_out) *skipped_out = skipped;
    if (terms == 0) {
        throw AllComponentsSkipped("mape: every reference component is zero");
    }
    return 100.0 * sum / static_cast<double>(terms);
}

double dtw(const Eigen::VectorXd& series_a, const Eigen::VectorXd& series_b) {
    const Eigen::Index m = series_a.size();
    const Eigen::Index n = series_b.size();
    if (m == 0 || n == 0) {
        throw EmptyInput("dtw requires non-empty series");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(m + 1, n + 1, inf);
    cost(0, 0) = 0.0;
    for (Eigen::Index i = 1; i <= m; ++i) {
        for (Eigen::Index j = 1; j <= n; ++j) {
            const double local = std::abs(series_a[i - 1] - series_b[j - 1]);
            cost(i, j) = local + std::min({cost(i - 1, j), cost(i, j - 1), cost(i - 1, j - 1)});
        }
    }
    return cost(m, n);
}

double zscore_reproducibility(const std::vector<double>& run_metrics) {
    if (run_metrics.size() < 2) {
        throw TooFewRuns("zscore needs at least 2 runs, got " +
                         std::to_string(run_metrics.size()));
    }
    double mean = 0.0;
    for (double x : run_metrics) mean += x;
    mean /= static_cast<double>(run_metrics.size());
    double variance = 0.0;
    for (double x : run_metrics) variance += (x - mean) * (x - mean);
    variance /= static_cast<double>(run_metrics.size());  // population variance
    if (variance == 0.0) return 0.0;
    const double sigma = std::sqrt(variance);
    double max_abs = 0.0;
    for (double x : run_metrics) max_abs = std::max(max_abs, std::abs((x - mean) / sigma));
    return max_abs;
}

Eigen::VectorXd min_max_normalize(const Eigen::VectorXd& values) {
    if (values.size() == 0) return values;
    const double lo = values.minCoeff();
    const double hi = values.maxCoeff();
    if (hi == lo) return Eigen::VectorXd::Zero(values.size());
    return (values.array() - lo) / (hi - lo);
}

Eigen::VectorXd pooled_engagement(const Trajectory& trajectory) {
    Eigen::VectorXd pooled(4 * static_cast<Eigen::Index>(trajectory.engagement.size()));
    Eigen::Index k = 0;
    for (const auto& vec : trajectory.engagement) {
        pooled.segment<4>(k) = vec.as_vector();
        k += 4;
    }
    return pooled;
}

MetricReport evaluate(const Trajectory& simulated, const Trajectory& reference,
                      const std::vector<Trajectory>& repeats) {
    if (simulated.horizon() != reference.horizon()) {
        throw HorizonMismatch("simulated horizon " + std::to_string(simulated.horizon()) +
                              " vs reference " + std::to_string(reference.horizon()));
    }
    for (const auto& repeat : repeats) {
        if (repeat.horizon() != reference.horizon()) {
            throw HorizonMismatch("repeat horizon " + std::to_string(repeat.horizon()) +
                                  " vs reference " + std::to_string(reference.horizon()));
        }
    }

    MetricReport report;
    report.w1 = wasserstein1(min_max_normalize(pooled_engagement(simulated)),
                             min_max_normalize(pooled_engagement(reference)));
    report.w1_band = classify_w1(report.w1);
    report.mape_percent = mape(simulated.engagement, reference.engagement, &report.mape_skipped);
    const Eigen::VectorXd reference_views = reference.views_series();
    report.dtw = dtw(simulated.views_series(), reference_views);

    if (!repeats.empty()) {
        report.run_dtw.push_back(report.dtw);
        for (const auto& repeat : repeats) {
            report.run_dtw.push_back(dtw(repeat.views_series(), reference_views));
        }
        report.zscore_max_abs = zscore_reproducibility(report.run_dtw);
    }
    return report;
}

std::string format_report(const MetricReport& report) {
    std::ostringstream out;
    out << "w1            " << report.w1 << "\n";
    out << "w1_band       " << to_string(report.w1_band) << "\n";
    out << "mape_percent  " << report.mape_percent << "\n";
    out << "mape_skipped  " << report.mape_skipped << "\n";
    out << "dtw           " << report.dtw << "\n";
    if (report.zscore_max_abs) {
        out << "zscore_max_abs " << *report.zscore_max_abs << "\n";
        out << "run_dtw       ";
        for (std::size_t i = 0; i < report.run_dtw.size(); ++i) {
            if (i) out << " ";
            out << report.run_dtw[i];
        }
        out << "\n";
    }
    return out.str();
}

} // namespace socsim
