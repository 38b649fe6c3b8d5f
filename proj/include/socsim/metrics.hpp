#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "socsim/types.hpp"

namespace socsim {

enum class FidelityBand {
    HighFidelity,  // W1 < 0.15
    Moderate,      // 0.15 <= W1 <= 0.35
    Mismatch,      // W1 > 0.35
};

std::string to_string(FidelityBand band);
FidelityBand classify_w1(double w1);

inline constexpr double kW1HighFidelity = 0.15;
inline constexpr double kW1Moderate = 0.35;

struct MetricReport {
    double w1 = 0.0;
    FidelityBand w1_band = FidelityBand::HighFidelity;
    double mape_percent = 0.0;
    std::int64_t mape_skipped = 0;  // zero-valued reference components skipped
    double dtw = 0.0;
    std::optional<double> zscore_max_abs;  // absent for single runs
    std::vector<double> run_dtw;           // raw per-run values behind the z-score
};

std::string format_report(const MetricReport& report);

/// First Wasserstein distance between the empirical distributions of two
/// sample lists (area between empirical CDFs). For equal-length lists this
/// equals the mean absolute difference of the sorted samples. Inputs are
/// expected pre-normalized by the caller.
double wasserstein1(const Eigen::VectorXd& samples_a, const Eigen::VectorXd& samples_b);

/// Mean absolute percentage error over all timesteps and all four engagement
/// components. Zero reference components are skipped; skipped_out reports how
/// many. Throws AllComponentsSkipped when nothing remains.
double mape(const std::vector<EngagementVector>& predicted,
            const std::vector<EngagementVector>& actual, std::int64_t* skipped_out = nullptr);

/// Dynamic time warping alignment cost with absolute-difference local cost
/// and match/insert/delete steps, no windowing.
double dtw(const Eigen::VectorXd& series_a, const Eigen::VectorXd& series_b);

/// Reproducibility statistic over per-run summary metrics: max |(x - mean)| /
/// population std, 0 when the runs are identical.
double zscore_reproducibility(const std::vector<double>& run_metrics);

/// Scales values to [0, 1] by min-max; a constant vector maps to all zeros.
Eigen::VectorXd min_max_normalize(const Eigen::VectorXd& values);

/// All engagement components of a trajectory pooled into one sample vector.
Eigen::VectorXd pooled_engagement(const Trajectory& trajectory);

/// Full evaluation against a reference of equal horizon: W1 over per-
/// trajectory min-max-normalized pooled engagement, MAPE over raw 4-vectors,
/// DTW over raw view series, and (when repeats are supplied) the z-score over
/// per-run DTW values.
MetricReport evaluate(const Trajectory& simulated, const Trajectory& reference,
                      const std::vector<Trajectory>& repeats = {});

} // namespace socsim
