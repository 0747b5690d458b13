#pragma once

#include "soilc/core.hpp"

#include <functional>
#include <string>
#include <vector>

namespace soilc {

struct RhatEntry {
    std::string name;
    double rhat = 1.0;
    double upper_ci = 1.0;  // 97.5% bound
};

using RhatReport = std::vector<RhatEntry>;

// Potential scale reduction factor per parameter, original Gelman-Rubin
// estimator with the degrees-of-freedom correction and its upper confidence
// bound. Chains: [chain][sample][param], at least 2 chains of equal length
// >= 10. A parameter with zero within-chain variance reports +inf.
RhatReport gelman_rubin(const std::vector<std::vector<std::vector<double>>>& chains,
                        const std::vector<std::string>& names);

// Interpolated order statistic (h = (n-1)q), matching the convention fixed
// for reproducibility. `sorted` must be ascending and non-empty.
double quantile_sorted(const std::vector<double>& sorted, double q);

// Regularised incomplete beta and the F-distribution quantile used by the
// upper confidence bound.
double incomplete_beta(double a, double b, double x);
double f_quantile(double p, double df1, double df2);

struct PercentileSummary {
    double mean = 0.0;
    double q2_5 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q97_5 = 0.0;
};

// Monte-Carlo summary of total_soc(target) - total_soc(baseline) per field.
std::array<PercentileSummary, kNumFields> soc_change(
    const std::vector<LatentTrajectory>& samples, const ModelSpec& spec, int baseline_year,
    int target_year);

// Per-field per-year quantile curves of a per-sample statistic.
// statistic(sample_index, field, t) -> value.
struct PercentileBands {
    std::vector<double> quantiles;
    int start_year = 0;
    int years = 0;
    // [field][year][quantile]
    std::array<std::vector<std::vector<double>>, kNumFields> curves;
};

PercentileBands percentile_bands(int n_samples, int start_year, int years,
                                 const std::function<double(int, int, int)>& statistic,
                                 const std::vector<double>& quantiles);

}  // namespace soilc
