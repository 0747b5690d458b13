#include "soilc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace soilc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

double sample_cov(const std::vector<double>& a, const std::vector<double>& b, double ma,
                  double mb) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / static_cast<double>(a.size() - 1);
}

// Continued fraction for the regularised incomplete beta (Lentz's method).
double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-14) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double f_quantile(double p, double df1, double df2) {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("f_quantile: p outside (0,1)");
    // Invert I_x(df1/2, df2/2) = p by bisection on x, then map to F.
    const double a = df1 / 2.0, b = df2 / 2.0;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (incomplete_beta(a, b, mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    const double x = 0.5 * (lo + hi);
    return df2 * x / (df1 * (1.0 - x));
}

RhatReport gelman_rubin(const std::vector<std::vector<std::vector<double>>>& chains,
                        const std::vector<std::string>& names) {
    const int m = static_cast<int>(chains.size());
    if (m < 2) throw std::invalid_argument("gelman_rubin: need at least 2 chains");
    const size_t n = chains[0].size();
    if (n < 10) throw std::invalid_argument("gelman_rubin: need at least 10 samples per chain");
    for (const auto& c : chains)
        if (c.size() != n) throw std::invalid_argument("gelman_rubin: chains of unequal length");
    const size_t dim = chains[0][0].size();

    RhatReport report;
    report.reserve(dim);
    const double dn = static_cast<double>(n), dm = static_cast<double>(m);

    for (size_t p = 0; p < dim; ++p) {
        std::vector<double> xbar(m), s2(m), xbar2(m);
        bool all_constant = true;
        for (int j = 0; j < m; ++j) {
            std::vector<double> col(n);
            for (size_t i = 0; i < n; ++i) col[i] = chains[j][i][p];
            const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
            all_constant = all_constant && (*lo == *hi);
            xbar[j] = mean_of(col);
            s2[j] = sample_var(col, xbar[j]);
            xbar2[j] = xbar[j] * xbar[j];
        }
        const double w = mean_of(s2);
        const double grand = mean_of(xbar);
        const double bn = dn * sample_var(xbar, grand);  // B

        RhatEntry entry;
        entry.name = p < names.size() ? names[p] : std::to_string(p);
        if (all_constant || !(w > 0.0)) {
            entry.rhat = kInf;
            entry.upper_ci = kInf;
            report.push_back(entry);
            continue;
        }

        const double var_w = sample_var(s2, w) / dm;
        const double var_b = 2.0 * bn * bn / (dm - 1.0);
        const double cov_wb = (dn / dm) * (sample_cov(s2, xbar2, w, mean_of(xbar2)) -
                                           2.0 * grand * sample_cov(s2, xbar, w, grand));
        const double vhat = (dn - 1.0) * w / dn + (1.0 + 1.0 / dm) * bn / dn;
        const double var_v = ((dn - 1.0) * (dn - 1.0) * var_w +
                              std::pow(1.0 + 1.0 / dm, 2) * var_b +
                              2.0 * (dn - 1.0) * (1.0 + 1.0 / dm) * cov_wb) /
                             (dn * dn);
        const double df_v = var_v > 0.0 ? 2.0 * vhat * vhat / var_v : kInf;
        const double df_adj = std::isinf(df_v) ? 1.0 : (df_v + 3.0) / (df_v + 1.0);

        const double r2_fixed = (dn - 1.0) / dn;
        const double r2_random = (1.0 + 1.0 / dm) * (bn / w) / dn;
        entry.rhat = std::sqrt(df_adj * (r2_fixed + r2_random));
        if (var_w > 0.0) {
            const double w_df = 2.0 * w * w / var_w;
            const double q = f_quantile(0.975, dm - 1.0, w_df);
            entry.upper_ci = std::sqrt(df_adj * (r2_fixed + q * r2_random));
        } else {
            entry.upper_ci = entry.rhat;
        }
        report.push_back(entry);
    }
    return report;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    if (q <= 0.0) return sorted.front();
    if (q >= 1.0) return sorted.back();
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const size_t lo = static_cast<size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::array<PercentileSummary, kNumFields> soc_change(
    const std::vector<LatentTrajectory>& samples, const ModelSpec& spec, int baseline_year,
    int target_year) {
    if (samples.empty()) throw std::invalid_argument("soc_change: no samples");
    std::array<PercentileSummary, kNumFields> out{};
    for (int f = 0; f < kNumFields; ++f) {
        std::vector<double> diff;
        diff.reserve(samples.size());
        for (const auto& traj : samples) {
            const int tb = traj.year_index(baseline_year);
            const int tt = traj.year_index(target_year);
            if (tb < 0 || tb >= traj.years || tt < 0 || tt >= traj.years)
                throw std::out_of_range("soc_change: year outside trajectory range");
            diff.push_back(total_soc(traj, spec, f, tt) - total_soc(traj, spec, f, tb));
        }
        out[f].mean = mean_of(diff);
        std::sort(diff.begin(), diff.end());
        out[f].q2_5 = quantile_sorted(diff, 0.025);
        out[f].q25 = quantile_sorted(diff, 0.25);
        out[f].q50 = quantile_sorted(diff, 0.50);
        out[f].q75 = quantile_sorted(diff, 0.75);
        out[f].q97_5 = quantile_sorted(diff, 0.975);
    }
    return out;
}

PercentileBands percentile_bands(int n_samples, int start_year, int years,
                                 const std::function<double(int, int, int)>& statistic,
                                 const std::vector<double>& quantiles) {
    if (n_samples < 1) throw std::invalid_argument("percentile_bands: no samples");
    PercentileBands out;
    out.quantiles = quantiles;
    out.start_year = start_year;
    out.years = years;
    for (int f = 0; f < kNumFields; ++f) {
        out.curves[f].assign(years, std::vector<double>(quantiles.size(), 0.0));
        std::vector<double> values(n_samples);
        for (int t = 0; t < years; ++t) {
            for (int s = 0; s < n_samples; ++s) values[s] = statistic(s, f, t);
            std::sort(values.begin(), values.end());
            for (size_t q = 0; q < quantiles.size(); ++q)
                out.curves[f][t][q] = quantile_sorted(values, quantiles[q]);
        }
    }
    return out;
}

}  // namespace soilc
