#include "soilc/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace soilc {

namespace {
constexpr double kLogSqrt2Pi = 0.9189385332046727;  // log(sqrt(2*pi))
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
}

double Rng::truncated_normal(double mean, double sd, double lo, double hi) {
    if (sd <= 0.0) throw std::invalid_argument("truncated_normal: sd <= 0");
    for (;;) {
        const double x = normal(mean, sd);
        if (x >= lo && x <= hi) return x;
    }
}

double Rng::gamma(double shape, double scale) {
    if (shape < 1.0) {
        // Johnk boost: G(a) = G(a+1) * U^{1/a}
        const double u = uniform();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
}

double Rng::beta(double a, double b) {
    const double x = gamma(a, 1.0);
    const double y = gamma(b, 1.0);
    return x / (x + y);
}

std::uint64_t Rng::split(std::uint64_t master, std::uint64_t index) {
    // splitmix64 finaliser applied to master + index * golden ratio.
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double norm_logpdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return -0.5 * z * z - std::log(sd) - kLogSqrt2Pi;
}

double lognorm_logpdf(double x, double mu, double sigma) {
    if (!(x > 0.0)) return kNegInf;
    const double lx = std::log(x);
    return norm_logpdf(lx, mu, sigma) - lx;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double truncnorm_lognorm(double mean, double sd, double lo, double hi) {
    const double a = std::isinf(lo) ? 0.0 : normal_cdf((lo - mean) / sd);
    const double b = std::isinf(hi) ? 1.0 : normal_cdf((hi - mean) / sd);
    const double z = b - a;
    return z > 0.0 ? std::log(z) : kNegInf;
}

double truncnorm_logpdf(double x, double mean, double sd, double lo, double hi) {
    if (x < lo || x > hi) return kNegInf;
    return norm_logpdf(x, mean, sd) - truncnorm_lognorm(mean, sd, lo, hi);
}

double beta_logpdf(double x, double a, double b) {
    if (!(x > 0.0) || !(x < 1.0)) return kNegInf;
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lbeta;
}

double invgamma_logpdf(double x, double shape, double scale) {
    if (!(x > 0.0)) return kNegInf;
    return shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - scale / x;
}

double uniform_logpdf(double x, double lo, double hi) {
    if (x < lo || x > hi) return kNegInf;
    return -std::log(hi - lo);
}

}  // namespace soilc
