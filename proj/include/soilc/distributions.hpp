#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace soilc {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Deterministic RNG used everywhere. The engine is std::mt19937_64 (fully
// specified by the standard); the variate transforms below are our own so
// that streams do not depend on libstdc++ internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0,1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via the polar method; one spare is cached.
    double normal();

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Truncated normal on [lo, hi] by rejection.
    double truncated_normal(double mean, double sd, double lo, double hi);

    // Marsaglia-Tsang for shape >= 1, boosted for shape < 1.
    double gamma(double shape, double scale);

    double beta(double a, double b);

    // Derive an independent stream; documented chain-seed splitting rule.
    static std::uint64_t split(std::uint64_t master, std::uint64_t index);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// ---- densities (all log scale) ----

double norm_logpdf(double x, double mean, double sd);
double lognorm_logpdf(double x, double mu, double sigma);

// Truncated normal with support [lo, hi]; either bound may be infinite.
double truncnorm_logpdf(double x, double mean, double sd, double lo, double hi);
// log of the truncation normaliser Phi((hi-mean)/sd) - Phi((lo-mean)/sd).
double truncnorm_lognorm(double mean, double sd, double lo, double hi);

double beta_logpdf(double x, double a, double b);
// Shape/scale parameterisation: x ~ IG(a, b) has density b^a/Gamma(a) x^{-a-1} e^{-b/x}.
double invgamma_logpdf(double x, double shape, double scale);
double uniform_logpdf(double x, double lo, double hi);

double normal_cdf(double x);

}  // namespace soilc
