#pragma once

#include "soilc/mcmc.hpp"
#include "soilc/soil_model.hpp"

#include <span>
#include <string>
#include <vector>

namespace soilc {

// Hooks the leave-future-out driver needs from a model. Time is 1-based:
// Y_{1:t} is the data window ending at time t; T is the full horizon.
struct LfoModelHooks {
    int T = 0;
    std::string model_id;
    std::function<bool(int t)> has_obs;
    // Refit on Y_{1:t}; returns per-chain flat-theta samples [chain][sample][dim].
    std::function<std::vector<std::vector<std::vector<double>>>(int t, std::uint64_t seed)> fit;
    // One-step predictive log density p(Y_{t_next} | Y_{1:t_next-1}, theta),
    // estimated by running the filter one step beyond the fitted window.
    std::function<double(std::span<const double> theta, int t_next, Rng& rng)> predictive;
};

// Monte-Carlo log pointwise predictive density at t_next from posterior
// samples: log( (1/S) sum_s p(Y_{t_next} | Y_{1:t_next-1}, theta_s) ).
double log_predictive(const std::vector<std::vector<double>>& theta_samples, int t_next,
                      const LfoModelHooks& model, Rng& rng);

struct LfoResult {
    std::string model_id;
    int L = 0;
    std::vector<int> times;  // predicted time indices t+1
    // [chain][time]
    std::vector<std::vector<double>> lpd_per_chain;
    std::vector<double> lpd_mean, lpd_sd;
    std::vector<double> elpd_per_chain;
    double elpd_mean = 0.0, elpd_sd = 0.0;
    // data-window metadata: fitted window end per scored time
    std::vector<int> fit_window_end;
};

// Refit on Y_{1:t} for each t in {L..T-1} with observations at t+1, score the
// one-step predictive density, and accumulate the ELPD per chain.
LfoResult elpd_lfo(const LfoModelHooks& model, int L, int chains, std::uint64_t seed);

// Soil-model wiring of the hooks.
struct SoilLfoConfig {
    ModelSpec spec;
    RbpfOptions rbpf{.particles = 200};  // desk-scale preset
    McmcConfig mcmc{};                   // desk-scale preset defaults
    int chains = 4;
};

LfoModelHooks make_soil_lfo(const FieldSeries& data, const SoilLfoConfig& config);

}  // namespace soilc
