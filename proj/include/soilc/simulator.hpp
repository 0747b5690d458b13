#pragma once

#include "soilc/core.hpp"

#include <cstdint>
#include <vector>

namespace soilc {

struct SimConfig {
    ModelSpec spec;
    ParameterVector theta;
    ManagementSchedule schedule;
    int horizon = 20;  // years, >= 2
    std::uint64_t seed = 0;
    // Observation years per kind (absolute years). Kinds with no entry are
    // never observed.
    std::array<std::vector<int>, kNumObsKinds> obs_years{};
    int max_constraint_retries = 1000;  // three-pool BIO rejection
};

struct SimResult {
    FieldSeries data;
    LatentTrajectory truth;
};

// Forward-sample latent states and observations. Three-pool trajectories are
// redrawn per field until the 5% BIO cap holds at every time.
SimResult simulate(const SimConfig& config);

// The sparse observation pattern both study sites exhibit: years 1..3 after
// the baseline, then every third year.
std::vector<int> sparse_obs_years(int start_year, int horizon);
std::vector<int> dense_obs_years(int start_year, int horizon);

// Config with the default schedule for the site, every active observation
// kind observed at the given years.
SimConfig make_sim_config(const ModelSpec& spec, const ParameterVector& theta, int horizon,
                          std::uint64_t seed, bool dense);

}  // namespace soilc
