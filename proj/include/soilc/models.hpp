#pragma once

#include "soilc/core.hpp"

#include <span>

namespace soilc {

// Yearly carbon mass entering the soil from plant matter (t/ha). Zero for
// fallow and cleared years.
double carbon_input(std::span<const double> crop, Treatment treatment, const ParameterVector& th,
                    const ModelSpec& spec);

// One transition of the carbon pools. `noise` supplies one standard-normal
// draw per stochastic pool (scaled internally by the model's process sd), so
// a fixed-random-number filter can replay transitions exactly.
void step_carbon(const ModelSpec& spec, std::span<const double> prev, double input,
                 const ParameterVector& th, std::span<const double> noise,
                 std::span<double> next);

// One transition of the crop states, same fixed-noise convention. Noise
// layout matches the crop slice: Tarlee {GW, W, P}, Brigalow {GW, W, GS, S}.
void step_crops(const ModelSpec& spec, std::span<const double> prev, const ParameterVector& th,
                std::span<const double> noise, std::span<double> next);

// Stationary draw of the crop states at the first year (the AR(1) processes
// started at their stationary law; totals conditional on the grain draw).
void initial_crops(const ModelSpec& spec, const ParameterVector& th,
                   std::span<const double> noise, std::span<double> out);

// Split of the sampled initial decomposable mass across the stochastic pools.
void initial_carbon(const ModelSpec& spec, const ParameterVector& th, int field,
                    std::span<double> out);

// Log-density of the observations present at one field-year given the latent
// slice. Absent kinds contribute nothing. Non-positive observed values are a
// caller error (validated at ingestion).
double obs_logdensity(const ModelSpec& spec, std::span<const double> crop,
                      std::span<const double> carbon, double x_iom,
                      const FieldObservations& obs, int year, const ParameterVector& th);

// Same but restricted to carbon-block kinds (TOC, IOM, POC, H); the crop
// block is scored exactly by the Kalman filter.
double carbon_obs_logdensity(const ModelSpec& spec, std::span<const double> carbon, double x_iom,
                             const FieldObservations& obs, int year, const ParameterVector& th);

// Per-pool decayed mass not transferred to any modelled pool, i.e. lost to
// the atmosphere, for the transition into year index t (t >= 1).
double emitted_co2_step(const ModelSpec& spec, std::span<const double> prev,
                        const ParameterVector& th);

// Emitted mass per field per year (index 1..years-1; index 0 is zero).
std::vector<std::array<double, kNumFields>> emitted_co2(const LatentTrajectory& traj,
                                                        const ModelSpec& spec,
                                                        const ParameterVector& th);

// True when a three-pool carbon slice violates the 5% BIO cap.
bool bio_constraint_violated(const ModelSpec& spec, std::span<const double> carbon, double x_iom);

}  // namespace soilc
