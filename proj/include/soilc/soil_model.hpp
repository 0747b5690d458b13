#pragma once

#include "soilc/filters.hpp"
#include "soilc/mcmc.hpp"
#include "soilc/models.hpp"

#include <memory>

namespace soilc {

// How carbon particles obtain the crop values feeding the input formulas.
// FilteredDraw samples from the Kalman filtering distribution at each time
// (crop observations then inform carbon inputs); PriorTransition lets each
// particle carry its own crop states through the prior dynamics.
enum class CropSupply { FilteredDraw, PriorTransition };

struct RbpfOptions {
    int particles = 500;
    CropSupply crop_supply = CropSupply::FilteredDraw;
    Exec exec = Exec::Serial;
};

// Rao-Blackwellised likelihood of one dataset: exact Kalman log-likelihood of
// the crop sub-model plus a fixed-random-number particle filter estimate for
// the carbon sub-model, summed over independent fields. All log-likelihoods
// are densities of the observations on their original scale (the log-normal
// Jacobian of the log-transformed crop block is included).
class SoilModel {
public:
    SoilModel(ModelSpec spec, FieldSeries data, RbpfOptions opt);

    const ModelSpec& spec() const { return spec_; }
    const FieldSeries& data() const { return data_; }
    const RbpfOptions& options() const { return opt_; }
    int horizon() const { return horizon_; }
    int first_year() const { return first_year_; }

    int bank_dim() const { return spec_.crop_dim() + spec_.carbon_dim(); }
    RandomBank make_bank(Rng& rng) const {
        return RandomBank::gaussian(kNumFields, horizon_, opt_.particles, bank_dim(), rng);
    }

    double loglik(const ParameterVector& th, const RandomBank& bank,
                  std::vector<double>* per_time = nullptr) const;

    // Same estimate plus a latent-trajectory draw: the surviving ancestral
    // path of a uniformly chosen final particle, per field.
    double sample_path(const ParameterVector& th, const RandomBank& bank, Rng& pick,
                       LatentTrajectory& out) const;

    // Kalman log-likelihood of one field's crop block (data scale).
    double crop_loglik(const ParameterVector& th, int field,
                       std::vector<double>* per_time = nullptr) const;

private:
    struct FieldPass;
    double run(const ParameterVector& th, const RandomBank& bank, std::vector<double>* per_time,
               Rng* pick, LatentTrajectory* out) const;

    ModelSpec spec_;
    FieldSeries data_;
    RbpfOptions opt_;
    int first_year_ = 0;
    int horizon_ = 0;
};

// Sampler-facing view of a SoilModel. The returned functor set references the
// model and layout, which must outlive it. `with_paths` wires the trajectory
// draw used for kept samples.
LikelihoodModel make_soil_likelihood(const SoilModel& model, const ParamLayout& layout,
                                     bool with_paths);

}  // namespace soilc
