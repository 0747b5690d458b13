#pragma once

#include "soilc/core.hpp"
#include "soilc/distributions.hpp"
#include "soilc/filters.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace soilc {

enum class ParamId {
    KC, KD, KR, KH, KB,
    PiCB, PiBC, PiBB,
    PiDH, PiRH, PiHH, PiBH, PiDB, PiRB, PiHB,
    PD,
    C, RW, RS, RP, P, HW, HS,
    MuGW, MuGS, MuP, RhoGW, RhoGS, RhoP,
    S2Eta, S2EtaC, S2EtaB, S2EtaD, S2EtaR, S2EtaH,
    S2GW, S2GS, S2W, S2S, S2P,
    XC0F1, XC0F2, XC0F3, XIOM,
};

const char* to_string(ParamId id);

// Sampled parameters of a model variant, in a fixed order, with the mapping
// between flat vectors and ParameterVector.
struct ParamLayout {
    std::vector<ParamId> ids;
    std::vector<std::string> names;

    static ParamLayout for_spec(const ModelSpec& spec);
    int size() const { return static_cast<int>(ids.size()); }
    int index_of(ParamId id) const;  // -1 when absent

    ParameterVector to_params(std::span<const double> flat) const;
    std::vector<double> from_params(const ParameterVector& th) const;
};

struct Prior {
    enum class Kind { Normal, LogNormal, TruncNormal, Beta, Uniform, InvGamma };
    Kind kind = Kind::Normal;
    double a = 0.0, b = 1.0;  // location/scale or shape pair, by kind
    double lo = 0.0, hi = 0.0;  // TruncNormal bounds (hi may be +inf)

    double logpdf(double x) const;
    double sample(Rng& rng) const;
};

// Random-walk proposal centred at the current value. `rel_divisor` switches
// to the state-dependent variance cur/divisor^2 used by the variance
// parameters in the proposal tables.
struct Proposal {
    enum class Kind { Normal, TruncNormal };
    Kind kind = Kind::Normal;
    double sd = 0.0;
    double lo = 0.0, hi = 0.0;
    double rel_divisor = 0.0;

    double scale_at(double current) const;
    double draw(double current, Rng& rng) const;
    double logq(double to, double from) const;
};

struct PriorSet {
    std::vector<Prior> priors;              // aligned with ParamLayout
    std::vector<Prior> init;                // initialisation draws (usually == priors)
};

using ProposalSet = std::vector<Proposal>;  // aligned with ParamLayout

// Default priors/proposals per model variant, following the study tables.
PriorSet default_priors(const ModelSpec& spec, const ParamLayout& layout);
ProposalSet default_proposals(const ModelSpec& spec, const ParamLayout& layout);

// Sum of component log prior densities plus the structural support check
// (parameter ranges, transfer-proportion mass balance); -inf outside support.
double log_prior(std::span<const double> theta, const PriorSet& priors,
                 const std::function<bool(std::span<const double>)>& support);

// Componentwise random-walk draw. Returns theta' and the proposal-ratio
// correction log q(theta | theta') - log q(theta' | theta) (nonzero for the
// truncated and state-dependent families).
std::pair<std::vector<double>, double> propose(std::span<const double> theta,
                                               const ProposalSet& proposals, Rng& rng);

// Likelihood side of the sampler: an estimator that is a deterministic
// function of (theta, bank), plus bank construction and an optional
// trajectory draw for kept samples.
struct LikelihoodModel {
    std::function<double(std::span<const double>, const RandomBank&)> loglik;
    std::function<RandomBank(Rng&)> make_bank;
    std::function<bool(std::span<const double>)> support;  // may be null
    std::function<LatentTrajectory(std::span<const double>, const RandomBank&, Rng&)>
        sample_path;  // may be null
};

struct CpmState {
    std::vector<double> theta;
    RandomBank bank;
    double loglik = 0.0;
    double logprior = 0.0;
};

struct McmcConfig {
    long iterations = 20000;
    long burn_in = 8000;
    long stride = 30;
    double tau = 0.99;
    std::uint64_t seed = 1;
    int max_init_retries = 100;
};

// Draw an initial state from the initialisation distributions, retrying until
// the likelihood estimate is finite. Throws after max_init_retries failures.
CpmState cpm_init(const LikelihoodModel& model, const PriorSet& priors, Rng& rng,
                  int max_retries);

// One correlated pseudo-marginal step; returns true when the proposal was
// accepted. On rejection the state is left untouched (bank included).
bool cpm_step(CpmState& state, double tau, const PriorSet& priors, const ProposalSet& proposals,
              const LikelihoodModel& model, Rng& rng);

ChainOutput run_chain(const McmcConfig& config, const std::vector<std::string>& param_names,
                      const PriorSet& priors, const ProposalSet& proposals,
                      const LikelihoodModel& model);

}  // namespace soilc
