#include "soilc/mcmc.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace soilc {

double Prior::logpdf(double x) const {
    switch (kind) {
        case Kind::Normal: return norm_logpdf(x, a, b);
        case Kind::LogNormal: return lognorm_logpdf(x, a, b);
        case Kind::TruncNormal: return truncnorm_logpdf(x, a, b, lo, hi);
        case Kind::Beta: return beta_logpdf(x, a, b);
        case Kind::Uniform: return uniform_logpdf(x, a, b);
        case Kind::InvGamma: return invgamma_logpdf(x, a, b);
    }
    return kNegInf;
}

double Prior::sample(Rng& rng) const {
    switch (kind) {
        case Kind::Normal: return rng.normal(a, b);
        case Kind::LogNormal: return std::exp(rng.normal(a, b));
        case Kind::TruncNormal: return rng.truncated_normal(a, b, lo, hi);
        case Kind::Beta: return rng.beta(a, b);
        case Kind::Uniform: return rng.uniform(a, b);
        case Kind::InvGamma: return b / rng.gamma(a, 1.0);
    }
    return 0.0;
}

double Proposal::scale_at(double current) const {
    if (rel_divisor > 0.0) return std::sqrt(std::max(current, 1e-300)) / rel_divisor;
    return sd;
}

double Proposal::draw(double current, Rng& rng) const {
    const double s = scale_at(current);
    if (s == 0.0) return current;
    if (kind == Kind::Normal) return rng.normal(current, s);
    return rng.truncated_normal(current, s, lo, hi);
}

double Proposal::logq(double to, double from) const {
    const double s = scale_at(from);
    if (s == 0.0) return 0.0;
    if (kind == Kind::Normal) return norm_logpdf(to, from, s);
    return truncnorm_logpdf(to, from, s, lo, hi);
}

double log_prior(std::span<const double> theta, const PriorSet& priors,
                 const std::function<bool(std::span<const double>)>& support) {
    if (support && !support(theta)) return kNegInf;
    double total = 0.0;
    for (size_t i = 0; i < theta.size(); ++i) {
        total += priors.priors[i].logpdf(theta[i]);
        if (!(total > kNegInf)) return kNegInf;
    }
    return total;
}

std::pair<std::vector<double>, double> propose(std::span<const double> theta,
                                               const ProposalSet& proposals, Rng& rng) {
    std::vector<double> next(theta.begin(), theta.end());
    double correction = 0.0;
    for (size_t i = 0; i < theta.size(); ++i) {
        const auto& q = proposals[i];
        const double cur = theta[i];
        const double prop = q.draw(cur, rng);
        next[i] = prop;
        if (prop != cur || q.rel_divisor > 0.0)
            correction += q.logq(cur, prop) - q.logq(prop, cur);
    }
    return {std::move(next), correction};
}

CpmState cpm_init(const LikelihoodModel& model, const PriorSet& priors, Rng& rng,
                  int max_retries) {
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        CpmState state;
        state.theta.resize(priors.init.size());
        for (size_t i = 0; i < priors.init.size(); ++i) state.theta[i] = priors.init[i].sample(rng);
        state.logprior = log_prior(state.theta, priors, model.support);
        if (!(state.logprior > kNegInf)) continue;
        state.bank = model.make_bank(rng);
        state.loglik = model.loglik(state.theta, state.bank);
        if (state.loglik > kNegInf && std::isfinite(state.loglik)) return state;
    }
    std::ostringstream os;
    os << "chain initialisation failed after " << max_retries << " prior draws";
    throw std::runtime_error(os.str());
}

bool cpm_step(CpmState& state, double tau, const PriorSet& priors, const ProposalSet& proposals,
              const LikelihoodModel& model, Rng& rng) {
    auto [proposed, correction] = propose(state.theta, proposals, rng);
    const double lp = log_prior(proposed, priors, model.support);
    if (!(lp > kNegInf)) return false;

    RandomBank bank = state.bank;
    bank.correlate_move(tau, rng);
    const double ll = model.loglik(proposed, bank);

    const double log_r = (ll + lp + correction) - (state.loglik + state.logprior);
    if (std::log(rng.uniform()) < log_r) {
        state.theta = std::move(proposed);
        state.bank = std::move(bank);
        state.loglik = ll;
        state.logprior = lp;
        return true;
    }
    return false;
}

ChainOutput run_chain(const McmcConfig& config, const std::vector<std::string>& param_names,
                      const PriorSet& priors, const ProposalSet& proposals,
                      const LikelihoodModel& model) {
    if (config.iterations <= config.burn_in)
        throw std::invalid_argument("run_chain: iterations must exceed burn-in");
    if (config.stride < 1) throw std::invalid_argument("run_chain: stride must be >= 1");

    Rng rng(config.seed);
    CpmState state = cpm_init(model, priors, rng, config.max_init_retries);

    ChainOutput out;
    out.seed = config.seed;
    out.iterations = config.iterations;
    out.burn_in = config.burn_in;
    out.stride = config.stride;
    out.param_names = param_names;
    out.samples.reserve(out.expected_samples());

    long accepted = 0;
    for (long m = 1; m <= config.iterations; ++m) {
        if (cpm_step(state, config.tau, priors, proposals, model, rng)) ++accepted;
        if (m > config.burn_in && (m - config.burn_in) % config.stride == 0) {
            out.samples.push_back(state.theta);
            if (model.sample_path)
                out.trajectories.push_back(model.sample_path(state.theta, state.bank, rng));
        }
    }
    out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(config.iterations);
    return out;
}

}  // namespace soilc
