#include "soilc/selection.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace soilc {

double log_predictive(const std::vector<std::vector<double>>& theta_samples, int t_next,
                      const LfoModelHooks& model, Rng& rng) {
    if (theta_samples.empty()) throw std::invalid_argument("log_predictive: no posterior samples");
    const double logS = std::log(static_cast<double>(theta_samples.size()));
    double maxv = kNegInf;
    std::vector<double> terms;
    terms.reserve(theta_samples.size());
    for (const auto& theta : theta_samples) {
        const double v = model.predictive(theta, t_next, rng);
        terms.push_back(v);
        maxv = std::max(maxv, v);
    }
    if (!(maxv > kNegInf)) return kNegInf;
    double sum = 0.0;
    for (double v : terms) sum += std::exp(v - maxv);
    return maxv + std::log(sum) - logS;
}

LfoResult elpd_lfo(const LfoModelHooks& model, int L, int chains, std::uint64_t seed) {
    if (L < 1 || L >= model.T) throw std::invalid_argument("elpd_lfo: need L in [1, T)");
    bool any_future = false;
    for (int t = L; t <= model.T - 1; ++t) any_future = any_future || model.has_obs(t + 1);
    if (!any_future) throw std::invalid_argument("elpd_lfo: no observations beyond L");

    LfoResult out;
    out.model_id = model.model_id;
    out.L = L;
    out.lpd_per_chain.assign(chains, {});
    out.elpd_per_chain.assign(chains, 0.0);

    for (int t = L; t <= model.T - 1; ++t) {
        if (!model.has_obs(t + 1)) continue;  // nothing to score at t+1
        std::vector<std::vector<std::vector<double>>> fits;
        try {
            fits = model.fit(t, Rng::split(seed, static_cast<std::uint64_t>(t)));
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "elpd_lfo: refit on Y_{1:" << t << "} failed: " << e.what();
            throw std::runtime_error(os.str());
        }
        if (static_cast<int>(fits.size()) != chains)
            throw std::runtime_error("elpd_lfo: fit returned wrong chain count");

        out.times.push_back(t + 1);
        out.fit_window_end.push_back(t);
        for (int j = 0; j < chains; ++j) {
            Rng rng(Rng::split(seed ^ 0x5f0cull, static_cast<std::uint64_t>(t) * 131 + j));
            const double lpd = log_predictive(fits[j], t + 1, model, rng);
            out.lpd_per_chain[j].push_back(lpd);
            out.elpd_per_chain[j] += lpd;
        }
    }

    const size_t nt = out.times.size();
    out.lpd_mean.assign(nt, 0.0);
    out.lpd_sd.assign(nt, 0.0);
    for (size_t i = 0; i < nt; ++i) {
        double m = 0.0;
        for (int j = 0; j < chains; ++j) m += out.lpd_per_chain[j][i];
        m /= chains;
        double v = 0.0;
        for (int j = 0; j < chains; ++j) v += std::pow(out.lpd_per_chain[j][i] - m, 2);
        out.lpd_mean[i] = m;
        out.lpd_sd[i] = chains > 1 ? std::sqrt(v / (chains - 1)) : 0.0;
    }
    double m = 0.0;
    for (double e : out.elpd_per_chain) m += e;
    m /= chains;
    double v = 0.0;
    for (double e : out.elpd_per_chain) v += (e - m) * (e - m);
    out.elpd_mean = m;
    out.elpd_sd = chains > 1 ? std::sqrt(v / (chains - 1)) : 0.0;
    return out;
}

LfoModelHooks make_soil_lfo(const FieldSeries& data, const SoilLfoConfig& config) {
    const auto [first_year, last_year] = data.schedule.year_span();
    const int T = last_year - first_year + 1;
    const auto layout = ParamLayout::for_spec(config.spec);
    const auto priors = default_priors(config.spec, layout);
    const auto proposals = default_proposals(config.spec, layout);

    LfoModelHooks hooks;
    hooks.T = T;
    hooks.model_id = std::string(to_string(config.spec.pools)) + "-pool";
    hooks.has_obs = [data, first_year](int t) { return data.any_at(first_year + t - 1); };

    hooks.fit = [data, config, layout, priors, proposals, first_year](
                    int t, std::uint64_t seed) {
        const FieldSeries window = data.truncated_after(first_year + t - 1);
        SoilModel model(config.spec, window, config.rbpf);
        const LikelihoodModel lik = make_soil_likelihood(model, layout, false);
        std::vector<std::vector<std::vector<double>>> fits(config.chains);
        for (int j = 0; j < config.chains; ++j) {
            McmcConfig mc = config.mcmc;
            mc.seed = Rng::split(seed, static_cast<std::uint64_t>(j));
            fits[j] = run_chain(mc, layout.names, priors, proposals, lik).samples;
        }
        return fits;
    };

    hooks.predictive = [data, config, layout, first_year](std::span<const double> theta,
                                                          int t_next, Rng& rng) {
        const FieldSeries window = data.truncated_after(first_year + t_next - 1);
        SoilModel model(config.spec, window, config.rbpf);
        const RandomBank bank = model.make_bank(rng);
        std::vector<double> per_time;
        model.loglik(layout.to_params(theta), bank, &per_time);
        return per_time[t_next - 1];
    };
    return hooks;
}

}  // namespace soilc
