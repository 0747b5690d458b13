#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "soilc/selection.hpp"
#include "soilc/simulator.hpp"

#include <cmath>

using namespace soilc;

namespace {

// Conjugate normal-normal toy wired through the same refit + scoring path the
// soil models use. Known sigma; closed-form posterior and one-step predictive.
struct ConjugateLfo {
    std::vector<double> y;  // y[t-1] observed at time t
    double sigma = 0.7;
    double prior_mean = 0.0, prior_sd = 2.0;
    McmcConfig mcmc{.iterations = 24000, .burn_in = 4000, .stride = 5, .tau = 0.99, .seed = 1};
    int chains = 2;

    LfoModelHooks hooks() const {
        LfoModelHooks h;
        h.T = static_cast<int>(y.size());
        h.model_id = "conjugate";
        h.has_obs = [T = h.T](int t) { return t >= 1 && t <= T; };
        h.fit = [this](int t, std::uint64_t seed) {
            PriorSet priors;
            priors.priors = {Prior{Prior::Kind::Normal, prior_mean, prior_sd, 0, 0}};
            priors.init = priors.priors;
            ProposalSet proposals = {Proposal{Proposal::Kind::Normal, 0.4, 0, 0, 0}};
            LikelihoodModel model;
            model.loglik = [this, t](std::span<const double> th, const RandomBank&) {
                double total = 0.0;
                for (int i = 0; i < t; ++i) total += norm_logpdf(y[i], th[0], sigma);
                return total;
            };
            model.make_bank = [](Rng& r) { return RandomBank::gaussian(1, 1, 1, 1, r); };
            std::vector<std::vector<std::vector<double>>> fits(chains);
            for (int j = 0; j < chains; ++j) {
                McmcConfig cfg = mcmc;
                cfg.seed = Rng::split(seed, j);
                fits[j] = run_chain(cfg, {"mu"}, priors, proposals, model).samples;
            }
            return fits;
        };
        h.predictive = [this](std::span<const double> th, int t_next, Rng&) {
            return norm_logpdf(y[t_next - 1], th[0], sigma);
        };
        return h;
    }

    // closed-form posterior after t observations
    std::pair<double, double> posterior(int t) const {
        double sum = 0.0;
        for (int i = 0; i < t; ++i) sum += y[i];
        const double prec = 1.0 / (prior_sd * prior_sd) + t / (sigma * sigma);
        const double mean = (prior_mean / (prior_sd * prior_sd) + sum / (sigma * sigma)) / prec;
        return {mean, std::sqrt(1.0 / prec)};
    }
    double exact_lpd(int t_next) const {
        const auto [m, s] = posterior(t_next - 1);
        const double var = s * s + sigma * sigma;
        return norm_logpdf(y[t_next - 1], m, std::sqrt(var));
    }
};

}  // namespace

TEST_CASE("conjugate toy: LPD matches the closed-form posterior predictive") {
    ConjugateLfo toy;
    toy.y = {1.1, 0.4, 0.9, 1.4, 0.2, 0.8};
    const auto hooks = toy.hooks();
    const auto result = elpd_lfo(hooks, 3, toy.chains, 42);

    REQUIRE(result.times == std::vector<int>{4, 5, 6});
    double exact_total = 0.0;
    for (size_t i = 0; i < result.times.size(); ++i) {
        const double exact = toy.exact_lpd(result.times[i]);
        exact_total += exact;
        CHECK(result.lpd_mean[i] == doctest::Approx(exact).epsilon(0.05));
    }
    CHECK(result.elpd_mean == doctest::Approx(exact_total).epsilon(0.05));

    // ELPD is exactly the sum of the stored per-time LPDs, per chain
    for (int j = 0; j < toy.chains; ++j) {
        double sum = 0.0;
        for (double v : result.lpd_per_chain[j]) sum += v;
        CHECK(result.elpd_per_chain[j] == sum);
    }
    // refits never see the future: window ends exactly one step before
    for (size_t i = 0; i < result.times.size(); ++i)
        CHECK(result.fit_window_end[i] == result.times[i] - 1);
}

TEST_CASE("one future point makes ELPD equal that single LPD") {
    ConjugateLfo toy;
    toy.y = {0.5, 0.3, 0.8, 1.0};
    const auto hooks = toy.hooks();
    const auto result = elpd_lfo(hooks, hooks.T - 1, toy.chains, 7);
    REQUIRE(result.times.size() == 1);
    CHECK(result.times[0] == hooks.T);
    for (int j = 0; j < toy.chains; ++j)
        CHECK(result.elpd_per_chain[j] == result.lpd_per_chain[j][0]);
}

TEST_CASE("monotone information: more posterior samples, tighter LPD") {
    ConjugateLfo toy;
    toy.y = {1.1, 0.4, 0.9, 1.4};
    const auto hooks = toy.hooks();
    // variance of the LPD estimate over replicates shrinks with S
    auto lpd_var = [&](int S, int reps) {
        std::vector<double> vals;
        for (int r = 0; r < reps; ++r) {
            Rng rng(1000 + r);
            std::vector<std::vector<double>> samples;
            const auto [m, s] = toy.posterior(3);
            for (int i = 0; i < S; ++i) samples.push_back({m + s * rng.normal()});
            Rng aux(1);
            vals.push_back(log_predictive(samples, 4, hooks, aux));
        }
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= vals.size();
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        return var / (vals.size() - 1);
    };
    CHECK(lpd_var(800, 24) < lpd_var(8, 24));
}

TEST_CASE("soil LFO skips unobserved years and labels predicted times") {
    ModelSpec spec{Pools::OnePool, Site::Tarlee};
    ParameterVector th;
    auto cfg = make_sim_config(spec, th, 16, 5, false);  // sparse pattern
    const auto sim = simulate(cfg);

    SoilLfoConfig lfo_cfg;
    lfo_cfg.spec = spec;
    lfo_cfg.rbpf.particles = 50;
    lfo_cfg.mcmc.iterations = 600;
    lfo_cfg.mcmc.burn_in = 100;
    lfo_cfg.mcmc.stride = 10;
    lfo_cfg.chains = 2;
    const auto hooks = make_soil_lfo(sim.data, lfo_cfg);
    CHECK(hooks.T == 16);

    const auto result = elpd_lfo(hooks, 10, lfo_cfg.chains, 99);
    // sparse pattern observes years t = 2,3,4 then 7,10,13,16 (1-based);
    // beyond L=10 that leaves times 13 and 16
    CHECK(result.times == std::vector<int>{13, 16});
    for (double lpd : result.lpd_mean) CHECK(std::isfinite(lpd));
}

TEST_CASE("crop-only future observation under one sample is the KF predictive") {
    ModelSpec spec{Pools::OnePool, Site::Tarlee};
    ParameterVector th;
    auto cfg = make_sim_config(spec, th, 8, 21, true);
    auto sim = simulate(cfg);
    // keep only crop observations at the last year
    const int last_year = spec.start_year() + 7;
    for (int f = 0; f < kNumFields; ++f) {
        auto& toc = sim.data.fields[f].series[static_cast<int>(ObsKind::TOC)];
        toc.erase(last_year);
    }

    SoilLfoConfig lfo_cfg;
    lfo_cfg.spec = spec;
    lfo_cfg.rbpf.particles = 40;
    const auto hooks = make_soil_lfo(sim.data, lfo_cfg);

    const auto layout = ParamLayout::for_spec(spec);
    const auto flat = layout.from_params(th);
    Rng rng(3);
    const double lpd = log_predictive({flat}, 8, hooks, rng);

    // direct KF one-step contribution at the predicted year
    const auto window = sim.data.truncated_after(last_year);
    SoilModel model(spec, window, lfo_cfg.rbpf);
    double expect = 0.0;
    for (int f = 0; f < kNumFields; ++f) {
        std::vector<double> per_time;
        model.crop_loglik(th, f, &per_time);
        expect += per_time[7];
    }
    CHECK(lpd == doctest::Approx(expect).epsilon(1e-12));
}
