#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "soilc/distributions.hpp"
#include "soilc/models.hpp"
#include "soilc/simulator.hpp"

#include <cmath>

using namespace soilc;

namespace {

ParameterVector noiseless_theta() {
    ParameterVector th;
    th.s2_eta = th.s2_eta_c = th.s2_eta_b = th.s2_eta_d = th.s2_eta_r = th.s2_eta_h = 0.0;
    th.s2_gw = th.s2_gs = th.s2_w = th.s2_s = th.s2_p = 0.0;
    th.s2e_toc = th.s2e_poc = th.s2e_gw = th.s2e_gs = 0.0;
    th.s2e_w = th.s2e_s = th.s2e_p = th.s2e_iom = th.s2e_h = 0.0;
    th.rho_gw = th.rho_gs = th.rho_p = 0.0;  // stationary draw collapses to the mean
    return th;
}

}  // namespace

TEST_CASE("noiseless simulation observes the deterministic path exactly") {
    ModelSpec spec{Pools::TwoPool, Site::Tarlee};
    auto th = noiseless_theta();
    auto cfg = make_sim_config(spec, th, 8, 1, true);
    const auto sim = simulate(cfg);
    for (int f = 0; f < kNumFields; ++f)
        for (int t = 0; t < 8; ++t) {
            const int year = spec.start_year() + t;
            const auto toc = sim.data.fields[f].get(ObsKind::TOC, year);
            REQUIRE(toc.has_value());
            CHECK(*toc == doctest::Approx(total_soc(sim.truth, spec, f, t)).epsilon(1e-14));
            const auto gw = sim.data.fields[f].get(ObsKind::GW, year);
            REQUIRE(gw.has_value());
            CHECK(*gw == doctest::Approx(sim.truth.crop_at(f, t)[CropIx::GW]).epsilon(1e-14));
        }
}

TEST_CASE("fallow-only one-pool decays geometrically") {
    ModelSpec spec{Pools::OnePool, Site::Tarlee};
    auto th = noiseless_theta();
    th.k_c = 0.2;
    SimConfig cfg;
    cfg.spec = spec;
    cfg.theta = th;
    cfg.horizon = 6;
    cfg.seed = 3;
    for (int f = 0; f < kNumFields; ++f)
        for (int y = 1978; y < 1978 + 6; ++y) cfg.schedule.set(f, y, Treatment::Fallow);
    const auto sim = simulate(cfg);
    for (int t = 1; t < 6; ++t)
        CHECK(sim.truth.carbon_at(0, t)[0] ==
              doctest::Approx(sim.truth.carbon_at(0, t - 1)[0] * std::exp(-0.2)).epsilon(1e-13));
}

TEST_CASE("fixed seed reproduces bit-identical output") {
    ModelSpec spec{Pools::FivePool, Site::Brigalow};
    ParameterVector th;
    auto cfg = make_sim_config(spec, th, 10, 99, false);
    const auto a = simulate(cfg);
    const auto b = simulate(cfg);
    for (int f = 0; f < kNumFields; ++f) {
        CHECK(a.truth.carbon[f] == b.truth.carbon[f]);
        CHECK(a.truth.crops[f] == b.truth.crops[f]);
        for (int k = 0; k < kNumObsKinds; ++k)
            CHECK(a.data.fields[f].series[k] == b.data.fields[f].series[k]);
    }
}

TEST_CASE("three-pool ground truth honours the BIO cap") {
    ModelSpec spec{Pools::ThreePool, Site::Tarlee};
    ParameterVector th;
    th.s2_eta_c = 0.01;
    th.s2_eta_b = 0.04;
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        auto cfg = make_sim_config(spec, th, 15, seed, false);
        const auto sim = simulate(cfg);
        for (int f = 0; f < kNumFields; ++f)
            for (int t = 0; t < 15; ++t)
                CHECK(sim.truth.carbon_at(f, t)[CarbonIx::B3] <=
                      0.05 * total_soc(sim.truth, spec, f, t) + 1e-12);
    }
}

TEST_CASE("single-step transition moments match the log-normal law") {
    ModelSpec spec{Pools::OnePool, Site::Tarlee};
    ParameterVector th;
    th.k_c = 0.1;
    th.s2_eta = 0.04;
    const double x_prev = 40.0, input = 1.5;
    const double mu = std::log(x_prev * std::exp(-0.1) + input);

    Rng rng(12345);
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    double next[1], prev[1] = {x_prev}, noise[1];
    for (int i = 0; i < n; ++i) {
        noise[0] = rng.normal();
        step_carbon(spec, prev, input, th, noise, next);
        sum += next[0];
        sum2 += next[0] * next[0];
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    const double exact_mean = std::exp(mu + 0.02);
    const double exact_var = (std::exp(0.04) - 1.0) * std::exp(2.0 * mu + 0.04);
    // 3 standard errors of the Monte-Carlo moments
    const double se_mean = std::sqrt(exact_var / n);
    CHECK(std::abs(mean - exact_mean) < 3.0 * se_mean);
    CHECK(std::abs(var - exact_var) < 0.05 * exact_var);
}

namespace {

// Joint log-density of the simulated latent path and observations under a
// parameter vector (one-pool Tarlee), written out directly from the model
// equations so it does not share the sampler's code path.
double joint_score(const SimResult& sim, const ModelSpec& spec, const ParameterVector& th) {
    double total = 0.0;
    for (int f = 0; f < kNumFields; ++f) {
        for (int t = 1; t < sim.truth.years; ++t) {
            const double* prev_c = sim.truth.crop_at(f, t - 1);
            const double* cur_c = sim.truth.crop_at(f, t);
            total += lognorm_logpdf(
                cur_c[CropIx::GW],
                th.mu_gw + th.rho_gw * (std::log(prev_c[CropIx::GW]) - th.mu_gw),
                std::sqrt(th.s2_gw));
            total += lognorm_logpdf(cur_c[CropIx::W],
                                    std::log(th.h_w) + std::log(cur_c[CropIx::GW]),
                                    std::sqrt(th.s2_w));
            total += lognorm_logpdf(cur_c[CropIx::P],
                                    th.mu_p + th.rho_p * (std::log(prev_c[CropIx::P]) - th.mu_p),
                                    std::sqrt(th.s2_p));
            const double input =
                carbon_input({cur_c, 3}, sim.data.schedule.at(f, sim.truth.start_year + t), th,
                             spec);
            const double decay_mean =
                sim.truth.carbon_at(f, t - 1)[0] * std::exp(-th.k_c) + input;
            total += lognorm_logpdf(sim.truth.carbon_at(f, t)[0], std::log(decay_mean),
                                    std::sqrt(th.s2_eta));
        }
        for (int t = 0; t < sim.truth.years; ++t)
            total += obs_logdensity(spec, {sim.truth.crop_at(f, t), 3},
                                    {sim.truth.carbon_at(f, t), 1}, sim.truth.x_iom,
                                    sim.data.fields[f], sim.truth.start_year + t, th);
    }
    return total;
}

}  // namespace

TEST_CASE("joint density at the truth beats a perturbed parameter") {
    ModelSpec spec{Pools::OnePool, Site::Tarlee};
    ParameterVector truth;
    truth.k_c = 0.0665;
    ParameterVector wrong = truth;
    wrong.k_c = 0.3;
    wrong.mu_gw = 1.6;
    wrong.s2_eta = 0.2;

    int wins = 0;
    const int reps = 50;
    for (int rep = 0; rep < reps; ++rep) {
        auto cfg = make_sim_config(spec, truth, 10, 1000 + rep, true);
        const auto sim = simulate(cfg);
        if (joint_score(sim, spec, truth) > joint_score(sim, spec, wrong)) ++wins;
    }
    CHECK(wins >= 45);
}

TEST_CASE("observation years outside the horizon are rejected") {
    ModelSpec spec{Pools::OnePool, Site::Tarlee};
    ParameterVector th;
    auto cfg = make_sim_config(spec, th, 5, 1, false);
    cfg.obs_years[static_cast<int>(ObsKind::TOC)].push_back(2050);
    CHECK_THROWS(simulate(cfg));
}
