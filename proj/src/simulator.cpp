#include "soilc/simulator.hpp"

#include "soilc/distributions.hpp"
#include "soilc/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace soilc {

namespace {

std::vector<ObsKind> active_kinds(const ModelSpec& spec) {
    std::vector<ObsKind> kinds = {ObsKind::TOC, ObsKind::GW, ObsKind::W};
    if (spec.has_pasture()) kinds.push_back(ObsKind::P);
    if (spec.has_sorghum()) {
        kinds.push_back(ObsKind::GS);
        kinds.push_back(ObsKind::S);
    }
    if (spec.has_iom()) kinds.push_back(ObsKind::IOM);
    if (spec.pools == Pools::FivePool) {
        kinds.push_back(ObsKind::POC);
        kinds.push_back(ObsKind::H);
    }
    return kinds;
}

double latent_for_kind(const ModelSpec& spec, ObsKind kind, const double* crop,
                       const double* carbon, double x_iom) {
    switch (kind) {
        case ObsKind::TOC: return total_soc(spec, carbon, x_iom);
        case ObsKind::GW: return crop[CropIx::GW];
        case ObsKind::W: return crop[CropIx::W];
        case ObsKind::P: return crop[CropIx::P];
        case ObsKind::GS: return crop[CropIx::GS];
        case ObsKind::S: return crop[CropIx::S];
        case ObsKind::IOM: return x_iom;
        case ObsKind::H: return carbon[CarbonIx::H];
        case ObsKind::POC:
            return carbon[CarbonIx::D] + carbon[CarbonIx::B5] + carbon[CarbonIx::R];
    }
    return 0.0;
}

double obs_variance(const ParameterVector& th, ObsKind kind) {
    switch (kind) {
        case ObsKind::TOC: return th.s2e_toc;
        case ObsKind::GW: return th.s2e_gw;
        case ObsKind::W: return th.s2e_w;
        case ObsKind::P: return th.s2e_p;
        case ObsKind::GS: return th.s2e_gs;
        case ObsKind::S: return th.s2e_s;
        case ObsKind::IOM: return th.s2e_iom;
        case ObsKind::H: return th.s2e_h;
        case ObsKind::POC: return th.s2e_poc;
    }
    return 0.0;
}

}  // namespace

std::vector<int> sparse_obs_years(int start_year, int horizon) {
    std::vector<int> years;
    for (int t = 1; t < horizon; ++t)
        if (t <= 3 || (t % 3) == 0) years.push_back(start_year + t);
    return years;
}

std::vector<int> dense_obs_years(int start_year, int horizon) {
    std::vector<int> years;
    for (int t = 0; t < horizon; ++t) years.push_back(start_year + t);
    return years;
}

SimConfig make_sim_config(const ModelSpec& spec, const ParameterVector& theta, int horizon,
                          std::uint64_t seed, bool dense) {
    SimConfig cfg;
    cfg.spec = spec;
    cfg.theta = theta;
    cfg.horizon = horizon;
    cfg.seed = seed;
    const int y0 = spec.start_year();
    cfg.schedule = spec.site == Site::Tarlee ? tarlee_default_schedule(y0, y0 + horizon - 1)
                                             : brigalow_default_schedule(y0, y0 + horizon - 1);
    const auto years = dense ? dense_obs_years(y0, horizon) : sparse_obs_years(y0, horizon);
    for (ObsKind k : active_kinds(spec)) cfg.obs_years[static_cast<int>(k)] = years;
    return cfg;
}

SimResult simulate(const SimConfig& config) {
    const ModelSpec& spec = config.spec;
    if (config.horizon < 2) throw std::invalid_argument("simulate: horizon must be >= 2");
    if (auto err = config.theta.validate(spec); !err.empty()) throw std::invalid_argument(err);
    const int y0 = spec.start_year();
    for (int f = 0; f < kNumFields; ++f)
        for (int t = 0; t < config.horizon; ++t)
            if (!config.schedule.covers(f, y0 + t))
                throw std::invalid_argument("simulate: schedule does not cover horizon");

    const auto kinds = active_kinds(spec);
    for (int k = 0; k < kNumObsKinds; ++k)
        if (!config.obs_years[k].empty() &&
            std::find(kinds.begin(), kinds.end(), static_cast<ObsKind>(k)) == kinds.end())
            throw std::invalid_argument("simulate: observation kind not used by this model");

    Rng rng(config.seed);
    const ParameterVector& th = config.theta;
    const int cd = spec.crop_dim();
    const int kd = spec.carbon_dim();

    SimResult out;
    out.truth.resize(spec, config.horizon);
    out.truth.x_iom = spec.has_iom() ? th.x_iom : 0.0;
    out.data.schedule = config.schedule;

    std::vector<double> noise(std::max(cd, kd));
    for (int f = 0; f < kNumFields; ++f) {
        bool ok = false;
        for (int attempt = 0; attempt < config.max_constraint_retries && !ok; ++attempt) {
            for (int j = 0; j < cd; ++j) noise[j] = rng.normal();
            initial_crops(spec, th, noise, {out.truth.crop_at(f, 0), static_cast<size_t>(cd)});
            initial_carbon(spec, th, f, {out.truth.carbon_at(f, 0), static_cast<size_t>(kd)});
            ok = !bio_constraint_violated(
                spec, {out.truth.carbon_at(f, 0), static_cast<size_t>(kd)}, out.truth.x_iom);
            for (int t = 1; t < config.horizon && ok; ++t) {
                for (int j = 0; j < cd; ++j) noise[j] = rng.normal();
                step_crops(spec, {out.truth.crop_at(f, t - 1), static_cast<size_t>(cd)}, th, noise,
                           {out.truth.crop_at(f, t), static_cast<size_t>(cd)});
                const double input =
                    carbon_input({out.truth.crop_at(f, t), static_cast<size_t>(cd)},
                                 config.schedule.at(f, y0 + t), th, spec);
                for (int j = 0; j < kd; ++j) noise[j] = rng.normal();
                step_carbon(spec, {out.truth.carbon_at(f, t - 1), static_cast<size_t>(kd)}, input,
                            th, noise, {out.truth.carbon_at(f, t), static_cast<size_t>(kd)});
                ok = !bio_constraint_violated(
                    spec, {out.truth.carbon_at(f, t), static_cast<size_t>(kd)}, out.truth.x_iom);
            }
        }
        if (!ok)
            throw std::runtime_error(
                "simulate: BIO constraint retries exhausted; theta does not admit the 5% cap");

        for (int k = 0; k < kNumObsKinds; ++k) {
            const auto kind = static_cast<ObsKind>(k);
            for (int year : config.obs_years[k]) {
                const int t = year - y0;
                if (t < 0 || t >= config.horizon)
                    throw std::invalid_argument("simulate: observation year outside horizon");
                const double latent = latent_for_kind(spec, kind, out.truth.crop_at(f, t),
                                                      out.truth.carbon_at(f, t), out.truth.x_iom);
                const double sd = std::sqrt(obs_variance(th, kind));
                out.data.fields[f].set(kind, year, std::exp(std::log(latent) + sd * rng.normal()));
            }
        }
    }
    return out;
}

}  // namespace soilc
