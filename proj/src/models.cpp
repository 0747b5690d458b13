#include "soilc/models.hpp"

#include "soilc/distributions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace soilc {

double carbon_input(std::span<const double> crop, Treatment treatment, const ParameterVector& th,
                    const ModelSpec& spec) {
    if (!treatment_valid_for_site(treatment, spec.site)) {
        std::ostringstream os;
        os << "treatment " << to_string(treatment) << " invalid for site " << to_string(spec.site);
        throw std::invalid_argument(os.str());
    }
    const double c = th.c;
    switch (treatment) {
        case Treatment::WheatForGrain: {
            const double xw = crop[CropIx::W], xgw = crop[CropIx::GW];
            return c * (xw - xgw) + c * th.r_w * xw;
        }
        case Treatment::WheatForHay: {
            const double xw = crop[CropIx::W];
            return c * th.p * xw + c * th.r_w * xw;
        }
        case Treatment::Pasture: {
            const double xp = crop[CropIx::P];
            return c * xp + c * th.r_p * xp;
        }
        case Treatment::PastureForHay: {
            const double xp = crop[CropIx::P];
            return c * th.p * xp + c * th.r_p * xp;
        }
        case Treatment::SorghumForGrain: {
            const double xs = crop[CropIx::S], xgs = crop[CropIx::GS];
            return c * (xs - xgs) + c * th.r_s * xs;
        }
        case Treatment::SorghumForHay: {
            const double xs = crop[CropIx::S];
            return c * th.p * xs + c * th.r_s * xs;
        }
        case Treatment::Fallow:
        case Treatment::Cleared: return 0.0;
    }
    return 0.0;
}

void step_carbon(const ModelSpec& spec, std::span<const double> prev, double input,
                 const ParameterVector& th, std::span<const double> noise,
                 std::span<double> next) {
    const double dt = spec.dt;
    switch (spec.pools) {
        case Pools::OnePool:
        case Pools::TwoPool: {
            const double mean = prev[CarbonIx::C] * std::exp(-th.k_c * dt) + input;
            next[CarbonIx::C] = std::exp(std::log(mean) + std::sqrt(th.s2_eta) * noise[0]);
            break;
        }
        case Pools::ThreePool: {
            const double xc = prev[CarbonIx::C], xb = prev[CarbonIx::B3];
            const double dec_c = 1.0 - std::exp(-th.k_c * dt);
            const double dec_b = 1.0 - std::exp(-th.k_b * dt);
            const double mc = xc * std::exp(-th.k_c * dt) + input + xb * dec_b * th.pi_bc;
            const double mb = xb * std::exp(-th.k_b * dt) + xc * dec_c * th.pi_cb + xb * dec_b * th.pi_bb;
            next[CarbonIx::C] = std::exp(std::log(mc) + std::sqrt(th.s2_eta_c) * noise[0]);
            next[CarbonIx::B3] = std::exp(std::log(mb) + std::sqrt(th.s2_eta_b) * noise[1]);
            break;
        }
        case Pools::FivePool: {
            const double xd = prev[CarbonIx::D], xr = prev[CarbonIx::R];
            const double xh = prev[CarbonIx::H], xb = prev[CarbonIx::B5];
            const double dec_d = 1.0 - std::exp(-th.k_d * dt);
            const double dec_r = 1.0 - std::exp(-th.k_r * dt);
            const double dec_h = 1.0 - std::exp(-th.k_h * dt);
            const double dec_b = 1.0 - std::exp(-th.k_b * dt);
            const double md = xd * std::exp(-th.k_d * dt) + th.p_d * input;
            const double mr = xr * std::exp(-th.k_r * dt) + (1.0 - th.p_d) * input;
            const double mh = xh * std::exp(-th.k_h * dt) + xd * dec_d * th.pi_dh +
                              xr * dec_r * th.pi_rh + xh * dec_h * th.pi_hh + xb * dec_b * th.pi_bh;
            const double mb = xb * std::exp(-th.k_b * dt) + xd * dec_d * th.pi_db +
                              xr * dec_r * th.pi_rb + xh * dec_h * th.pi_hb + xb * dec_b * th.pi_bb;
            next[CarbonIx::D] = std::exp(std::log(md) + std::sqrt(th.s2_eta_d) * noise[0]);
            next[CarbonIx::R] = std::exp(std::log(mr) + std::sqrt(th.s2_eta_r) * noise[1]);
            next[CarbonIx::H] = std::exp(std::log(mh) + std::sqrt(th.s2_eta_h) * noise[2]);
            next[CarbonIx::B5] = std::exp(std::log(mb) + std::sqrt(th.s2_eta_b) * noise[3]);
            break;
        }
    }
}

void step_crops(const ModelSpec& spec, std::span<const double> prev, const ParameterVector& th,
                std::span<const double> noise, std::span<double> next) {
    // grain AR(1) on log scale, total conditional on current grain
    const double lgw = th.mu_gw + th.rho_gw * (std::log(prev[CropIx::GW]) - th.mu_gw) +
                       std::sqrt(th.s2_gw) * noise[CropIx::GW];
    next[CropIx::GW] = std::exp(lgw);
    next[CropIx::W] = std::exp(std::log(th.h_w) + lgw + std::sqrt(th.s2_w) * noise[CropIx::W]);
    if (spec.has_pasture()) {
        const double lp = th.mu_p + th.rho_p * (std::log(prev[CropIx::P]) - th.mu_p) +
                          std::sqrt(th.s2_p) * noise[CropIx::P];
        next[CropIx::P] = std::exp(lp);
    }
    if (spec.has_sorghum()) {
        const double lgs = th.mu_gs + th.rho_gs * (std::log(prev[CropIx::GS]) - th.mu_gs) +
                           std::sqrt(th.s2_gs) * noise[CropIx::GS];
        next[CropIx::GS] = std::exp(lgs);
        next[CropIx::S] = std::exp(std::log(th.h_s) + lgs + std::sqrt(th.s2_s) * noise[CropIx::S]);
    }
}

void initial_crops(const ModelSpec& spec, const ParameterVector& th,
                   std::span<const double> noise, std::span<double> out) {
    const double lgw =
        th.mu_gw + std::sqrt(th.s2_gw / (1.0 - th.rho_gw * th.rho_gw)) * noise[CropIx::GW];
    out[CropIx::GW] = std::exp(lgw);
    out[CropIx::W] = std::exp(std::log(th.h_w) + lgw + std::sqrt(th.s2_w) * noise[CropIx::W]);
    if (spec.has_pasture()) {
        const double lp =
            th.mu_p + std::sqrt(th.s2_p / (1.0 - th.rho_p * th.rho_p)) * noise[CropIx::P];
        out[CropIx::P] = std::exp(lp);
    }
    if (spec.has_sorghum()) {
        const double lgs =
            th.mu_gs + std::sqrt(th.s2_gs / (1.0 - th.rho_gs * th.rho_gs)) * noise[CropIx::GS];
        out[CropIx::GS] = std::exp(lgs);
        out[CropIx::S] = std::exp(std::log(th.h_s) + lgs + std::sqrt(th.s2_s) * noise[CropIx::S]);
    }
}

void initial_carbon(const ModelSpec& spec, const ParameterVector& th, int field,
                    std::span<double> out) {
    const double x0 = th.x_c0[static_cast<size_t>(field)];
    switch (spec.pools) {
        case Pools::OnePool:
        case Pools::TwoPool: out[CarbonIx::C] = x0; break;
        case Pools::ThreePool:
            // 2% of the decomposable mass starts in BIO, safely inside the 5% cap.
            out[CarbonIx::C] = 0.98 * x0;
            out[CarbonIx::B3] = 0.02 * x0;
            break;
        case Pools::FivePool:
            // Near-equilibrium RothC pool shares of the decomposable mass.
            out[CarbonIx::D] = 0.01 * x0;
            out[CarbonIx::R] = 0.12 * x0;
            out[CarbonIx::H] = 0.85 * x0;
            out[CarbonIx::B5] = 0.02 * x0;
            break;
    }
}

namespace {

double lognorm_obs(double y, double latent_sum, double var) {
    return lognorm_logpdf(y, std::log(latent_sum), std::sqrt(var));
}

}  // namespace

double carbon_obs_logdensity(const ModelSpec& spec, std::span<const double> carbon, double x_iom,
                             const FieldObservations& obs, int year, const ParameterVector& th) {
    double total = 0.0;
    if (auto y = obs.get(ObsKind::TOC, year))
        total += lognorm_obs(*y, total_soc(spec, carbon.data(), x_iom), th.s2e_toc);
    if (spec.has_iom())
        if (auto y = obs.get(ObsKind::IOM, year)) total += lognorm_obs(*y, x_iom, th.s2e_iom);
    if (spec.pools == Pools::FivePool) {
        if (auto y = obs.get(ObsKind::POC, year))
            total += lognorm_obs(
                *y, carbon[CarbonIx::D] + carbon[CarbonIx::B5] + carbon[CarbonIx::R], th.s2e_poc);
        if (auto y = obs.get(ObsKind::H, year))
            total += lognorm_obs(*y, carbon[CarbonIx::H], th.s2e_h);
    }
    return total;
}

double obs_logdensity(const ModelSpec& spec, std::span<const double> crop,
                      std::span<const double> carbon, double x_iom,
                      const FieldObservations& obs, int year, const ParameterVector& th) {
    double total = carbon_obs_logdensity(spec, carbon, x_iom, obs, year, th);
    if (auto y = obs.get(ObsKind::GW, year)) total += lognorm_obs(*y, crop[CropIx::GW], th.s2e_gw);
    if (auto y = obs.get(ObsKind::W, year)) total += lognorm_obs(*y, crop[CropIx::W], th.s2e_w);
    if (spec.has_pasture())
        if (auto y = obs.get(ObsKind::P, year)) total += lognorm_obs(*y, crop[CropIx::P], th.s2e_p);
    if (spec.has_sorghum()) {
        if (auto y = obs.get(ObsKind::GS, year))
            total += lognorm_obs(*y, crop[CropIx::GS], th.s2e_gs);
        if (auto y = obs.get(ObsKind::S, year)) total += lognorm_obs(*y, crop[CropIx::S], th.s2e_s);
    }
    return total;
}

double emitted_co2_step(const ModelSpec& spec, std::span<const double> prev,
                        const ParameterVector& th) {
    const double dt = spec.dt;
    auto decayed = [&](double mass, double rate) { return mass * (1.0 - std::exp(-rate * dt)); };
    switch (spec.pools) {
        case Pools::OnePool:
        case Pools::TwoPool: return decayed(prev[CarbonIx::C], th.k_c);
        case Pools::ThreePool:
            return decayed(prev[CarbonIx::C], th.k_c) * (1.0 - th.pi_cb) +
                   decayed(prev[CarbonIx::B3], th.k_b) * (1.0 - th.pi_bc - th.pi_bb);
        case Pools::FivePool:
            return decayed(prev[CarbonIx::D], th.k_d) * (1.0 - th.pi_dh - th.pi_db) +
                   decayed(prev[CarbonIx::R], th.k_r) * (1.0 - th.pi_rh - th.pi_rb) +
                   decayed(prev[CarbonIx::H], th.k_h) * (1.0 - th.pi_hh - th.pi_hb) +
                   decayed(prev[CarbonIx::B5], th.k_b) * (1.0 - th.pi_bh - th.pi_bb);
    }
    return 0.0;
}

std::vector<std::array<double, kNumFields>> emitted_co2(const LatentTrajectory& traj,
                                                        const ModelSpec& spec,
                                                        const ParameterVector& th) {
    std::vector<std::array<double, kNumFields>> out(
        static_cast<size_t>(traj.years), std::array<double, kNumFields>{0.0, 0.0, 0.0});
    for (int f = 0; f < kNumFields; ++f)
        for (int t = 1; t < traj.years; ++t)
            out[t][f] = emitted_co2_step(
                spec, std::span<const double>(traj.carbon_at(f, t - 1), traj.carbon_dim), th);
    return out;
}

bool bio_constraint_violated(const ModelSpec& spec, std::span<const double> carbon, double x_iom) {
    if (spec.pools != Pools::ThreePool) return false;
    return carbon[CarbonIx::B3] > 0.05 * total_soc(spec, carbon.data(), x_iom);
}

}  // namespace soilc
