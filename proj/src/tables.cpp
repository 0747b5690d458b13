#include "soilc/mcmc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace soilc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Prior normal(double m, double s) { return {Prior::Kind::Normal, m, s, 0, 0}; }
Prior lognormal(double mu, double sig) { return {Prior::Kind::LogNormal, mu, sig, 0, 0}; }
Prior truncnorm(double m, double s, double lo = 0.0, double hi = kInf) {
    return {Prior::Kind::TruncNormal, m, s, lo, hi};
}
Prior betap(double a, double b) { return {Prior::Kind::Beta, a, b, 0, 0}; }
Prior unif(double lo, double hi) { return {Prior::Kind::Uniform, lo, hi, 0, 0}; }
Prior invgamma(double a, double b) { return {Prior::Kind::InvGamma, a, b, 0, 0}; }

Proposal qn(double sd) { return {Proposal::Kind::Normal, sd, 0, 0, 0}; }
Proposal qtn(double sd, double lo = 0.0, double hi = kInf) {
    return {Proposal::Kind::TruncNormal, sd, lo, hi, 0};
}
Proposal qrel(double divisor, double lo = 0.0, double hi = kInf) {
    return {Proposal::Kind::TruncNormal, 0, lo, hi, divisor};
}
}  // namespace

const char* to_string(ParamId id) {
    switch (id) {
        case ParamId::KC: return "K_C";
        case ParamId::KD: return "K_D";
        case ParamId::KR: return "K_R";
        case ParamId::KH: return "K_H";
        case ParamId::KB: return "K_B";
        case ParamId::PiCB: return "pi_CB";
        case ParamId::PiBC: return "pi_BC";
        case ParamId::PiBB: return "pi_BB";
        case ParamId::PiDH: return "pi_DH";
        case ParamId::PiRH: return "pi_RH";
        case ParamId::PiHH: return "pi_HH";
        case ParamId::PiBH: return "pi_BH";
        case ParamId::PiDB: return "pi_DB";
        case ParamId::PiRB: return "pi_RB";
        case ParamId::PiHB: return "pi_HB";
        case ParamId::PD: return "P_D";
        case ParamId::C: return "c";
        case ParamId::RW: return "r_W";
        case ParamId::RS: return "r_S";
        case ParamId::RP: return "r_P";
        case ParamId::P: return "p";
        case ParamId::HW: return "h_W";
        case ParamId::HS: return "h_S";
        case ParamId::MuGW: return "mu_GW";
        case ParamId::MuGS: return "mu_GS";
        case ParamId::MuP: return "mu_P";
        case ParamId::RhoGW: return "rho_GW";
        case ParamId::RhoGS: return "rho_GS";
        case ParamId::RhoP: return "rho_P";
        case ParamId::S2Eta: return "sigma2_eta";
        case ParamId::S2EtaC: return "sigma2_etaC";
        case ParamId::S2EtaB: return "sigma2_etaB";
        case ParamId::S2EtaD: return "sigma2_etaD";
        case ParamId::S2EtaR: return "sigma2_etaR";
        case ParamId::S2EtaH: return "sigma2_etaH";
        case ParamId::S2GW: return "sigma2_GW";
        case ParamId::S2GS: return "sigma2_GS";
        case ParamId::S2W: return "sigma2_W";
        case ParamId::S2S: return "sigma2_S";
        case ParamId::S2P: return "sigma2_P";
        case ParamId::XC0F1: return "X_C0_1";
        case ParamId::XC0F2: return "X_C0_2";
        case ParamId::XC0F3: return "X_C0_3";
        case ParamId::XIOM: return "X_IOM";
    }
    return "?";
}

ParamLayout ParamLayout::for_spec(const ModelSpec& spec) {
    ParamLayout layout;
    auto add = [&](ParamId id) { layout.ids.push_back(id); };

    switch (spec.pools) {
        case Pools::OnePool:
        case Pools::TwoPool: add(ParamId::KC); break;
        case Pools::ThreePool:
            add(ParamId::KC);
            add(ParamId::KB);
            add(ParamId::PiCB);
            add(ParamId::PiBC);
            add(ParamId::PiBB);
            break;
        case Pools::FivePool:
            add(ParamId::KD);
            add(ParamId::KR);
            add(ParamId::KH);
            add(ParamId::KB);
            add(ParamId::PD);
            add(ParamId::PiDH);
            add(ParamId::PiRH);
            add(ParamId::PiHH);
            add(ParamId::PiBH);
            add(ParamId::PiDB);
            add(ParamId::PiRB);
            add(ParamId::PiHB);
            add(ParamId::PiBB);
            break;
    }

    add(ParamId::C);
    add(ParamId::RW);
    add(ParamId::P);
    add(ParamId::HW);
    add(ParamId::MuGW);
    add(ParamId::RhoGW);
    if (spec.has_pasture()) {
        add(ParamId::RP);
        add(ParamId::MuP);
        add(ParamId::RhoP);
    }
    if (spec.has_sorghum()) {
        add(ParamId::RS);
        add(ParamId::HS);
        add(ParamId::MuGS);
        add(ParamId::RhoGS);
    }

    switch (spec.pools) {
        case Pools::OnePool:
        case Pools::TwoPool: add(ParamId::S2Eta); break;
        case Pools::ThreePool:
            add(ParamId::S2EtaC);
            add(ParamId::S2EtaB);
            break;
        case Pools::FivePool:
            add(ParamId::S2EtaD);
            add(ParamId::S2EtaR);
            add(ParamId::S2EtaH);
            add(ParamId::S2EtaB);
            break;
    }
    add(ParamId::S2GW);
    add(ParamId::S2W);
    if (spec.has_pasture()) add(ParamId::S2P);
    if (spec.has_sorghum()) {
        add(ParamId::S2GS);
        add(ParamId::S2S);
    }

    add(ParamId::XC0F1);
    add(ParamId::XC0F2);
    add(ParamId::XC0F3);
    if (spec.has_iom()) add(ParamId::XIOM);

    layout.names.reserve(layout.ids.size());
    for (ParamId id : layout.ids) layout.names.push_back(to_string(id));
    return layout;
}

int ParamLayout::index_of(ParamId id) const {
    for (size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == id) return static_cast<int>(i);
    return -1;
}

ParameterVector ParamLayout::to_params(std::span<const double> flat) const {
    if (flat.size() != ids.size()) throw std::invalid_argument("to_params: dimension mismatch");
    ParameterVector th;
    for (size_t i = 0; i < ids.size(); ++i) {
        const double v = flat[i];
        switch (ids[i]) {
            case ParamId::KC: th.k_c = v; break;
            case ParamId::KD: th.k_d = v; break;
            case ParamId::KR: th.k_r = v; break;
            case ParamId::KH: th.k_h = v; break;
            case ParamId::KB: th.k_b = v; break;
            case ParamId::PiCB: th.pi_cb = v; break;
            case ParamId::PiBC: th.pi_bc = v; break;
            case ParamId::PiBB: th.pi_bb = v; break;
            case ParamId::PiDH: th.pi_dh = v; break;
            case ParamId::PiRH: th.pi_rh = v; break;
            case ParamId::PiHH: th.pi_hh = v; break;
            case ParamId::PiBH: th.pi_bh = v; break;
            case ParamId::PiDB: th.pi_db = v; break;
            case ParamId::PiRB: th.pi_rb = v; break;
            case ParamId::PiHB: th.pi_hb = v; break;
            case ParamId::PD: th.p_d = v; break;
            case ParamId::C: th.c = v; break;
            case ParamId::RW: th.r_w = v; break;
            case ParamId::RS: th.r_s = v; break;
            case ParamId::RP: th.r_p = v; break;
            case ParamId::P: th.p = v; break;
            case ParamId::HW: th.h_w = v; break;
            case ParamId::HS: th.h_s = v; break;
            case ParamId::MuGW: th.mu_gw = v; break;
            case ParamId::MuGS: th.mu_gs = v; break;
            case ParamId::MuP: th.mu_p = v; break;
            case ParamId::RhoGW: th.rho_gw = v; break;
            case ParamId::RhoGS: th.rho_gs = v; break;
            case ParamId::RhoP: th.rho_p = v; break;
            case ParamId::S2Eta: th.s2_eta = v; break;
            case ParamId::S2EtaC: th.s2_eta_c = v; break;
            case ParamId::S2EtaB: th.s2_eta_b = v; break;
            case ParamId::S2EtaD: th.s2_eta_d = v; break;
            case ParamId::S2EtaR: th.s2_eta_r = v; break;
            case ParamId::S2EtaH: th.s2_eta_h = v; break;
            case ParamId::S2GW: th.s2_gw = v; break;
            case ParamId::S2GS: th.s2_gs = v; break;
            case ParamId::S2W: th.s2_w = v; break;
            case ParamId::S2S: th.s2_s = v; break;
            case ParamId::S2P: th.s2_p = v; break;
            case ParamId::XC0F1: th.x_c0[0] = v; break;
            case ParamId::XC0F2: th.x_c0[1] = v; break;
            case ParamId::XC0F3: th.x_c0[2] = v; break;
            case ParamId::XIOM: th.x_iom = v; break;
        }
    }
    return th;
}

std::vector<double> ParamLayout::from_params(const ParameterVector& th) const {
    std::vector<double> flat(ids.size());
    for (size_t i = 0; i < ids.size(); ++i) {
        switch (ids[i]) {
            case ParamId::KC: flat[i] = th.k_c; break;
            case ParamId::KD: flat[i] = th.k_d; break;
            case ParamId::KR: flat[i] = th.k_r; break;
            case ParamId::KH: flat[i] = th.k_h; break;
            case ParamId::KB: flat[i] = th.k_b; break;
            case ParamId::PiCB: flat[i] = th.pi_cb; break;
            case ParamId::PiBC: flat[i] = th.pi_bc; break;
            case ParamId::PiBB: flat[i] = th.pi_bb; break;
            case ParamId::PiDH: flat[i] = th.pi_dh; break;
            case ParamId::PiRH: flat[i] = th.pi_rh; break;
            case ParamId::PiHH: flat[i] = th.pi_hh; break;
            case ParamId::PiBH: flat[i] = th.pi_bh; break;
            case ParamId::PiDB: flat[i] = th.pi_db; break;
            case ParamId::PiRB: flat[i] = th.pi_rb; break;
            case ParamId::PiHB: flat[i] = th.pi_hb; break;
            case ParamId::PD: flat[i] = th.p_d; break;
            case ParamId::C: flat[i] = th.c; break;
            case ParamId::RW: flat[i] = th.r_w; break;
            case ParamId::RS: flat[i] = th.r_s; break;
            case ParamId::RP: flat[i] = th.r_p; break;
            case ParamId::P: flat[i] = th.p; break;
            case ParamId::HW: flat[i] = th.h_w; break;
            case ParamId::HS: flat[i] = th.h_s; break;
            case ParamId::MuGW: flat[i] = th.mu_gw; break;
            case ParamId::MuGS: flat[i] = th.mu_gs; break;
            case ParamId::MuP: flat[i] = th.mu_p; break;
            case ParamId::RhoGW: flat[i] = th.rho_gw; break;
            case ParamId::RhoGS: flat[i] = th.rho_gs; break;
            case ParamId::RhoP: flat[i] = th.rho_p; break;
            case ParamId::S2Eta: flat[i] = th.s2_eta; break;
            case ParamId::S2EtaC: flat[i] = th.s2_eta_c; break;
            case ParamId::S2EtaB: flat[i] = th.s2_eta_b; break;
            case ParamId::S2EtaD: flat[i] = th.s2_eta_d; break;
            case ParamId::S2EtaR: flat[i] = th.s2_eta_r; break;
            case ParamId::S2EtaH: flat[i] = th.s2_eta_h; break;
            case ParamId::S2GW: flat[i] = th.s2_gw; break;
            case ParamId::S2GS: flat[i] = th.s2_gs; break;
            case ParamId::S2W: flat[i] = th.s2_w; break;
            case ParamId::S2S: flat[i] = th.s2_s; break;
            case ParamId::S2P: flat[i] = th.s2_p; break;
            case ParamId::XC0F1: flat[i] = th.x_c0[0]; break;
            case ParamId::XC0F2: flat[i] = th.x_c0[1]; break;
            case ParamId::XC0F3: flat[i] = th.x_c0[2]; break;
            case ParamId::XIOM: flat[i] = th.x_iom; break;
        }
    }
    return flat;
}

PriorSet default_priors(const ModelSpec& spec, const ParamLayout& layout) {
    const bool brig = spec.site == Site::Brigalow;
    PriorSet set;
    set.priors.reserve(layout.ids.size());
    for (ParamId id : layout.ids) {
        Prior pr;
        switch (id) {
            case ParamId::KC:
            case ParamId::KD: pr = lognormal(-2.71, 0.127); break;
            case ParamId::KR: pr = brig ? truncnorm(0.15, 0.075) : lognormal(-2.5, 0.135); break;
            case ParamId::KH: pr = truncnorm(0.02, 0.01); break;
            case ParamId::KB: pr = truncnorm(0.66, 0.3); break;
            case ParamId::PiCB:
            case ParamId::PiBC:
            case ParamId::PiBB:
            case ParamId::PiDH:
            case ParamId::PiRH:
            case ParamId::PiHH:
            case ParamId::PiBH:
            case ParamId::PiDB:
            case ParamId::PiRB:
            case ParamId::PiHB:
            case ParamId::PD: pr = unif(0.0, 1.0); break;
            case ParamId::C: pr = normal(0.45, 0.01); break;
            case ParamId::RW:
            case ParamId::RS: pr = normal(0.5, 0.067); break;
            case ParamId::RP: pr = normal(1.0, 0.125); break;
            case ParamId::P: pr = betap(89.9, 809.1); break;
            case ParamId::HW: pr = lognormal(0.825, 0.36); break;
            case ParamId::HS: pr = lognormal(0.46, 1.6); break;
            case ParamId::MuGW:
            case ParamId::MuGS: pr = normal(0.42, 1.18); break;
            case ParamId::MuP: pr = normal(1.41, 1.81); break;
            case ParamId::RhoGW:
            case ParamId::RhoGS:
            case ParamId::RhoP: pr = unif(-1.0, 1.0); break;
            case ParamId::S2EtaR:
                pr = brig ? truncnorm(0.0, 0.5) : invgamma(0.01, 0.01);
                break;
            case ParamId::S2EtaB:
            case ParamId::S2EtaH:
                pr = brig ? truncnorm(0.0, 0.5) : invgamma(0.001, 0.001);
                break;
            case ParamId::S2Eta:
            case ParamId::S2EtaC:
            case ParamId::S2EtaD:
            case ParamId::S2GW:
            case ParamId::S2GS:
            case ParamId::S2W:
            case ParamId::S2S:
            case ParamId::S2P: pr = invgamma(0.001, 0.001); break;
            case ParamId::XC0F1:
            case ParamId::XC0F2:
            case ParamId::XC0F3: pr = brig ? truncnorm(60.0, 15.0) : truncnorm(40.0, 10.0); break;
            case ParamId::XIOM: pr = brig ? truncnorm(12.0, 2.0) : truncnorm(4.0, 0.5); break;
        }
        set.priors.push_back(pr);
    }
    // The near-improper inverse-gamma priors produce astronomically large
    // initial variance draws, so chains initialise those components from a
    // moderate log-normal instead.
    set.init = set.priors;
    for (size_t i = 0; i < set.init.size(); ++i)
        if (set.init[i].kind == Prior::Kind::InvGamma) set.init[i] = lognormal(-3.0, 1.0);
    return set;
}

namespace {

// Tarlee one/two/three-pool base proposals.
Proposal tarlee_base_proposal(ParamId id) {
    switch (id) {
        case ParamId::KC: return qn(0.001);
        case ParamId::KB: return qtn(0.09);
        case ParamId::C: return qtn(0.005, 0.0, 1.0);
        case ParamId::RW: return qtn(0.05);
        case ParamId::RP: return qtn(0.05);
        case ParamId::P: return qtn(0.005, 0.0, 1.0);
        case ParamId::HW: return qtn(0.05);
        case ParamId::MuGW: return qn(0.05);
        case ParamId::MuP: return qn(0.05);
        case ParamId::RhoGW: return qtn(0.05, -1.0, 1.0);
        case ParamId::RhoP: return qtn(0.1, -1.0, 1.0);
        case ParamId::S2Eta: return qtn(0.001);
        case ParamId::S2EtaC: return qtn(0.001);
        case ParamId::S2EtaB: return qtn(0.01);
        case ParamId::S2GW: return qrel(20.0);
        case ParamId::S2W: return qtn(0.001);
        case ParamId::S2P: return qtn(0.1);
        case ParamId::PiCB: return qtn(0.05, 0.0, 1.0);
        case ParamId::PiBC: return qtn(0.1, 0.0, 1.0);
        case ParamId::PiBB: return qtn(0.1, 0.0, 1.0);
        case ParamId::XC0F1:
        case ParamId::XC0F2:
        case ParamId::XC0F3: return qtn(5.0);
        case ParamId::XIOM: return qtn(0.9);
        default: throw std::invalid_argument("no Tarlee base proposal for parameter");
    }
}

Proposal tarlee_five_pool_proposal(ParamId id) {
    switch (id) {
        case ParamId::KD: return qtn(0.005);
        case ParamId::KB: return qtn(0.09);
        case ParamId::KR: return qtn(0.005);
        case ParamId::KH: return qtn(0.006);
        case ParamId::C: return qtn(0.005, 0.0, 1.0);
        case ParamId::RW: return qtn(0.05);
        case ParamId::RP: return qtn(0.05);
        case ParamId::P: return qtn(0.005, 0.0, 1.0);
        case ParamId::HW: return qtn(0.05);
        case ParamId::MuGW: return qn(0.075);
        case ParamId::MuP: return qn(0.1);
        case ParamId::RhoGW: return qtn(0.25, -1.0, 1.0);
        case ParamId::RhoP: return qtn(0.2, -1.0, 1.0);
        case ParamId::S2EtaD: return qtn(0.1);
        case ParamId::S2GW: return qrel(20.0);
        case ParamId::S2W: return qtn(0.01);
        case ParamId::S2P: return qtn(0.1);
        case ParamId::XIOM: return qtn(0.09);
        case ParamId::XC0F1:
        case ParamId::XC0F2:
        case ParamId::XC0F3: return qtn(1.3);
        case ParamId::S2EtaB: return qtn(0.1);
        case ParamId::PD: return qtn(0.15, 0.0, 1.0);
        case ParamId::S2EtaR: return qtn(0.09);
        case ParamId::S2EtaH: return qtn(0.01);
        case ParamId::PiDB: return qtn(0.05, 0.0, 1.0);
        case ParamId::PiBB: return qtn(0.15, 0.0, 1.0);
        case ParamId::PiDH: return qtn(0.09, 0.0, 1.0);
        case ParamId::PiRH: return qtn(0.1, 0.0, 1.0);
        case ParamId::PiHH: return qtn(0.1, 0.0, 1.0);
        case ParamId::PiBH: return qtn(0.015, 0.0, 1.0);
        case ParamId::PiRB: return qtn(0.09, 0.0, 1.0);
        case ParamId::PiHB: return qtn(0.1, 0.0, 1.0);
        default: throw std::invalid_argument("no Tarlee five-pool proposal for parameter");
    }
}

// Brigalow one-pool proposals; two-pool and higher override a few scales.
Proposal brigalow_base_proposal(ParamId id, Pools pools) {
    const bool two_plus = pools != Pools::OnePool;
    switch (id) {
        case ParamId::KC: return two_plus ? qn(0.01) : qn(0.002);
        case ParamId::C: return qtn(0.005, 0.0, 1.0);
        case ParamId::RW: return qtn(0.05);
        case ParamId::P: return qtn(0.005, 0.0, 1.0);
        case ParamId::HW: return two_plus ? qtn(0.1) : qtn(0.05);
        case ParamId::MuGW: return qn(0.05);
        case ParamId::RhoGW: return qtn(0.05, -1.0, 1.0);
        case ParamId::S2Eta: return qtn(0.001);
        case ParamId::S2GW: return qrel(20.0);
        case ParamId::S2W: return two_plus ? qtn(0.01) : qtn(0.001);
        case ParamId::XC0F1:
        case ParamId::XC0F2:
        case ParamId::XC0F3: return qtn(2.0);
        case ParamId::XIOM: return qtn(0.05);
        case ParamId::RS: return qtn(0.05);
        case ParamId::S2S: return two_plus ? qtn(0.01) : qtn(0.05);
        case ParamId::MuGS: return qn(0.05);
        case ParamId::RhoGS: return qtn(0.25, -1.0, 1.0);
        case ParamId::S2GS: return qrel(20.0);
        case ParamId::HS: return qtn(0.25);
        default: throw std::invalid_argument("no Brigalow base proposal for parameter");
    }
}

Proposal brigalow_three_pool_proposal(ParamId id) {
    switch (id) {
        case ParamId::S2EtaC: return qtn(0.001);
        case ParamId::S2EtaB: return qtn(0.1);
        case ParamId::KB: return qtn(0.09);
        case ParamId::PiBB: return qtn(0.1);
        case ParamId::PiBC: return qtn(0.1);
        case ParamId::PiCB: return qtn(0.05);
        default: return brigalow_base_proposal(id, Pools::ThreePool);
    }
}

Proposal brigalow_five_pool_proposal(ParamId id) {
    switch (id) {
        case ParamId::S2EtaD: return qtn(0.02);
        case ParamId::S2EtaB: return qtn(0.1);
        case ParamId::S2EtaR: return qtn(0.9);
        case ParamId::S2EtaH: return qtn(0.1);
        case ParamId::S2GW: return qrel(30.0);
        case ParamId::S2GS: return qrel(10.0);
        case ParamId::S2S: return qtn(0.05);
        case ParamId::XIOM: return qtn(0.9);
        case ParamId::XC0F1:
        case ParamId::XC0F2:
        case ParamId::XC0F3: return qtn(3.0);
        case ParamId::KD: return qtn(0.005);
        case ParamId::KB: return qtn(0.1);
        case ParamId::KR: return qtn(0.05);
        case ParamId::KH: return qtn(0.01);
        case ParamId::HW: return qtn(0.05);
        case ParamId::HS: return qtn(0.5);
        case ParamId::PD: return qtn(0.15);
        case ParamId::PiDH: return qtn(0.09);
        case ParamId::PiRH: return qtn(0.1);
        case ParamId::PiHH: return qtn(0.1);
        case ParamId::PiBH: return qtn(0.15);
        case ParamId::PiRB: return qtn(0.09);
        case ParamId::PiHB: return qtn(0.1);
        case ParamId::PiDB: return qtn(0.1);
        case ParamId::PiBB: return qtn(0.1);
        case ParamId::RhoGS: return qtn(0.1, -1.0, 1.0);
        default: return brigalow_base_proposal(id, Pools::FivePool);
    }
}

Proposal tarlee_three_pool_proposal(ParamId id) {
    switch (id) {
        case ParamId::KC: return qn(0.005);
        case ParamId::MuGW: return qn(0.075);
        case ParamId::MuP: return qn(0.1);
        case ParamId::XC0F1:
        case ParamId::XC0F2:
        case ParamId::XC0F3: return qtn(2.0);
        case ParamId::XIOM: return qtn(0.09);
        default: return tarlee_base_proposal(id);
    }
}

}  // namespace

ProposalSet default_proposals(const ModelSpec& spec, const ParamLayout& layout) {
    ProposalSet set;
    set.reserve(layout.ids.size());
    for (ParamId id : layout.ids) {
        if (spec.site == Site::Tarlee) {
            switch (spec.pools) {
                case Pools::OnePool:
                case Pools::TwoPool: set.push_back(tarlee_base_proposal(id)); break;
                case Pools::ThreePool: set.push_back(tarlee_three_pool_proposal(id)); break;
                case Pools::FivePool: set.push_back(tarlee_five_pool_proposal(id)); break;
            }
        } else {
            switch (spec.pools) {
                case Pools::OnePool:
                case Pools::TwoPool:
                    set.push_back(brigalow_base_proposal(id, spec.pools));
                    break;
                case Pools::ThreePool: set.push_back(brigalow_three_pool_proposal(id)); break;
                case Pools::FivePool: set.push_back(brigalow_five_pool_proposal(id)); break;
            }
        }
    }
    return set;
}

}  // namespace soilc
