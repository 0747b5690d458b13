#include "soilc/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace soilc {

const char* to_string(Pools p) {
    switch (p) {
        case Pools::OnePool: return "one";
        case Pools::TwoPool: return "two";
        case Pools::ThreePool: return "three";
        case Pools::FivePool: return "five";
    }
    return "?";
}

const char* to_string(Site s) { return s == Site::Tarlee ? "tarlee" : "brigalow"; }

std::optional<Pools> pools_from_string(const std::string& s) {
    if (s == "one" || s == "1") return Pools::OnePool;
    if (s == "two" || s == "2") return Pools::TwoPool;
    if (s == "three" || s == "3") return Pools::ThreePool;
    if (s == "five" || s == "5") return Pools::FivePool;
    return std::nullopt;
}

std::optional<Site> site_from_string(const std::string& s) {
    if (s == "tarlee") return Site::Tarlee;
    if (s == "brigalow") return Site::Brigalow;
    return std::nullopt;
}

const char* to_string(Treatment t) {
    switch (t) {
        case Treatment::WheatForGrain: return "WheatForGrain";
        case Treatment::WheatForHay: return "WheatForHay";
        case Treatment::Pasture: return "Pasture";
        case Treatment::PastureForHay: return "PastureForHay";
        case Treatment::SorghumForGrain: return "SorghumForGrain";
        case Treatment::SorghumForHay: return "SorghumForHay";
        case Treatment::Fallow: return "Fallow";
        case Treatment::Cleared: return "Cleared";
    }
    return "?";
}

std::optional<Treatment> treatment_from_string(const std::string& s) {
    if (s == "WheatForGrain") return Treatment::WheatForGrain;
    if (s == "WheatForHay") return Treatment::WheatForHay;
    if (s == "Pasture") return Treatment::Pasture;
    if (s == "PastureForHay") return Treatment::PastureForHay;
    if (s == "SorghumForGrain") return Treatment::SorghumForGrain;
    if (s == "SorghumForHay") return Treatment::SorghumForHay;
    if (s == "Fallow") return Treatment::Fallow;
    if (s == "Cleared") return Treatment::Cleared;
    return std::nullopt;
}

bool treatment_valid_for_site(Treatment t, Site site) {
    switch (t) {
        case Treatment::Pasture:
        case Treatment::PastureForHay: return site == Site::Tarlee;
        case Treatment::SorghumForGrain:
        case Treatment::SorghumForHay: return site == Site::Brigalow;
        default: return true;
    }
}

Treatment ManagementSchedule::at(int field, int year) const {
    const auto& plan = plan_.at(field);
    auto it = plan.find(year);
    if (it == plan.end()) {
        std::ostringstream os;
        os << "schedule gap: field " << (field + 1) << " year " << year;
        throw std::out_of_range(os.str());
    }
    return it->second;
}

bool ManagementSchedule::covers(int field, int year) const {
    return plan_.at(field).count(year) > 0;
}

ManagementSchedule ManagementSchedule::truncated_after(int year) const {
    ManagementSchedule out;
    for (int f = 0; f < kNumFields; ++f)
        for (const auto& [y, t] : plan_[f])
            if (y <= year) out.set(f, y, t);
    return out;
}

std::pair<int, int> ManagementSchedule::year_span() const {
    if (plan_[0].empty()) throw std::runtime_error("empty schedule");
    int lo = plan_[0].begin()->first;
    int hi = plan_[0].rbegin()->first;
    for (int f = 1; f < kNumFields; ++f) {
        if (plan_[f].empty() || plan_[f].begin()->first != lo || plan_[f].rbegin()->first != hi)
            throw std::runtime_error("schedule year spans differ across fields");
    }
    return {lo, hi};
}

ManagementSchedule tarlee_default_schedule(int first_year, int last_year) {
    ManagementSchedule s;
    for (int y = first_year; y <= last_year; ++y) {
        // Field 1: continuous wheat, hay in 1988-89, fallow from 1997.
        Treatment f1 = Treatment::WheatForGrain;
        if (y == first_year) f1 = Treatment::Fallow;
        else if (y == 1988 || y == 1989) f1 = Treatment::WheatForHay;
        else if (y >= 1997) f1 = Treatment::Fallow;
        // Field 2: wheat/fallow rotation (wheat in odd years), hay in 1989.
        Treatment f2 = Treatment::Fallow;
        if (y > first_year && y < 1997) {
            f2 = (y % 2 == 1) ? Treatment::WheatForGrain : Treatment::Fallow;
            if (y == 1989) f2 = Treatment::WheatForHay;
        }
        // Field 3: pasture-dominated rotation, pasture hay in 1988-89.
        Treatment f3 = Treatment::Pasture;
        if (y == first_year) f3 = Treatment::Fallow;
        else if (y == 1988 || y == 1989) f3 = Treatment::PastureForHay;
        else if (y >= 1997) f3 = Treatment::Fallow;
        s.set(0, y, f1);
        s.set(1, y, f2);
        s.set(2, y, f3);
    }
    return s;
}

ManagementSchedule brigalow_default_schedule(int first_year, int last_year) {
    ManagementSchedule s;
    auto year_treatment = [](int y) {
        if (y == 1982) return Treatment::Cleared;
        if (y == 1983 || y == 1993) return Treatment::Fallow;
        if (y == 1984 || y == 1995 || y == 1997 || y == 1999) return Treatment::SorghumForGrain;
        if (y >= 1985 && y <= 1992) return Treatment::WheatForGrain;
        if (y == 1994 || y == 1996 || y == 1998) return Treatment::WheatForGrain;
        return Treatment::Fallow;
    };
    for (int y = first_year; y <= last_year; ++y) {
        Treatment t = year_treatment(y);
        for (int f = 0; f < kNumFields; ++f) s.set(f, y, t);
    }
    return s;
}

namespace {

bool nonneg(double x) { return x >= 0.0 && std::isfinite(x); }
bool in01(double x) { return x >= 0.0 && x <= 1.0; }
bool in_open_pm1(double x) { return x > -1.0 && x < 1.0; }

}  // namespace

std::string ParameterVector::validate(const ModelSpec& spec) const {
    std::ostringstream err;
    auto need = [&](bool ok, const char* what) {
        if (!ok && err.tellp() == 0) err << "invalid parameter: " << what;
    };

    need(nonneg(c) && c <= 1.0, "c");
    need(nonneg(r_w), "r_W");
    need(in01(p), "p");
    need(nonneg(h_w), "h_W");
    need(in_open_pm1(rho_gw), "rho_GW");
    need(nonneg(s2_gw), "sigma2_GW");
    need(nonneg(s2_w), "sigma2_W");
    for (double x : x_c0) need(nonneg(x), "X_C0");

    if (spec.has_pasture()) {
        need(nonneg(r_p), "r_P");
        need(in_open_pm1(rho_p), "rho_P");
        need(nonneg(s2_p), "sigma2_P");
    }
    if (spec.has_sorghum()) {
        need(nonneg(r_s), "r_S");
        need(nonneg(h_s), "h_S");
        need(in_open_pm1(rho_gs), "rho_GS");
        need(nonneg(s2_gs), "sigma2_GS");
        need(nonneg(s2_s), "sigma2_S");
    }
    if (spec.has_iom()) need(nonneg(x_iom), "X_IOM");

    switch (spec.pools) {
        case Pools::OnePool:
        case Pools::TwoPool:
            need(nonneg(k_c), "K_C");
            need(nonneg(s2_eta), "sigma2_eta");
            break;
        case Pools::ThreePool:
            need(nonneg(k_c), "K_C");
            need(nonneg(k_b), "K_B");
            need(in01(pi_cb), "pi_CB");
            need(in01(pi_bc), "pi_BC");
            need(in01(pi_bb), "pi_BB");
            need(pi_bc + pi_bb <= 1.0, "pi_BC + pi_BB > 1");
            need(nonneg(s2_eta_c), "sigma2_etaC");
            need(nonneg(s2_eta_b), "sigma2_etaB");
            break;
        case Pools::FivePool:
            need(nonneg(k_d), "K_D");
            need(nonneg(k_r), "K_R");
            need(nonneg(k_h), "K_H");
            need(nonneg(k_b), "K_B");
            need(in01(p_d), "P_D");
            for (double x : {pi_dh, pi_rh, pi_hh, pi_bh, pi_db, pi_rb, pi_hb, pi_bb})
                need(in01(x), "pi");
            need(pi_dh + pi_db <= 1.0, "pi_DH + pi_DB > 1");
            need(pi_rh + pi_rb <= 1.0, "pi_RH + pi_RB > 1");
            need(pi_hh + pi_hb <= 1.0, "pi_HH + pi_HB > 1");
            need(pi_bh + pi_bb <= 1.0, "pi_BH + pi_BB > 1");
            need(nonneg(s2_eta_d), "sigma2_etaD");
            need(nonneg(s2_eta_r), "sigma2_etaR");
            need(nonneg(s2_eta_h), "sigma2_etaH");
            need(nonneg(s2_eta_b), "sigma2_etaB");
            break;
    }
    return err.str();
}

const char* to_string(ObsKind k) {
    switch (k) {
        case ObsKind::TOC: return "TOC";
        case ObsKind::GW: return "GW";
        case ObsKind::W: return "W";
        case ObsKind::P: return "P";
        case ObsKind::GS: return "GS";
        case ObsKind::S: return "S";
        case ObsKind::IOM: return "IOM";
        case ObsKind::H: return "H";
        case ObsKind::POC: return "POC";
    }
    return "?";
}

std::optional<ObsKind> obs_kind_from_string(const std::string& s) {
    static const std::map<std::string, ObsKind> table = {
        {"TOC", ObsKind::TOC}, {"GW", ObsKind::GW}, {"W", ObsKind::W},
        {"P", ObsKind::P},     {"GS", ObsKind::GS}, {"S", ObsKind::S},
        {"IOM", ObsKind::IOM}, {"H", ObsKind::H},   {"POC", ObsKind::POC}};
    auto it = table.find(s);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

bool obs_kind_is_crop(ObsKind k) {
    switch (k) {
        case ObsKind::GW:
        case ObsKind::W:
        case ObsKind::P:
        case ObsKind::GS:
        case ObsKind::S: return true;
        default: return false;
    }
}

std::optional<double> FieldObservations::get(ObsKind k, int year) const {
    const auto& m = series[static_cast<int>(k)];
    auto it = m.find(year);
    if (it == m.end()) return std::nullopt;
    return it->second;
}

void FieldObservations::set(ObsKind k, int year, double value) {
    series[static_cast<int>(k)][year] = value;
}

bool FieldObservations::any_at(int year) const {
    for (const auto& m : series)
        if (m.count(year)) return true;
    return false;
}

bool FieldObservations::any_carbon_at(int year) const {
    for (int k = 0; k < kNumObsKinds; ++k)
        if (!obs_kind_is_crop(static_cast<ObsKind>(k)) && series[k].count(year)) return true;
    return false;
}

bool FieldObservations::any_crop_at(int year) const {
    for (int k = 0; k < kNumObsKinds; ++k)
        if (obs_kind_is_crop(static_cast<ObsKind>(k)) && series[k].count(year)) return true;
    return false;
}

bool FieldSeries::any_at(int year) const {
    for (const auto& f : fields)
        if (f.any_at(year)) return true;
    return false;
}

std::optional<int> FieldSeries::last_obs_year() const {
    std::optional<int> last;
    for (const auto& f : fields)
        for (const auto& m : f.series)
            if (!m.empty()) last = std::max(last.value_or(m.rbegin()->first), m.rbegin()->first);
    return last;
}

FieldSeries FieldSeries::truncated_after(int year) const {
    FieldSeries out;
    out.schedule = schedule.truncated_after(year);
    for (int f = 0; f < kNumFields; ++f)
        for (int k = 0; k < kNumObsKinds; ++k)
            for (const auto& [y, v] : fields[f].series[k])
                if (y <= year) out.fields[f].series[k][y] = v;
    return out;
}

std::string FieldSeries::validate(const ModelSpec& spec) const {
    for (int f = 0; f < kNumFields; ++f) {
        for (int k = 0; k < kNumObsKinds; ++k) {
            const auto kind = static_cast<ObsKind>(k);
            for (const auto& [year, value] : fields[f].series[k]) {
                if (!(value > 0.0)) {
                    std::ostringstream os;
                    os << "non-positive observation " << to_string(kind) << " field " << (f + 1)
                       << " year " << year;
                    return os.str();
                }
                bool ok = true;
                switch (kind) {
                    case ObsKind::P: ok = spec.has_pasture(); break;
                    case ObsKind::GS:
                    case ObsKind::S: ok = spec.has_sorghum(); break;
                    case ObsKind::IOM: ok = spec.has_iom(); break;
                    case ObsKind::H:
                    case ObsKind::POC: ok = spec.pools == Pools::FivePool; break;
                    default: break;
                }
                if (!ok) {
                    std::ostringstream os;
                    os << "observation kind " << to_string(kind) << " not used by the "
                       << to_string(spec.pools) << "-pool " << to_string(spec.site) << " model";
                    return os.str();
                }
                if (!schedule.covers(f, year)) {
                    std::ostringstream os;
                    os << "schedule gap: field " << (f + 1) << " year " << year;
                    return os.str();
                }
            }
        }
    }
    return {};
}

void LatentTrajectory::resize(const ModelSpec& spec, int n_years) {
    start_year = spec.start_year();
    years = n_years;
    crop_dim = spec.crop_dim();
    carbon_dim = spec.carbon_dim();
    for (int f = 0; f < kNumFields; ++f) {
        crops[f].assign(static_cast<size_t>(n_years) * crop_dim, 0.0);
        carbon[f].assign(static_cast<size_t>(n_years) * carbon_dim, 0.0);
    }
}

double total_soc(const ModelSpec& spec, const double* carbon, double x_iom) {
    switch (spec.pools) {
        case Pools::OnePool: return carbon[CarbonIx::C];
        case Pools::TwoPool: return carbon[CarbonIx::C] + x_iom;
        case Pools::ThreePool: return carbon[CarbonIx::C] + carbon[CarbonIx::B3] + x_iom;
        case Pools::FivePool:
            return carbon[CarbonIx::D] + carbon[CarbonIx::R] + carbon[CarbonIx::H] +
                   carbon[CarbonIx::B5] + x_iom;
    }
    return 0.0;
}

double total_soc(const LatentTrajectory& traj, const ModelSpec& spec, int field, int t) {
    if (field < 0 || field >= kNumFields) throw std::out_of_range("total_soc: field index");
    if (t < 0 || t >= traj.years) throw std::out_of_range("total_soc: year index");
    return total_soc(spec, traj.carbon_at(field, t), traj.x_iom);
}

}  // namespace soilc
