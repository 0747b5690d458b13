#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace soilc {

inline constexpr int kNumFields = 3;

enum class Pools { OnePool, TwoPool, ThreePool, FivePool };
enum class Site { Tarlee, Brigalow };

const char* to_string(Pools p);
const char* to_string(Site s);
std::optional<Pools> pools_from_string(const std::string& s);
std::optional<Site> site_from_string(const std::string& s);

// Which pool structure and site variant is being fitted. Three fields per
// site, yearly time step. Tarlee carries pasture crop states, Brigalow
// carries sorghum; both carry wheat.
struct ModelSpec {
    Pools pools = Pools::OnePool;
    Site site = Site::Tarlee;
    int fields = kNumFields;
    double dt = 1.0;

    int start_year() const { return site == Site::Tarlee ? 1978 : 1981; }

    bool has_pasture() const { return site == Site::Tarlee; }
    bool has_sorghum() const { return site == Site::Brigalow; }
    bool has_iom() const { return pools != Pools::OnePool; }

    // Crop state layout: Tarlee {GW, W, P}, Brigalow {GW, W, GS, S}.
    int crop_dim() const { return site == Site::Tarlee ? 3 : 4; }
    // Stochastic carbon pools: {C} / {C} / {C, B} / {D, R, H, B}.
    int carbon_dim() const {
        switch (pools) {
            case Pools::OnePool:
            case Pools::TwoPool: return 1;
            case Pools::ThreePool: return 2;
            case Pools::FivePool: return 4;
        }
        return 1;
    }
};

// Crop state indices within a crop slice.
struct CropIx {
    static constexpr int GW = 0;
    static constexpr int W = 1;
    // Tarlee: P at 2. Brigalow: GS at 2, S at 3.
    static constexpr int P = 2;
    static constexpr int GS = 2;
    static constexpr int S = 3;
};

// Carbon state indices within a carbon slice (the IOM pool is carried
// separately since it is constant).
struct CarbonIx {
    static constexpr int C = 0;
    static constexpr int B3 = 1;  // BIO in the three-pool model
    static constexpr int D = 0;
    static constexpr int R = 1;
    static constexpr int H = 2;
    static constexpr int B5 = 3;  // BIO in the five-pool model
};

enum class Treatment {
    WheatForGrain,
    WheatForHay,
    Pasture,
    PastureForHay,
    SorghumForGrain,
    SorghumForHay,
    Fallow,
    Cleared,  // contributes zero carbon input, like Fallow
};

const char* to_string(Treatment t);
std::optional<Treatment> treatment_from_string(const std::string& s);
bool treatment_valid_for_site(Treatment t, Site site);

// Per-field map year -> treatment. Every fitted year needs exactly one entry.
class ManagementSchedule {
public:
    void set(int field, int year, Treatment t) { plan_[field][year] = t; }
    Treatment at(int field, int year) const;
    bool covers(int field, int year) const;
    const std::map<int, Treatment>& field_plan(int field) const { return plan_.at(field); }
    // Common year span over all fields; throws if fields disagree or are empty.
    std::pair<int, int> year_span() const;
    ManagementSchedule truncated_after(int year) const;

private:
    std::array<std::map<int, Treatment>, kNumFields> plan_{};
};

ManagementSchedule tarlee_default_schedule(int first_year = 1978, int last_year = 1997);
ManagementSchedule brigalow_default_schedule(int first_year = 1981, int last_year = 2000);

// All static parameters. Fields not used by a given ModelSpec are ignored.
// Observation variances are study constants and never sampled.
struct ParameterVector {
    // decay rates (1/yr)
    double k_c = 0.0665;
    double k_d = 0.0665;
    double k_r = 0.0821;
    double k_h = 0.02;
    double k_b = 0.66;

    // transfer proportions
    double pi_cb = 0.2, pi_bc = 0.2, pi_bb = 0.2;                    // three-pool
    double pi_dh = 0.2, pi_rh = 0.2, pi_hh = 0.2, pi_bh = 0.2;       // five-pool -> HUM
    double pi_db = 0.1, pi_rb = 0.1, pi_hb = 0.1;                    // five-pool -> BIO
    double p_d = 0.59;                                               // input split to DPM

    // plant parameters
    double c = 0.45;
    double r_w = 0.5, r_s = 0.5, r_p = 1.0;
    double p = 0.1;
    double h_w = 2.28, h_s = 1.58;

    // AR parameters (log scale)
    double mu_gw = 0.42, mu_gs = 0.42, mu_p = 1.41;
    double rho_gw = 0.3, rho_gs = 0.3, rho_p = 0.3;

    // process variances
    double s2_eta = 0.01;                                   // 1/2-pool SOC
    double s2_eta_c = 0.01, s2_eta_b = 0.01;                // three-pool
    double s2_eta_d = 0.01, s2_eta_r = 0.01, s2_eta_h = 0.01;  // five-pool
    double s2_gw = 0.1, s2_gs = 0.1;
    double s2_w = 0.05, s2_s = 0.05;
    double s2_p = 0.1;

    // fixed observation variances
    double s2e_toc = 0.025;
    double s2e_poc = 0.9;
    double s2e_gw = 0.023, s2e_gs = 0.023;
    double s2e_w = 0.133, s2e_s = 0.133;
    double s2e_p = 0.067;
    double s2e_iom = 0.01;
    double s2e_h = 0.1;

    // initial masses (t/ha)
    std::array<double, kNumFields> x_c0 = {40.0, 40.0, 40.0};
    double x_iom = 4.0;

    // Range checks for everything the given spec uses; returns an error
    // message or empty string when valid.
    std::string validate(const ModelSpec& spec) const;
};

enum class ObsKind { TOC, GW, W, P, GS, S, IOM, H, POC };
inline constexpr int kNumObsKinds = 9;

const char* to_string(ObsKind k);
std::optional<ObsKind> obs_kind_from_string(const std::string& s);
bool obs_kind_is_crop(ObsKind k);

// Year-indexed sparse observations for one field. Missing entries are simply
// absent; all stored values are strictly positive.
struct FieldObservations {
    std::array<std::map<int, double>, kNumObsKinds> series{};

    std::optional<double> get(ObsKind k, int year) const;
    void set(ObsKind k, int year, double value);
    bool any_at(int year) const;
    bool any_carbon_at(int year) const;
    bool any_crop_at(int year) const;
};

struct FieldSeries {
    std::array<FieldObservations, kNumFields> fields{};
    ManagementSchedule schedule;

    bool any_at(int year) const;
    // Last year with any observation in any field; nullopt when empty.
    std::optional<int> last_obs_year() const;
    // Window ending at `year`: observations and schedule after it are dropped.
    FieldSeries truncated_after(int year) const;
    std::string validate(const ModelSpec& spec) const;
};

// Latent states for all fields over `years` consecutive years starting at
// `start_year`. Crop and carbon slices are stored per field as row-major
// [year][state] blocks; the IOM mass is a single constant.
struct LatentTrajectory {
    int start_year = 0;
    int years = 0;
    int crop_dim = 0;
    int carbon_dim = 0;
    double x_iom = 0.0;
    // [field][year*dim + i]
    std::array<std::vector<double>, kNumFields> crops{};
    std::array<std::vector<double>, kNumFields> carbon{};

    void resize(const ModelSpec& spec, int n_years);
    double* crop_at(int field, int t) { return crops[field].data() + static_cast<size_t>(t) * crop_dim; }
    const double* crop_at(int field, int t) const {
        return crops[field].data() + static_cast<size_t>(t) * crop_dim;
    }
    double* carbon_at(int field, int t) { return carbon[field].data() + static_cast<size_t>(t) * carbon_dim; }
    const double* carbon_at(int field, int t) const {
        return carbon[field].data() + static_cast<size_t>(t) * carbon_dim;
    }
    int year_index(int year) const { return year - start_year; }
};

// Total SOC (sum of all modelled pools) for one field-year.
double total_soc(const LatentTrajectory& traj, const ModelSpec& spec, int field, int t);
// Same, from a raw carbon slice + IOM.
double total_soc(const ModelSpec& spec, const double* carbon, double x_iom);

// Thinned MCMC output of one chain.
struct ChainOutput {
    std::uint64_t seed = 0;
    long iterations = 0;
    long burn_in = 0;
    long stride = 0;
    double acceptance_rate = 0.0;
    std::vector<std::string> param_names;
    std::vector<std::vector<double>> samples;  // [kept][param]
    std::vector<LatentTrajectory> trajectories;  // matched to samples

    long expected_samples() const { return (iterations - burn_in) / stride; }
};

}  // namespace soilc
