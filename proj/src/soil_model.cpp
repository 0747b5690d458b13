#include "soilc/soil_model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace soilc {

namespace {

// Crop observation rows in the log-space LGSS, in slice order.
std::vector<ObsKind> crop_obs_kinds(const ModelSpec& spec) {
    if (spec.site == Site::Tarlee) return {ObsKind::GW, ObsKind::W, ObsKind::P};
    return {ObsKind::GW, ObsKind::W, ObsKind::GS, ObsKind::S};
}

}  // namespace

SoilModel::SoilModel(ModelSpec spec, FieldSeries data, RbpfOptions opt)
    : spec_(spec), data_(std::move(data)), opt_(opt) {
    const auto [lo, hi] = data_.schedule.year_span();
    first_year_ = lo;
    horizon_ = hi - lo + 1;
    if (horizon_ < 1) throw std::invalid_argument("SoilModel: empty year span");
    if (opt_.particles < 1) throw std::invalid_argument("SoilModel: need at least one particle");
    if (auto err = data_.validate(spec_); !err.empty()) throw std::invalid_argument(err);
}

double SoilModel::crop_loglik(const ParameterVector& th, int field,
                              std::vector<double>* per_time) const {
    const auto lgss = crop_lgss(spec_, th);
    const auto kinds = crop_obs_kinds(spec_);
    std::vector<SparseVec> obs(horizon_);
    double jacobian = 0.0;
    std::vector<double> jac_t(horizon_, 0.0);
    for (int t = 0; t < horizon_; ++t) {
        for (int row = 0; row < static_cast<int>(kinds.size()); ++row) {
            if (auto y = data_.fields[field].get(kinds[row], first_year_ + t)) {
                obs[t].push_back({row, std::log(*y)});
                jac_t[t] -= std::log(*y);
            }
        }
        jacobian += jac_t[t];
    }
    const auto kf = kalman_filter(lgss, obs);
    if (per_time) {
        per_time->assign(horizon_, 0.0);
        for (int t = 0; t < horizon_; ++t) (*per_time)[t] = kf.per_time[t] + jac_t[t];
    }
    return kf.loglik + jacobian;
}

struct SoilModel::FieldPass {
    const SoilModel* self;
    const ParameterVector* th;
    int field;
    int crop_dim, carbon_dim;
    CropSupply supply;
    // Filtered crop means and Cholesky factors per time (FilteredDraw mode).
    std::vector<Eigen::VectorXd> crop_mean;
    std::vector<Eigen::MatrixXd> crop_chol;

    void prepare(const KalmanResult& kf) {
        const int T = self->horizon_;
        crop_mean.resize(T);
        crop_chol.resize(T);
        for (int t = 0; t < T; ++t) {
            crop_mean[t] = kf.means[t];
            Eigen::MatrixXd P = kf.covs[t];
            P.diagonal().array() += 1e-12;
            Eigen::LLT<Eigen::MatrixXd> llt(P);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error("rbpf: crop filtered covariance not positive definite");
            crop_chol[t] = llt.matrixL();
        }
    }

    // state = [crops (data scale), carbon pools]
    void fill_crops(int t, std::span<const double> noise, std::span<double> state) const {
        Eigen::Map<const Eigen::VectorXd> z(noise.data(), crop_dim);
        Eigen::VectorXd x = crop_mean[t] + crop_chol[t] * z;
        for (int j = 0; j < crop_dim; ++j) state[j] = std::exp(x(j));
    }

    void init(std::span<const double> noise, std::span<double> state) const {
        if (supply == CropSupply::FilteredDraw)
            fill_crops(0, noise, state);
        else
            initial_crops(self->spec_, *th, noise, state.subspan(0, crop_dim));
        initial_carbon(self->spec_, *th, field, state.subspan(crop_dim, carbon_dim));
    }

    void propagate(int t, std::span<const double> prev, std::span<const double> noise,
                   std::span<double> next) const {
        if (supply == CropSupply::FilteredDraw)
            fill_crops(t, noise, next);
        else
            step_crops(self->spec_, prev.subspan(0, crop_dim), *th, noise,
                       next.subspan(0, crop_dim));
        const Treatment treatment =
            self->data_.schedule.at(field, self->first_year_ + t);
        const double input = carbon_input(next.subspan(0, crop_dim), treatment, *th, self->spec_);
        step_carbon(self->spec_, prev.subspan(crop_dim, carbon_dim), input, *th,
                    noise.subspan(crop_dim, carbon_dim), next.subspan(crop_dim, carbon_dim));
    }

    double log_weight(int t, std::span<const double> state) const {
        const auto carbon = state.subspan(crop_dim, carbon_dim);
        if (bio_constraint_violated(self->spec_, carbon, th->x_iom)) return kNegInf;
        return carbon_obs_logdensity(self->spec_, carbon, th->x_iom, self->data_.fields[field],
                                     self->first_year_ + t, *th);
    }

    double sort_key(std::span<const double> state) const {
        double sum = 0.0;
        for (int j = 0; j < carbon_dim; ++j) sum += state[crop_dim + j];
        return sum;
    }
};

double SoilModel::run(const ParameterVector& th, const RandomBank& bank,
                      std::vector<double>* per_time, Rng* pick, LatentTrajectory* out) const {
    if (per_time) per_time->assign(horizon_, 0.0);
    if (out) {
        out->resize(spec_, horizon_);
        out->start_year = first_year_;
        out->x_iom = spec_.has_iom() ? th.x_iom : 0.0;
    }

    double total = 0.0;
    std::vector<double> kf_time;
    for (int field = 0; field < kNumFields; ++field) {
        const auto lgss = crop_lgss(spec_, th);
        const auto kinds = crop_obs_kinds(spec_);
        std::vector<SparseVec> obs(horizon_);
        std::vector<double> jac_t(horizon_, 0.0);
        for (int t = 0; t < horizon_; ++t)
            for (int row = 0; row < static_cast<int>(kinds.size()); ++row)
                if (auto y = data_.fields[field].get(kinds[row], first_year_ + t)) {
                    obs[t].push_back({row, std::log(*y)});
                    jac_t[t] -= std::log(*y);
                }
        const auto kf = kalman_filter(lgss, obs);
        for (int t = 0; t < horizon_; ++t) {
            total += kf.per_time[t] + jac_t[t];
            if (per_time) (*per_time)[t] += kf.per_time[t] + jac_t[t];
        }

        FieldPass pass{this,          &th,
                       field,         spec_.crop_dim(),
                       spec_.carbon_dim(), opt_.crop_supply,
                       {},            {}};
        if (opt_.crop_supply == CropSupply::FilteredDraw) pass.prepare(kf);

        ParticleModel pm;
        pm.state_dim = spec_.crop_dim() + spec_.carbon_dim();
        pm.noise_dim = bank_dim();
        pm.horizon = horizon_;
        pm.init = [&pass](int, std::span<const double> n, std::span<double> s) {
            pass.init(n, s);
        };
        pm.propagate = [&pass](int, int t, std::span<const double> p, std::span<const double> n,
                               std::span<double> s) { pass.propagate(t, p, n, s); };
        pm.log_weight = [&pass](int, int t, std::span<const double> s) {
            return pass.log_weight(t, s);
        };
        pm.sort_key = [&pass](int, std::span<const double> s) { return pass.sort_key(s); };

        PfOptions pf_opt;
        pf_opt.sort = true;
        pf_opt.exec = opt_.exec;
        PfRecord record;
        const auto pf =
            fixed_random_pf(pm, bank, field, pf_opt, out ? &record : nullptr);
        if (pf.degenerate) return kNegInf;
        total += pf.loglik;
        if (per_time)
            for (int t = 0; t < horizon_; ++t) (*per_time)[t] += pf.per_time[t];

        if (out) {
            const int k_final = static_cast<int>(pick->uniform() * bank.N) % bank.N;
            const auto path = record.extract_path(k_final, pm.state_dim, pf.final_ancestors);
            for (int t = 0; t < horizon_; ++t) {
                std::copy_n(path[t].data(), spec_.crop_dim(), out->crop_at(field, t));
                std::copy_n(path[t].data() + spec_.crop_dim(), spec_.carbon_dim(),
                            out->carbon_at(field, t));
            }
        }
    }
    return total;
}

double SoilModel::loglik(const ParameterVector& th, const RandomBank& bank,
                         std::vector<double>* per_time) const {
    return run(th, bank, per_time, nullptr, nullptr);
}

double SoilModel::sample_path(const ParameterVector& th, const RandomBank& bank, Rng& pick,
                              LatentTrajectory& out) const {
    return run(th, bank, nullptr, &pick, &out);
}

LikelihoodModel make_soil_likelihood(const SoilModel& model, const ParamLayout& layout,
                                     bool with_paths) {
    LikelihoodModel lik;
    lik.loglik = [&model, &layout](std::span<const double> th, const RandomBank& bank) {
        return model.loglik(layout.to_params(th), bank);
    };
    lik.make_bank = [&model](Rng& rng) { return model.make_bank(rng); };
    lik.support = [&model, &layout](std::span<const double> th) {
        return layout.to_params(th).validate(model.spec()).empty();
    };
    if (with_paths)
        lik.sample_path = [&model, &layout](std::span<const double> th, const RandomBank& bank,
                                            Rng& rng) {
            LatentTrajectory traj;
            model.sample_path(layout.to_params(th), bank, rng, traj);
            return traj;
        };
    return lik;
}

}  // namespace soilc
