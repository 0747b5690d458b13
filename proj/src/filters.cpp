#include "soilc/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace soilc {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;
constexpr double kJitter = 1e-12;  // innovation covariance regularisation
}

KalmanResult kalman_filter(const LinearGaussianSpec& spec, const std::vector<SparseVec>& obs) {
    const int d = spec.state_dim();
    const int T = static_cast<int>(obs.size());
    Eigen::VectorXd drift = Eigen::VectorXd::Zero(d);
    if (spec.u.size() > 0) drift = spec.B * spec.u;

    KalmanResult out;
    out.per_time.assign(T, 0.0);
    out.means.reserve(T);
    out.covs.reserve(T);

    Eigen::VectorXd x = spec.x0;
    Eigen::MatrixXd P = spec.P0;
    for (int t = 0; t < T; ++t) {
        if (t > 0) {
            x = spec.A * x + drift;
            P = spec.A * P * spec.A.transpose() + spec.Q;
        }
        if (!obs[t].empty()) {
            const int k = static_cast<int>(obs[t].size());
            Eigen::MatrixXd Csub(k, d);
            Eigen::MatrixXd Rsub = Eigen::MatrixXd::Zero(k, k);
            Eigen::VectorXd y(k);
            for (int j = 0; j < k; ++j) {
                const auto& [row, value] = obs[t][j];
                Csub.row(j) = spec.C.row(row);
                Rsub(j, j) = spec.R(row, row);
                y(j) = value;
            }
            Eigen::MatrixXd S = Csub * P * Csub.transpose() + Rsub;
            S.diagonal().array() += kJitter;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
            if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
                throw std::runtime_error("kalman_filter: singular innovation covariance");
            const Eigen::VectorXd resid = y - Csub * x;
            const double logdet = ldlt.vectorD().array().log().sum();
            const double maha = resid.dot(ldlt.solve(resid));
            out.per_time[t] = -0.5 * (k * kLog2Pi + logdet + maha);

            const Eigen::MatrixXd K = ldlt.solve(Csub * P).transpose();
            x += K * resid;
            P = (Eigen::MatrixXd::Identity(d, d) - K * Csub) * P;
        }
        out.means.push_back(x);
        out.covs.push_back(P);
    }
    out.loglik = std::accumulate(out.per_time.begin(), out.per_time.end(), 0.0);
    return out;
}

LinearGaussianSpec crop_lgss(const ModelSpec& spec, const ParameterVector& th) {
    const int d = spec.crop_dim();
    LinearGaussianSpec out;
    out.A = Eigen::MatrixXd::Zero(d, d);
    out.B = Eigen::MatrixXd::Identity(d, d);
    out.C = Eigen::MatrixXd::Identity(d, d);
    out.Q = Eigen::MatrixXd::Zero(d, d);
    out.R = Eigen::MatrixXd::Zero(d, d);
    out.x0 = Eigen::VectorXd::Zero(d);
    out.P0 = Eigen::MatrixXd::Zero(d, d);
    out.u = Eigen::VectorXd::Zero(d);

    auto grain_total_block = [&](int gi, int ti, double mu, double rho, double s2_g, double s2_t,
                                 double log_h, double s2e_g, double s2e_t) {
        out.A(gi, gi) = rho;
        out.A(ti, gi) = rho;
        out.u(gi) = mu * (1.0 - rho);
        out.u(ti) = log_h + mu * (1.0 - rho);
        out.Q(gi, gi) = s2_g;
        out.Q(gi, ti) = out.Q(ti, gi) = s2_g;
        out.Q(ti, ti) = s2_g + s2_t;
        const double v = s2_g / (1.0 - rho * rho);
        out.x0(gi) = mu;
        out.x0(ti) = log_h + mu;
        out.P0(gi, gi) = v;
        out.P0(gi, ti) = out.P0(ti, gi) = v;
        out.P0(ti, ti) = v + s2_t;
        out.R(gi, gi) = s2e_g;
        out.R(ti, ti) = s2e_t;
    };

    grain_total_block(CropIx::GW, CropIx::W, th.mu_gw, th.rho_gw, th.s2_gw, th.s2_w,
                      std::log(th.h_w), th.s2e_gw, th.s2e_w);
    if (spec.has_pasture()) {
        const int pi = CropIx::P;
        out.A(pi, pi) = th.rho_p;
        out.u(pi) = th.mu_p * (1.0 - th.rho_p);
        out.Q(pi, pi) = th.s2_p;
        out.x0(pi) = th.mu_p;
        out.P0(pi, pi) = th.s2_p / (1.0 - th.rho_p * th.rho_p);
        out.R(pi, pi) = th.s2e_p;
    }
    if (spec.has_sorghum())
        grain_total_block(CropIx::GS, CropIx::S, th.mu_gs, th.rho_gs, th.s2_gs, th.s2_s,
                          std::log(th.h_s), th.s2e_gs, th.s2e_s);
    return out;
}

std::vector<int> systematic_resample(std::span<const double> weights, double v) {
    const int n = static_cast<int>(weights.size());
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::runtime_error("systematic_resample: all weights zero");
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("systematic_resample: weights not normalised");
    std::vector<int> idx(n);
    double cum = weights[0];
    int j = 0;
    for (int k = 0; k < n; ++k) {
        const double threshold = (v + k) / n;
        // smallest j with cumulative weight strictly above the threshold
        while (cum <= threshold && j + 1 < n) cum += weights[++j];
        idx[k] = j;
    }
    return idx;
}

RandomBank RandomBank::gaussian(int blocks, int T, int N, int dim, Rng& rng) {
    RandomBank b;
    b.blocks = blocks;
    b.T = T;
    b.N = N;
    b.dim = dim;
    b.normals.resize(static_cast<size_t>(blocks) * T * N * dim);
    b.resample_gauss.resize(static_cast<size_t>(blocks) * T);
    for (double& x : b.normals) x = rng.normal();
    for (double& x : b.resample_gauss) x = rng.normal();
    return b;
}

void RandomBank::correlate_move(double tau, Rng& rng) {
    const double mix = std::sqrt(std::max(0.0, 1.0 - tau * tau));
    for (double& x : normals) x = tau * x + mix * rng.normal();
    for (double& x : resample_gauss) x = tau * x + mix * rng.normal();
}

std::vector<std::vector<double>> PfRecord::extract_path(
    int k_final, int state_dim, const std::vector<int>& final_ancestors) const {
    const int T = static_cast<int>(states.size());
    std::vector<std::vector<double>> path(T);
    int j = final_ancestors[k_final];
    for (int t = T - 1; t >= 0; --t) {
        path[t].assign(states[t].begin() + static_cast<size_t>(j) * state_dim,
                       states[t].begin() + static_cast<size_t>(j + 1) * state_dim);
        if (t > 0) j = parent[t][j];
    }
    return path;
}

namespace {

PfResult run_pf(const ParticleModel& model, int N, const PfOptions& opt, PfRecord* record,
                const std::function<const double*(int t, int k)>& noise_at,
                const std::function<double(int t)>& resample_v, int block) {
    const int d = model.state_dim;
    const int nd = model.noise_dim;
    const int T = model.horizon;
    PfResult out;
    out.per_time.assign(T, 0.0);
    if (record) {
        record->states.assign(T, {});
        record->parent.assign(T, {});
    }

    std::vector<double> cur(static_cast<size_t>(N) * d), resampled(static_cast<size_t>(N) * d);
    std::vector<double> logw(N), w(N);
    std::vector<int> order(N), parent_raw(N);

    for (int t = 0; t < T; ++t) {
        parallel_for(opt.exec, N, [&](long k) {
            std::span<double> next(cur.data() + k * d, d);
            std::span<const double> noise(noise_at(t, static_cast<int>(k)), nd);
            if (t == 0)
                model.init(block, noise, next);
            else
                model.propagate(block, t, {resampled.data() + k * d, static_cast<size_t>(d)},
                                noise, next);
        });

        // Sort by the scalar key (ties broken by slot) so the resampling
        // uniform addresses a stable ordering of the particle cloud.
        std::iota(order.begin(), order.end(), 0);
        if (opt.sort) {
            std::vector<double> key(N);
            for (int k = 0; k < N; ++k) key[k] = model.sort_key(block, {cur.data() + static_cast<size_t>(k) * d, static_cast<size_t>(d)});
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                return key[a] != key[b] ? key[a] < key[b] : a < b;
            });
        }

        std::vector<double> sorted(static_cast<size_t>(N) * d);
        for (int k = 0; k < N; ++k)
            std::copy_n(cur.data() + static_cast<size_t>(order[k]) * d, d,
                        sorted.data() + static_cast<size_t>(k) * d);

        parallel_for(opt.exec, N, [&](long k) {
            logw[k] = model.log_weight(block, t, {sorted.data() + k * d, static_cast<size_t>(d)});
        });

        double maxlw = kNegInf;
        for (double lw : logw) maxlw = std::max(maxlw, lw);
        if (!(maxlw > kNegInf)) {
            out.degenerate = true;
            out.degenerate_time = t;
            out.loglik = kNegInf;
            return out;
        }
        double sum = 0.0;
        for (int k = 0; k < N; ++k) {
            w[k] = std::exp(logw[k] - maxlw);
            sum += w[k];
        }
        out.per_time[t] = maxlw + std::log(sum) - std::log(static_cast<double>(N));
        for (int k = 0; k < N; ++k) w[k] /= sum;

        const auto anc = systematic_resample(w, resample_v(t));
        for (int k = 0; k < N; ++k)
            std::copy_n(sorted.data() + static_cast<size_t>(anc[k]) * d, d,
                        resampled.data() + static_cast<size_t>(k) * d);

        if (record) {
            record->states[t] = sorted;
            if (t > 0) {
                auto& par = record->parent[t];
                par.resize(N);
                for (int k = 0; k < N; ++k) par[k] = parent_raw[order[k]];
            }
        }
        if (t + 1 < T)
            parent_raw = anc;  // post-sort ancestor at t of the k-th propagated particle at t+1
        else
            out.final_ancestors = anc;
    }
    for (double v : out.per_time) out.loglik += v;
    return out;
}

}  // namespace

PfResult fixed_random_pf(const ParticleModel& model, const RandomBank& bank, int block,
                         const PfOptions& opt, PfRecord* record) {
    if (model.horizon > bank.T || model.noise_dim != bank.dim)
        throw std::invalid_argument("fixed_random_pf: bank dimensions do not match model");
    return run_pf(
        model, bank.N, opt, record,
        [&](int t, int k) { return bank.noise_row(block, t, k); },
        [&](int t) { return bank.resample_v(block, t); }, block);
}

PfResult bootstrap_pf(const ParticleModel& model, int particles, Rng& rng, Exec exec,
                      PfRecord* record) {
    if (particles < 1) throw std::invalid_argument("bootstrap_pf: need at least one particle");
    RandomBank bank = RandomBank::gaussian(1, model.horizon, particles, model.noise_dim, rng);
    PfOptions opt;
    opt.sort = false;
    opt.exec = exec;
    return run_pf(
        model, particles, opt, record,
        [&](int t, int k) { return bank.noise_row(0, t, k); },
        [&](int t) { return bank.resample_v(0, t); }, 0);
}

}  // namespace soilc
