// Independent reference computations used by the tests. These deliberately
// avoid the library's filter code paths: densities are evaluated from the
// joint Gaussian assembled directly from the generative model.
#pragma once

#include "soilc/filters.hpp"

#include <Eigen/Dense>
#include <vector>

namespace oracles {

// Joint log-density of the stacked observations of a linear-Gaussian
// state-space model, built by explicit covariance construction over all
// state copies x_0..x_{T-1}.
inline double lgss_joint_logdensity(const soilc::LinearGaussianSpec& spec,
                                    const std::vector<soilc::SparseVec>& obs) {
    const int d = spec.state_dim();
    const int T = static_cast<int>(obs.size());
    Eigen::VectorXd drift = Eigen::VectorXd::Zero(d);
    if (spec.u.size() > 0) drift = spec.B * spec.u;

    // Mean and covariance of the stacked states (x_0, ..., x_{T-1}).
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d * T);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d * T, d * T);
    mean.head(d) = spec.x0;
    cov.topLeftCorner(d, d) = spec.P0;
    for (int t = 1; t < T; ++t) {
        mean.segment(t * d, d) = spec.A * mean.segment((t - 1) * d, d) + drift;
        // cross-covariances with all earlier states
        for (int s = 0; s < t; ++s)
            cov.block(t * d, s * d, d, d) = spec.A * cov.block((t - 1) * d, s * d, d, d);
        cov.block(t * d, t * d, d, d) =
            spec.A * cov.block((t - 1) * d, (t - 1) * d, d, d) * spec.A.transpose() + spec.Q;
        for (int s = 0; s < t; ++s)
            cov.block(s * d, t * d, d, d) = cov.block(t * d, s * d, d, d).transpose();
    }

    // Select observed rows: y = H x + noise.
    int m = 0;
    for (const auto& o : obs) m += static_cast<int>(o.size());
    if (m == 0) return 0.0;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, d * T);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd y(m);
    int row = 0;
    for (int t = 0; t < T; ++t) {
        for (const auto& [r, value] : obs[t]) {
            H.block(row, t * d, 1, d) = spec.C.row(r);
            R(row, row) = spec.R(r, r);
            y(row) = value;
            ++row;
        }
    }
    const Eigen::VectorXd mu = H * mean;
    Eigen::MatrixXd S = H * cov * H.transpose() + R;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
    const Eigen::VectorXd resid = y - mu;
    const double logdet = ldlt.vectorD().array().log().sum();
    return -0.5 * (m * 1.8378770664093453 + logdet + resid.dot(ldlt.solve(resid)));
}

// A random well-conditioned LGSS instance.
inline soilc::LinearGaussianSpec random_lgss(soilc::Rng& rng, int dim, int obs_dim) {
    soilc::LinearGaussianSpec spec;
    spec.A = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) spec.A(i, j) = 0.5 * rng.normal() / dim;
    for (int i = 0; i < dim; ++i) spec.A(i, i) += rng.uniform(0.2, 0.8);
    Eigen::MatrixXd G(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) G(i, j) = rng.normal();
    spec.Q = G * G.transpose() / dim + 0.1 * Eigen::MatrixXd::Identity(dim, dim);
    spec.C = Eigen::MatrixXd::Zero(obs_dim, dim);
    for (int i = 0; i < obs_dim; ++i)
        for (int j = 0; j < dim; ++j) spec.C(i, j) = rng.normal();
    spec.R = Eigen::MatrixXd::Zero(obs_dim, obs_dim);
    for (int i = 0; i < obs_dim; ++i) spec.R(i, i) = rng.uniform(0.2, 1.5);
    spec.B = Eigen::MatrixXd::Identity(dim, dim);
    spec.u = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < dim; ++i) spec.u(i) = 0.3 * rng.normal();
    spec.x0 = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < dim; ++i) spec.x0(i) = rng.normal();
    Eigen::MatrixXd G0(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) G0(i, j) = rng.normal();
    spec.P0 = G0 * G0.transpose() / dim + 0.1 * Eigen::MatrixXd::Identity(dim, dim);
    return spec;
}

// Forward-sample observations from an LGSS (every component observed).
inline std::vector<soilc::SparseVec> sample_lgss_obs(const soilc::LinearGaussianSpec& spec, int T,
                                                     soilc::Rng& rng) {
    const int d = spec.state_dim();
    Eigen::VectorXd drift = Eigen::VectorXd::Zero(d);
    if (spec.u.size() > 0) drift = spec.B * spec.u;
    Eigen::LLT<Eigen::MatrixXd> l0(spec.P0), lq(spec.Q);
    Eigen::VectorXd x = spec.x0;
    auto draw = [&](const Eigen::MatrixXd& L) {
        Eigen::VectorXd z(d);
        for (int i = 0; i < d; ++i) z(i) = rng.normal();
        return (L * z).eval();
    };
    x += draw(l0.matrixL());
    std::vector<soilc::SparseVec> obs(T);
    for (int t = 0; t < T; ++t) {
        if (t > 0) x = spec.A * x + drift + draw(lq.matrixL());
        for (int r = 0; r < spec.obs_dim(); ++r) {
            const double noise = std::sqrt(spec.R(r, r)) * rng.normal();
            obs[t].push_back({r, (spec.C.row(r) * x)(0) + noise});
        }
    }
    return obs;
}

}  // namespace oracles
