#pragma once

#include "soilc/core.hpp"
#include "soilc/distributions.hpp"
#include "soilc/parallel.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace soilc {

// Linear-Gaussian state-space model
//   x_t = A x_{t-1} + B u + eps,  eps ~ N(0, Q)
//   y_t = C x_t + nu,             nu  ~ N(0, R)
// with x_0 ~ N(x0, P0) and a constant input u. Observation components may be
// missing at any time, so observations are passed as sparse (row, value)
// lists per time.
struct LinearGaussianSpec {
    Eigen::MatrixXd A, B, C, Q, R;
    Eigen::VectorXd x0;
    Eigen::MatrixXd P0;
    Eigen::VectorXd u;  // constant input; empty means zero

    int state_dim() const { return static_cast<int>(A.rows()); }
    int obs_dim() const { return static_cast<int>(C.rows()); }
};

// (row, value) observations at one time.
using SparseVec = std::vector<std::pair<int, double>>;

struct KalmanResult {
    double loglik = 0.0;
    std::vector<double> per_time;           // predictive log-density per time
    std::vector<Eigen::VectorXd> means;     // filtered means
    std::vector<Eigen::MatrixXd> covs;      // filtered covariances
};

// Filter over times 0..obs.size()-1; the prior at time 0 is (x0, P0) and the
// transition applies from time 1 on. Missing observations skip the update and
// contribute zero log-likelihood. Throws on a singular innovation covariance.
KalmanResult kalman_filter(const LinearGaussianSpec& spec, const std::vector<SparseVec>& obs);

// Log-space linear-Gaussian system of the crop sub-model {GW, W, P} (Tarlee)
// or {GW, W, GS, S} (Brigalow), with the total-dry-matter equations
// re-expressed against the previous grain state. The shared grain innovation
// makes Q block-correlated between each grain row and its total row.
LinearGaussianSpec crop_lgss(const ModelSpec& spec, const ParameterVector& th);

// Ancestor indices via the systematic scheme: thresholds (v+k)/N against the
// cumulative weights. Weights must be normalised; throws when all zero.
std::vector<int> systematic_resample(std::span<const double> weights, double v);

// Bundle of auxiliary random numbers making the particle filter a
// deterministic function of (theta, data, bank). Propagation draws are
// standard normals; resampling draws are stored in Gaussian form and mapped
// through the normal CDF at use, so one correlation rule covers the whole
// bank. `blocks` indexes independent fields.
struct RandomBank {
    int blocks = 0, T = 0, N = 0, dim = 0;
    std::vector<double> normals;         // [block][t][k][dim]
    std::vector<double> resample_gauss;  // [block][t]

    static RandomBank gaussian(int blocks, int T, int N, int dim, Rng& rng);

    const double* noise_row(int block, int t, int k) const {
        return normals.data() +
               (((static_cast<size_t>(block) * T + t) * N + k) * dim);
    }
    double resample_v(int block, int t) const {
        return normal_cdf(resample_gauss[static_cast<size_t>(block) * T + t]);
    }

    // this <- tau * this + sqrt(1-tau^2) * xi with fresh xi ~ N(0, I).
    // tau == 1 leaves the bank bit-identical (the perturbation draw is
    // still consumed so RNG streams do not depend on tau).
    void correlate_move(double tau, Rng& rng);
};

// Hooks driving the particle filter over time points 0..horizon-1. State is a
// flat double slice; noise rows come from a RandomBank (or are drawn fresh by
// the bootstrap variant).
struct ParticleModel {
    int state_dim = 0;
    int noise_dim = 0;
    int horizon = 0;
    std::function<void(int block, std::span<const double> noise, std::span<double> state)> init;
    std::function<void(int block, int t, std::span<const double> prev,
                       std::span<const double> noise, std::span<double> next)>
        propagate;
    std::function<double(int block, int t, std::span<const double> state)> log_weight;
    // Scalar projection used to sort particles before resampling so that
    // small bank perturbations give small likelihood perturbations.
    std::function<double(int block, std::span<const double> state)> sort_key;
};

struct PfOptions {
    bool sort = true;
    Exec exec = Exec::Serial;
};

// Recorded particle history for drawing a state trajectory afterwards.
struct PfRecord {
    std::vector<std::vector<double>> states;  // [t]: post-sort states, N*state_dim
    std::vector<std::vector<int>> parent;     // [t][j]: post-sort parent index at t-1
    // Surviving ancestral path of final (post-resample) particle k.
    std::vector<std::vector<double>> extract_path(int k_final, int state_dim,
                                                  const std::vector<int>& final_ancestors) const;
};

struct PfResult {
    double loglik = 0.0;
    std::vector<double> per_time;
    bool degenerate = false;  // all particle weights vanished
    int degenerate_time = -1;
    std::vector<int> final_ancestors;  // resample indices at the last time
};

// Particle filter with fixed random numbers (all randomness from the bank).
PfResult fixed_random_pf(const ParticleModel& model, const RandomBank& bank, int block,
                         const PfOptions& opt, PfRecord* record = nullptr);

// Bootstrap filter: same estimator with a freshly drawn bank and no sorting.
PfResult bootstrap_pf(const ParticleModel& model, int particles, Rng& rng,
                      Exec exec = Exec::Serial, PfRecord* record = nullptr);

}  // namespace soilc
