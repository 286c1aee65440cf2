#pragma once

#include "fsvar/rng.hpp"
#include "fsvar/types.hpp"

namespace fsvar::dgp {

struct DgpConfig {
    int n = 10;
    int m = 5;   // structural shocks
    int T = 148;
    int p = 4;
    int burn_in = 100;
    double stability_bound = 0.95;
    double shock_var = 0.02;  // variance of each shock
    double obs_mu = 1.0;
    double obs_sigma = 0.5;
    int max_attempts = 10000;
};

struct VarCoefficients {
    VectorXd intercept;       // n
    std::vector<MatrixXd> B;  // p matrices, n x n
};

/// Random VAR coefficients with decaying lag magnitudes, redrawn until the
/// companion spectral radius is below the stability bound.
VarCoefficients generate_coefficients(const DgpConfig& cfg, RngStream& rng);

/// Standard-normal loadings with rows scaled to unit Euclidean norm.
MatrixXd generate_loadings(const DgpConfig& cfg, RngStream& rng);

struct SimulationResult {
    Dataset data;     // T x n after burn-in
    MatrixXd shocks;  // T x m, aligned with the retained rows
};

SimulationResult simulate(const DgpConfig& cfg, const VarCoefficients& coeffs,
                          const MatrixXd& L, RngStream& rng);

/// Restrictions the truth satisfies strictly: impact cells signed by the
/// true loadings (>= 2 per shock, patterns unique up to sign reversal) and
/// shock signs read off the true factor path. Periods are drawn from
/// [min_period, T-1] so every restriction lands in the estimable sample.
RestrictionSet generate_restrictions(const MatrixXd& L_true, const MatrixXd& F_true,
                                     int n_impact, int n_shock, RngStream& rng,
                                     int min_period);

}  // namespace fsvar::dgp
