#pragma once

#include "fsvar/rng.hpp"
#include "fsvar/types.hpp"

namespace fsvar {

struct TruncatedGaussianProblem {
    VectorXd mean;
    MatrixXd cov;  // SPD
    LinearConstraint constraint;
};

/// Exact draw from N(mu, sd^2) restricted to the open interval (a, b).
/// Stable far into the tails (exponential proposals beyond the bulk).
double sample_truncated_univariate(double mu, double sd, double a, double b, RngStream& rng);

struct TmvnOptions {
    int sweeps_per_draw = 10;
    int burnin_sweeps = 100;       // applied after a cold (interior-point) start
    int phase1_budget_factor = 10; // interior search budget = factor * q * d
};

/// Gibbs sampler on the whitened space for a Gaussian restricted to
/// lower < R x < upper. Construction whitens the constraints, locates a
/// strictly interior starting point and burns in; draw() advances the chain
/// a fixed number of sweeps and returns the current point. Every returned
/// vector satisfies all constraint rows strictly.
class TmvnSampler {
  public:
    TmvnSampler(const TruncatedGaussianProblem& problem, RngStream& rng,
                TmvnOptions opt = {});

    /// Whitener variant: G is any matrix with cov = G G'. `start`, when
    /// given and strictly feasible, warm-starts the chain with no burn-in.
    TmvnSampler(const VectorXd& mean, const MatrixXd& whitener,
                const LinearConstraint& constraint, RngStream& rng,
                TmvnOptions opt = {}, const VectorXd* start = nullptr);

    VectorXd draw(RngStream& rng);

    int dim() const { return static_cast<int>(mean_.size()); }

  private:
    void init(RngStream& rng, const VectorXd* start);
    void find_interior(RngStream& rng);
    void sweep(RngStream& rng);
    bool whitened_feasible() const;

    VectorXd mean_;
    MatrixXd G_;       // x = mean + G z
    MatrixXd A_;       // constraints in z-space, rows unit norm
    VectorXd lo_, up_;
    MatrixXd R_orig_;
    VectorXd lo_orig_, up_orig_;
    VectorXd z_, w_;   // current point and w = A z
    TmvnOptions opt_;
};

/// One-shot draw: whiten, find an interior point, burn in, return one draw.
VectorXd sample_tmvn(const TruncatedGaussianProblem& problem, RngStream& rng,
                     TmvnOptions opt = {});

}  // namespace fsvar
