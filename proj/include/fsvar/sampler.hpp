#pragma once

#include "fsvar/rng.hpp"
#include "fsvar/types.hpp"

#include <cstdint>

namespace fsvar {

/// Data, priors and restriction views prepared once per chain. Restriction
/// time indices are translated from dataset rows to rows of F (offset p).
struct EstimationInput {
    ModelDims dims;
    PriorConfig prior;
    MatrixXd Y;    // t_eff x n
    MatrixXd X;    // t_eff x k
    MatrixXd XtX;  // k x k
    MatrixXd XtY;  // k x n
    RestrictionSet restr;  // dataset-row indexed, as supplied

    std::map<int, LinearConstraint> shock_at;  // F row -> constraint
    std::map<int, std::vector<std::pair<int, LinearConstraint>>> product_at_row;  // F row -> [(eq, c)]
    std::map<int, std::vector<std::pair<int, LinearConstraint>>> product_at_eq;   // eq -> [(F row, c)]

    std::vector<MatrixXd> loading_prec;       // V_l^{-1} per equation (or shared in [0])
    std::vector<VectorXd> loading_prec_mean;  // V_l^{-1} l_0 per equation

    const MatrixXd& prec_for(int eq) const {
        return loading_prec.size() == 1 ? loading_prec.front() : loading_prec[eq];
    }
    const VectorXd& prec_mean_for(int eq) const {
        return loading_prec_mean.size() == 1 ? loading_prec_mean.front()
                                             : loading_prec_mean[eq];
    }

    static EstimationInput prepare(const ModelDims& dims, const Dataset& data,
                                   const RestrictionSet& restr, const PriorConfig& prior);
};

struct GibbsOptions {
    int tmvn_sweeps = 10;
    int tmvn_burnin = 100;
    int threads = 1;
};

// One conditional update each; `iteration` keys the per-index random
// substreams, so repeated calls must vary it. Constrained blocks warm-start
// from the corresponding rows of `state`, which keeps the draw inside the
// restriction region whenever the incoming state satisfies it.
MatrixXd sample_factors(const ParameterDraw& state, const EstimationInput& in,
                        std::uint64_t seed, std::uint64_t iteration, GibbsOptions opt = {});
MatrixXd sample_loadings(const ParameterDraw& state, const EstimationInput& in,
                         std::uint64_t seed, std::uint64_t iteration, GibbsOptions opt = {});
MatrixXd sample_var_coeffs(const ParameterDraw& state, const EstimationInput& in,
                           std::uint64_t seed, std::uint64_t iteration, GibbsOptions opt = {});
VectorXd sample_noise_vars(const ParameterDraw& state, const EstimationInput& in,
                           std::uint64_t seed, std::uint64_t iteration, GibbsOptions opt = {});
HorseshoeState sample_horseshoe(const MatrixXd& beta, const HorseshoeState& hs,
                                std::uint64_t seed, std::uint64_t iteration);

/// Feasible starting state: beta = 0, sigma2 from sample variances, (L, F)
/// drawn from their truncated priors, horseshoe state at one.
ParameterDraw initial_draw(const EstimationInput& in, std::uint64_t seed,
                           GibbsOptions opt = {});

/// Full Gibbs run. Every retained draw satisfies the restriction set
/// strictly; a violation aborts the run.
PosteriorChain run_gibbs(const ChainConfig& config, const ModelDims& dims,
                         const Dataset& data, const RestrictionSet& restr,
                         const PriorConfig& prior);

/// Marginal data log density given (beta, L, sigma2), factors integrated out.
double data_log_likelihood(const ParameterDraw& state, const EstimationInput& in);

}  // namespace fsvar
