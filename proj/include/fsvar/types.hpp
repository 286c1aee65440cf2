#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fsvar {

using Eigen::MatrixXd;
using Eigen::MatrixXi;
using Eigen::VectorXd;
using Eigen::VectorXi;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
    using Error::Error;
};
struct InvalidBounds : Error {
    using Error::Error;
};
struct InfeasibleRegion : Error {
    using Error::Error;
};
struct NumericallyDegenerate : Error {
    using Error::Error;
};
struct DegeneratePosterior : Error {
    using Error::Error;
};
struct RankDeficientLoadings : Error {
    using Error::Error;
};
struct StabilityNotFound : Error {
    using Error::Error;
};
struct PatternSearchExhausted : Error {
    using Error::Error;
};
struct ImproperPosterior : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Model dimensions
// ---------------------------------------------------------------------------

/// Dimensions of the VAR system. `k()` is the per-equation regressor count
/// (intercept plus n coefficients for each of the p lags).
struct ModelDims {
    int n = 0;  // endogenous variables
    int p = 0;  // lag order
    int r = 0;  // factors / structural shocks
    int T = 0;  // observations in the dataset

    int k() const { return 1 + n * p; }
    // Rows actually usable for estimation once p lags are consumed.
    int t_eff() const { return T - p; }
};

// ---------------------------------------------------------------------------
// Data
// ---------------------------------------------------------------------------

enum class Transform { identity, log };

struct Dataset {
    MatrixXd values;                       // T x n, already transformed
    std::vector<std::string> names;        // n
    std::vector<std::string> time_index;   // T
    std::vector<Transform> transforms;     // n

    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }

    // Exact-match lookups; return -1 when absent.
    int variable_index(const std::string& name) const;
    int time_index_of(const std::string& label) const;
};

// ---------------------------------------------------------------------------
// Restrictions
// ---------------------------------------------------------------------------

/// Two-sided linear inequality region  lower < R x < upper, entries of the
/// bounds may be -inf/+inf for single-sided rows.
struct LinearConstraint {
    MatrixXd R;       // q x d
    VectorXd lower;   // q
    VectorXd upper;   // q

    int rows() const { return static_cast<int>(R.rows()); }
    int dim() const { return static_cast<int>(R.cols()); }

    bool satisfied_strictly(const VectorXd& x) const;

    // Stack another constraint block on the same vector.
    void append(const LinearConstraint& other);

    static LinearConstraint sign_row(int dim, int index, int sign);
};

/// The three restriction families. Equation indices i and dataset-row time
/// indices t are 0-based throughout the library.
struct RestrictionSet {
    std::map<int, LinearConstraint> impact;                 // i -> constraint on l_i
    std::map<int, LinearConstraint> shock;                  // t -> constraint on f_t
    std::map<std::pair<int, int>, LinearConstraint> product;  // (i, t) -> constraint on l_i .* f_t

    bool empty() const { return impact.empty() && shock.empty() && product.empty(); }

    std::set<int> restricted_periods() const;

    void add_impact_sign(int eq, int shock_idx, int sign, int r);
    void add_shock_sign(int t, int shock_idx, int sign, int r);

    /// Strict check of every family; `f_row_offset` maps a dataset row t to
    /// the row t - f_row_offset of F.
    bool satisfied_strictly(const MatrixXd& L, const MatrixXd& F, int f_row_offset) const;
};

// ---------------------------------------------------------------------------
// Priors
// ---------------------------------------------------------------------------

/// Conjugate prior settings. Loading means/covariances may be shared (one
/// entry) or given per equation (n entries).
struct PriorConfig {
    std::vector<VectorXd> loading_mean;   // r each
    std::vector<MatrixXd> loading_cov;    // r x r each, SPD
    double noise_shape = 0.0;             // alpha_0
    double noise_rate = 0.0;              // beta_0
    double intercept_var = 10.0;

    static PriorConfig defaults(int r);

    const VectorXd& loading_mean_for(int eq) const;
    const MatrixXd& loading_cov_for(int eq) const;
};

// ---------------------------------------------------------------------------
// Sampler state
// ---------------------------------------------------------------------------

struct HorseshoeState {
    VectorXd lambda;     // n, global variances
    MatrixXd psi;        // n x (k-1), local variances (slopes only)
    VectorXd z_lambda;   // n
    MatrixXd z_psi;      // n x (k-1)

    static HorseshoeState ones(int n, int k);
};

struct ParameterDraw {
    MatrixXd beta;     // n x k, row i = equation i, intercept first
    MatrixXd L;        // n x r
    VectorXd sigma2;   // n
    MatrixXd F;        // t_eff x r
    HorseshoeState hs;
};

struct ChainConfig {
    int n_iter = 6000;
    int burn_in = 1000;
    int thin = 10;
    std::uint64_t seed = 1;
    int threads = 1;
    int tmvn_sweeps = 10;    // sweeps per constrained draw (warm-started)
    int tmvn_burnin = 100;   // extra sweeps after a cold start

    int retained() const { return (n_iter - burn_in) / thin; }
};

struct PhaseTimings {
    double factors = 0, loadings = 0, var_coeffs = 0, noise = 0, horseshoe = 0;
    double uniqueness = 0, total = 0;  // seconds
};

struct PosteriorChain {
    std::vector<ParameterDraw> draws;
    ChainConfig config;
    std::vector<std::uint8_t> uniqueness_flags;  // per retained draw
    PhaseTimings timing;
};

// ---------------------------------------------------------------------------
// Small shared numeric helpers
// ---------------------------------------------------------------------------

constexpr double kVarFloor = 1e-12;
constexpr double kHsFloor = 1e-12;
constexpr double kHsCap = 1e12;

inline double clamp_variance(double v) { return v < kVarFloor ? kVarFloor : v; }
inline double clamp_hs(double v) {
    if (v < kHsFloor) return kHsFloor;
    if (v > kHsCap) return kHsCap;
    return v;
}

}  // namespace fsvar
