#pragma once

#include "fsvar/types.hpp"

namespace fsvar {

/// One sign restriction on a structural shock in a specific period,
/// expressed in rows of F.
struct NarrativeSign {
    int f_row;
    int shock;
    int sign;  // +1 or -1
};

/// Unit-row, single-sided shock constraints of a restriction set as
/// narrative sign entries; other shock-constraint rows are skipped.
std::vector<NarrativeSign> narrative_signs(const RestrictionSet& restr, int p);

/// Lag matrices B_1..B_p from a stacked coefficient matrix (intercept first).
std::vector<MatrixXd> lag_matrices(const MatrixXd& beta, const ModelDims& dims);

/// np x np companion form of the lag matrices.
MatrixXd companion_matrix(const std::vector<MatrixXd>& B);

double spectral_radius(const MatrixXd& m);

/// VMA coefficient matrices Psi_0..Psi_{H-1} (Psi_0 = I).
std::vector<MatrixXd> vma_matrices(const MatrixXd& beta, const ModelDims& dims, int H);

/// Responses to one-standard-deviation shocks: H matrices of size n x r,
/// entry (i, j) of matrix h is the response of variable i at horizon h.
std::vector<MatrixXd> irf(const ParameterDraw& draw, const ModelDims& dims, int H);

/// Forecast error variance shares: H matrices of size n x (r+1); the last
/// column is the idiosyncratic share. Every row sums to one.
std::vector<MatrixXd> fevd(const ParameterDraw& draw, const ModelDims& dims, int H);

struct HistoricalDecomposition {
    std::vector<MatrixXd> shock_contrib;  // r matrices, t_eff x n
    MatrixXd idio;                        // t_eff x n
    MatrixXd remainder;                   // t_eff x n, deterministic + initial conditions
};

/// Additive attribution of the observed path: shock contributions plus the
/// idiosyncratic component plus the independently propagated remainder
/// reconstruct the data exactly.
HistoricalDecomposition historical_decomposition(const ParameterDraw& draw,
                                                 const Dataset& data, const ModelDims& dims);

struct ShockProjection {
    MatrixXd shocks;       // t_eff x r
    VectorXd correlation;  // r, against the sampled factors
};

/// Diagnostic least-squares projection of the structural shocks from the
/// data, using the generalized inverse of the loading matrix.
ShockProjection project_shocks(const ParameterDraw& draw, const Dataset& data,
                               const ModelDims& dims);

/// True when no two shock columns realize identical or exactly negated sign
/// patterns over the restricted impact cells and narrative periods.
bool check_sign_uniqueness(const MatrixXd& L, const MatrixXd& F, const MatrixXi& sign_table,
                           const std::vector<NarrativeSign>& narrative);

/// Interpolated quantile of a sample (q in [0, 1]).
double quantile(std::vector<double> values, double q);

}  // namespace fsvar
