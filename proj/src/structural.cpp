#include "fsvar/structural.hpp"

#include "fsvar/model.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fsvar {

std::vector<NarrativeSign> narrative_signs(const RestrictionSet& restr, int p) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<NarrativeSign> out;
    for (const auto& [t, c] : restr.shock) {
        for (int row = 0; row < c.rows(); ++row) {
            int nz = -1;
            bool unit = true;
            for (int j = 0; j < c.dim(); ++j) {
                const double v = c.R(row, j);
                if (v == 0.0) continue;
                if (nz >= 0 || std::abs(std::abs(v) - 1.0) > 1e-12) {
                    unit = false;
                    break;
                }
                nz = j;
            }
            if (!unit || nz < 0) continue;
            const double coef = c.R(row, nz);
            const double lo = c.lower[row], up = c.upper[row];
            if (lo == 0.0 && up == inf)
                out.push_back({t - p, nz, coef > 0 ? 1 : -1});
            else if (up == 0.0 && lo == -inf)
                out.push_back({t - p, nz, coef > 0 ? -1 : 1});
        }
    }
    return out;
}

std::vector<MatrixXd> lag_matrices(const MatrixXd& beta, const ModelDims& dims) {
    std::vector<MatrixXd> B(dims.p);
    for (int l = 0; l < dims.p; ++l) B[l] = beta.middleCols(1 + l * dims.n, dims.n);
    return B;
}

MatrixXd companion_matrix(const std::vector<MatrixXd>& B) {
    const int p = static_cast<int>(B.size());
    const int n = static_cast<int>(B.front().rows());
    MatrixXd C = MatrixXd::Zero(n * p, n * p);
    for (int l = 0; l < p; ++l) C.block(0, l * n, n, n) = B[l];
    if (p > 1) C.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
    return C;
}

double spectral_radius(const MatrixXd& m) {
    Eigen::EigenSolver<MatrixXd> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<MatrixXd> vma_matrices(const MatrixXd& beta, const ModelDims& dims, int H) {
    const auto B = lag_matrices(beta, dims);
    std::vector<MatrixXd> psi(H);
    psi[0] = MatrixXd::Identity(dims.n, dims.n);
    for (int h = 1; h < H; ++h) {
        psi[h] = MatrixXd::Zero(dims.n, dims.n);
        for (int l = 1; l <= std::min(h, dims.p); ++l) psi[h] += B[l - 1] * psi[h - l];
    }
    return psi;
}

std::vector<MatrixXd> irf(const ParameterDraw& draw, const ModelDims& dims, int H) {
    if (H < 1) throw ValidationError("irf: H must be >= 1");
    const auto psi = vma_matrices(draw.beta, dims, H);
    std::vector<MatrixXd> out(H);
    for (int h = 0; h < H; ++h) out[h] = psi[h] * draw.L;
    return out;
}

std::vector<MatrixXd> fevd(const ParameterDraw& draw, const ModelDims& dims, int H) {
    if (H < 1) throw ValidationError("fevd: H must be >= 1");
    const int n = dims.n, r = dims.r;
    const auto psi = vma_matrices(draw.beta, dims, H);
    MatrixXd shock_acc = MatrixXd::Zero(n, r);
    VectorXd idio_acc = VectorXd::Zero(n);
    std::vector<MatrixXd> out(H);
    for (int h = 0; h < H; ++h) {
        const MatrixXd resp = psi[h] * draw.L;
        shock_acc += resp.cwiseAbs2();
        idio_acc += psi[h].cwiseAbs2() * draw.sigma2;
        out[h].resize(n, r + 1);
        for (int i = 0; i < n; ++i) {
            const double total = shock_acc.row(i).sum() + idio_acc[i];
            out[h].row(i).head(r) = shock_acc.row(i) / total;
            out[h](i, r) = idio_acc[i] / total;
        }
    }
    return out;
}

namespace {

// out(t, :) = sum_{s<=t} psi_s * input(t-s, :)'
MatrixXd propagate(const std::vector<MatrixXd>& psi, const MatrixXd& input) {
    const int S = static_cast<int>(input.rows());
    const int n = static_cast<int>(input.cols());
    MatrixXd out = MatrixXd::Zero(S, n);
    for (int t = 0; t < S; ++t)
        for (int s = 0; s <= t; ++s)
            out.row(t) += (psi[s] * input.row(t - s).transpose()).transpose();
    return out;
}

}  // namespace

HistoricalDecomposition historical_decomposition(const ParameterDraw& draw,
                                                 const Dataset& data, const ModelDims& dims) {
    const int n = dims.n, r = dims.r, p = dims.p;
    const int S = dims.t_eff();
    if (draw.F.rows() != S)
        throw ValidationError("historical_decomposition: F rows do not match the data periods");

    const MatrixXd Y = effective_rows(data.values, p);
    const MatrixXd X = lag_design(data.values, p);
    const auto psi = vma_matrices(draw.beta, dims, S);
    const auto B = lag_matrices(draw.beta, dims);

    HistoricalDecomposition hd;
    hd.shock_contrib.resize(r);
    for (int j = 0; j < r; ++j) {
        const MatrixXd input = draw.F.col(j) * draw.L.col(j).transpose();  // S x n
        hd.shock_contrib[j] = propagate(psi, input);
    }
    const MatrixXd resid = Y - X * draw.beta.transpose() - draw.F * draw.L.transpose();
    hd.idio = propagate(psi, resid);

    // Deterministic path: the VAR run forward from the observed initial lags
    // with all shocks removed.
    const VectorXd b0 = draw.beta.col(0);
    std::vector<VectorXd> lags(p);
    for (int l = 0; l < p; ++l) lags[l] = data.values.row(p - 1 - l).transpose();
    hd.remainder.resize(S, n);
    for (int t = 0; t < S; ++t) {
        VectorXd d = b0;
        for (int l = 0; l < p; ++l) d += B[l] * lags[l];
        hd.remainder.row(t) = d.transpose();
        for (int l = p - 1; l > 0; --l) lags[l] = lags[l - 1];
        lags[0] = d;
    }
    return hd;
}

ShockProjection project_shocks(const ParameterDraw& draw, const Dataset& data,
                               const ModelDims& dims) {
    const int r = dims.r;
    Eigen::FullPivLU<MatrixXd> lu(draw.L);
    if (lu.rank() < r)
        throw RankDeficientLoadings("project_shocks: loading matrix has rank " +
                                    std::to_string(lu.rank()) + " < " + std::to_string(r));
    const MatrixXd LtL = draw.L.transpose() * draw.L;
    const MatrixXd A = LtL.llt().solve(draw.L.transpose());  // r x n

    const MatrixXd Y = effective_rows(data.values, dims.p);
    const MatrixXd X = lag_design(data.values, dims.p);
    const MatrixXd E = Y - X * draw.beta.transpose();

    ShockProjection out;
    out.shocks = E * A.transpose();
    out.correlation.resize(r);
    for (int j = 0; j < r; ++j) {
        const VectorXd a = out.shocks.col(j).array() - out.shocks.col(j).mean();
        const VectorXd b = draw.F.col(j).array() - draw.F.col(j).mean();
        const double denom = a.norm() * b.norm();
        out.correlation[j] = denom > 0 ? a.dot(b) / denom : 0.0;
    }
    return out;
}

bool check_sign_uniqueness(const MatrixXd& L, const MatrixXd& F, const MatrixXi& sign_table,
                           const std::vector<NarrativeSign>& narrative) {
    const int r = static_cast<int>(L.cols());
    std::vector<int> rows;
    for (int i = 0; i < sign_table.rows(); ++i) {
        if ((sign_table.row(i).array() != 0).any()) rows.push_back(i);
    }
    std::vector<int> periods;
    for (const auto& ns : narrative) periods.push_back(ns.f_row);
    std::sort(periods.begin(), periods.end());
    periods.erase(std::unique(periods.begin(), periods.end()), periods.end());

    const auto sgn = [](double v) { return (v > 0) - (v < 0); };
    MatrixXi pattern(static_cast<int>(rows.size() + periods.size()), r);
    for (int j = 0; j < r; ++j) {
        int m = 0;
        for (const int i : rows) pattern(m++, j) = sgn(L(i, j));
        for (const int t : periods) pattern(m++, j) = sgn(F(t, j));
    }
    if (pattern.rows() == 0) return true;
    for (int a = 0; a < r; ++a) {
        for (int b = a + 1; b < r; ++b) {
            if (pattern.col(a) == pattern.col(b) || pattern.col(a) == -pattern.col(b))
                return false;
        }
    }
    return true;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile: empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * (static_cast<double>(values.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

}  // namespace fsvar
