#include "fsvar/dgp.hpp"

#include "fsvar/model.hpp"
#include "fsvar/structural.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fsvar::dgp {

VarCoefficients generate_coefficients(const DgpConfig& cfg, RngStream& rng) {
    const int n = cfg.n;
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        VarCoefficients c;
        c.intercept.resize(n);
        for (int i = 0; i < n; ++i) c.intercept[i] = rng.uniform(-1.0, 1.0);
        c.B.resize(cfg.p);
        c.B[0].resize(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                c.B[0](i, j) = (i == j) ? rng.uniform(0.0, 0.3) : rng.uniform(-0.1, 0.1);
        for (int l = 2; l <= cfg.p; ++l) {
            const double sd = 0.05 / std::sqrt(static_cast<double>(l));
            c.B[l - 1].resize(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) c.B[l - 1](i, j) = sd * rng.normal();
        }
        if (spectral_radius(companion_matrix(c.B)) < cfg.stability_bound) return c;
    }
    throw StabilityNotFound("generate_coefficients: no stable system within " +
                            std::to_string(cfg.max_attempts) + " attempts");
}

MatrixXd generate_loadings(const DgpConfig& cfg, RngStream& rng) {
    MatrixXd L(cfg.n, cfg.m);
    for (int i = 0; i < cfg.n; ++i) {
        double nrm = 0.0;
        do {
            for (int j = 0; j < cfg.m; ++j) L(i, j) = rng.normal();
            nrm = L.row(i).norm();
        } while (nrm < 1e-12);
        L.row(i) /= nrm;
    }
    return L;
}

SimulationResult simulate(const DgpConfig& cfg, const VarCoefficients& coeffs,
                          const MatrixXd& L, RngStream& rng) {
    const int n = cfg.n, m = cfg.m, p = cfg.p;
    const int T_full = cfg.T + cfg.burn_in;
    const double shock_sd = std::sqrt(cfg.shock_var);

    MatrixXd F(T_full, m);
    for (int t = 0; t < T_full; ++t)
        for (int j = 0; j < m; ++j) F(t, j) = shock_sd * rng.normal();

    MatrixXd Y = MatrixXd::Zero(T_full, n);
    for (int t = 0; t < T_full; ++t) {
        VectorXd y = coeffs.intercept;
        for (int l = 1; l <= p; ++l) {
            if (t - l >= 0) y += coeffs.B[l - 1] * Y.row(t - l).transpose();
        }
        y += L * F.row(t).transpose();
        for (int i = 0; i < n; ++i) y[i] += cfg.obs_mu + cfg.obs_sigma * rng.normal();
        Y.row(t) = y.transpose();
    }

    SimulationResult out;
    out.data.values = Y.bottomRows(cfg.T);
    out.shocks = F.bottomRows(cfg.T);
    out.data.names.resize(n);
    out.data.transforms.assign(n, Transform::identity);
    for (int i = 0; i < n; ++i) out.data.names[i] = "y" + std::to_string(i + 1);
    out.data.time_index.resize(cfg.T);
    for (int t = 0; t < cfg.T; ++t) out.data.time_index[t] = std::to_string(t + 1);
    return out;
}

namespace {

bool patterns_unique(const MatrixXi& table) {
    const int r = static_cast<int>(table.cols());
    for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b)
            if (table.col(a) == table.col(b) || table.col(a) == -table.col(b)) return false;
    return true;
}

}  // namespace

RestrictionSet generate_restrictions(const MatrixXd& L_true, const MatrixXd& F_true,
                                     int n_impact, int n_shock, RngStream& rng,
                                     int min_period) {
    const int n = static_cast<int>(L_true.rows());
    const int m = static_cast<int>(L_true.cols());
    const int T = static_cast<int>(F_true.rows());
    if (n_impact < 2 * m)
        throw PatternSearchExhausted(
            "generate_restrictions: need at least two impact restrictions per shock");
    if (n_impact > n * m || n_shock > (T - min_period) * m)
        throw PatternSearchExhausted("generate_restrictions: more restrictions than cells");

    const auto sgn = [](double v) { return v > 0 ? 1 : -1; };

    constexpr int kAttempts = 10000;
    MatrixXi table;
    bool found = false;
    for (int attempt = 0; attempt < kAttempts && !found; ++attempt) {
        table = MatrixXi::Zero(n, m);
        // Two cells per column first, then the remainder anywhere unused.
        const auto pick_index = [&rng](std::size_t count) {
            return std::min(static_cast<std::size_t>(rng.uniform() * count), count - 1);
        };
        for (int j = 0; j < m; ++j) {
            const int i1 = static_cast<int>(pick_index(n));
            int i2 = i1;
            while (i2 == i1) i2 = static_cast<int>(pick_index(n));
            table(i1, j) = sgn(L_true(i1, j));
            table(i2, j) = sgn(L_true(i2, j));
        }
        std::vector<std::pair<int, int>> free_cells;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j)
                if (table(i, j) == 0) free_cells.emplace_back(i, j);
        for (int placed = 2 * m; placed < n_impact; ++placed) {
            const std::size_t idx = pick_index(free_cells.size());
            const auto [i, j] = free_cells[idx];
            free_cells.erase(free_cells.begin() + static_cast<long>(idx));
            table(i, j) = sgn(L_true(i, j));
        }
        found = patterns_unique(table);
    }
    if (!found)
        throw PatternSearchExhausted(
            "generate_restrictions: no unique sign pattern found within the attempt budget");

    RestrictionSet restr = expand_signs(table);

    std::vector<std::pair<int, int>> cells;
    for (int t = min_period; t < T; ++t)
        for (int j = 0; j < m; ++j)
            if (std::abs(F_true(t, j)) > 1e-300) cells.emplace_back(t, j);
    for (int s = 0; s < n_shock; ++s) {
        const auto idx =
            std::min(static_cast<std::size_t>(rng.uniform() * cells.size()), cells.size() - 1);
        const auto [t, j] = cells[idx];
        cells.erase(cells.begin() + static_cast<long>(idx));
        restr.add_shock_sign(t, j, sgn(F_true(t, j)), m);
    }

    if (!restr.satisfied_strictly(L_true, F_true, 0))
        throw PatternSearchExhausted(
            "generate_restrictions: generated restrictions reject the truth");
    return restr;
}

}  // namespace fsvar::dgp
