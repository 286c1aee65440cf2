#include "fsvar/sampler.hpp"

#include "fsvar/model.hpp"
#include "fsvar/structural.hpp"
#include "fsvar/tmvn.hpp"
#include "parallel_for.hpp"

#include <Eigen/Cholesky>

#include <chrono>
#include <cmath>

namespace fsvar {

namespace {

enum Step : std::uint64_t {
    kInitLoadings = 0,
    kInitFactors = 1,
    kFactors = 2,
    kLoadings = 3,
    kVarCoeffs = 4,
    kNoise = 5,
    kHorseshoe = 6,
};

TmvnOptions tmvn_options(const GibbsOptions& opt) {
    TmvnOptions t;
    t.sweeps_per_draw = opt.tmvn_sweeps;
    t.burnin_sweeps = opt.tmvn_burnin;
    return t;
}

// Constraint on f_t implied by the product restrictions active at that
// period, linear in f given the current loadings.
LinearConstraint product_rows_for_factor(
    const std::vector<std::pair<int, LinearConstraint>>& items, const MatrixXd& L) {
    LinearConstraint out;
    for (const auto& [eq, c] : items) {
        LinearConstraint rows = c;
        rows.R = c.R * L.row(eq).asDiagonal();
        out.append(rows);
    }
    return out;
}

// Constraint on l_i implied by the product restrictions on equation i,
// linear in l given the current factors.
LinearConstraint product_rows_for_loading(
    const std::vector<std::pair<int, LinearConstraint>>& items, const MatrixXd& F) {
    LinearConstraint out;
    for (const auto& [row, c] : items) {
        LinearConstraint rows = c;
        rows.R = c.R * F.row(row).asDiagonal();
        out.append(rows);
    }
    return out;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

EstimationInput EstimationInput::prepare(const ModelDims& dims, const Dataset& data,
                                         const RestrictionSet& restr,
                                         const PriorConfig& prior) {
    EstimationInput in;
    in.dims = dims;
    in.prior = prior;
    in.restr = restr;
    in.Y = effective_rows(data.values, dims.p);
    in.X = lag_design(data.values, dims.p);
    in.XtX = in.X.transpose() * in.X;
    in.XtY = in.X.transpose() * in.Y;

    for (const auto& [t, c] : restr.shock) in.shock_at[t - dims.p] = c;
    for (const auto& [key, c] : restr.product) {
        const auto [i, t] = key;
        in.product_at_row[t - dims.p].emplace_back(i, c);
        in.product_at_eq[i].emplace_back(t - dims.p, c);
    }

    const std::size_t n_cov = prior.loading_cov.size();
    in.loading_prec.resize(n_cov);
    in.loading_prec_mean.resize(n_cov);
    for (std::size_t e = 0; e < n_cov; ++e) {
        Eigen::LLT<MatrixXd> llt(prior.loading_cov[e]);
        if (llt.info() != Eigen::Success)
            throw NumericallyDegenerate("prior loading covariance is not positive definite");
        in.loading_prec[e] = llt.solve(MatrixXd::Identity(dims.r, dims.r));
        const VectorXd& mean = prior.loading_mean.size() == 1
                                   ? prior.loading_mean.front()
                                   : prior.loading_mean[std::min(e, prior.loading_mean.size() - 1)];
        in.loading_prec_mean[e] = in.loading_prec[e] * mean;
    }
    return in;
}

MatrixXd sample_factors(const ParameterDraw& state, const EstimationInput& in,
                        std::uint64_t seed, std::uint64_t iteration, GibbsOptions opt) {
    const int r = in.dims.r;
    const int S = in.dims.t_eff();

    const VectorXd sinv = state.sigma2.cwiseMax(kVarFloor).cwiseInverse();
    const MatrixXd LtSi = state.L.transpose() * sinv.asDiagonal();  // r x n
    MatrixXd K = LtSi * state.L;
    K.diagonal().array() += 1.0;
    Eigen::LLT<MatrixXd> llt(K);
    if (llt.info() != Eigen::Success)
        throw NumericallyDegenerate("factor step: posterior precision not positive definite");

    const MatrixXd E = in.Y - in.X * state.beta.transpose();       // t_eff x n
    const MatrixXd M = E * LtSi.transpose();                       // t_eff x r
    const MatrixXd Fhat = llt.solve(M.transpose()).transpose();    // t_eff x r
    const MatrixXd G =
        llt.matrixU().solve(MatrixXd::Identity(r, r));  // G G' = K^{-1}

    MatrixXd Fnew(S, r);
    const TmvnOptions topt = tmvn_options(opt);
    detail::parallel_for(S, opt.threads, [&](int t) {
        RngStream rng = RngStream::substream(seed, iteration, kFactors, t);
        const bool has_shock = in.shock_at.count(t) > 0;
        const auto prod_it = in.product_at_row.find(t);
        const bool has_product = prod_it != in.product_at_row.end();
        if (!has_shock && !has_product) {
            VectorXd z(r);
            for (int j = 0; j < r; ++j) z[j] = rng.normal();
            Fnew.row(t) = (Fhat.row(t).transpose() + G * z).transpose();
            return;
        }
        LinearConstraint c;
        if (has_shock) c.append(in.shock_at.at(t));
        if (has_product) c.append(product_rows_for_factor(prod_it->second, state.L));
        const VectorXd mean = Fhat.row(t).transpose();
        const VectorXd start = state.F.row(t).transpose();
        try {
            TmvnSampler sampler(mean, G, c, rng, topt, &start);
            Fnew.row(t) = sampler.draw(rng).transpose();
        } catch (const InfeasibleRegion& e) {
            throw InfeasibleRegion("factor step, period " + std::to_string(t + in.dims.p + 1) +
                                   ": " + e.what());
        }
    });
    return Fnew;
}

MatrixXd sample_loadings(const ParameterDraw& state, const EstimationInput& in,
                         std::uint64_t seed, std::uint64_t iteration, GibbsOptions opt) {
    const int n = in.dims.n;
    const int r = in.dims.r;

    const MatrixXd FtF = state.F.transpose() * state.F;            // r x r
    const MatrixXd E = in.Y - in.X * state.beta.transpose();       // t_eff x n
    const MatrixXd FtE = state.F.transpose() * E;                  // r x n

    MatrixXd Lnew(n, r);
    const TmvnOptions topt = tmvn_options(opt);
    detail::parallel_for(n, opt.threads, [&](int i) {
        RngStream rng = RngStream::substream(seed, iteration, kLoadings, i);
        const double si = 1.0 / std::max(state.sigma2[i], kVarFloor);
        MatrixXd K = in.prec_for(i) + si * FtF;
        Eigen::LLT<MatrixXd> llt(K);
        if (llt.info() != Eigen::Success)
            throw NumericallyDegenerate("loading step: posterior precision not positive definite");
        const VectorXd lhat = llt.solve(in.prec_mean_for(i) + si * FtE.col(i));

        LinearConstraint c;
        const auto imp_it = in.restr.impact.find(i);
        if (imp_it != in.restr.impact.end()) c.append(imp_it->second);
        const auto prod_it = in.product_at_eq.find(i);
        if (prod_it != in.product_at_eq.end())
            c.append(product_rows_for_loading(prod_it->second, state.F));

        if (c.rows() == 0) {
            VectorXd z(r);
            for (int j = 0; j < r; ++j) z[j] = rng.normal();
            Lnew.row(i) = (lhat + llt.matrixU().solve(z)).transpose();
            return;
        }
        const MatrixXd G = llt.matrixU().solve(MatrixXd::Identity(r, r));
        const VectorXd start = state.L.row(i).transpose();
        try {
            TmvnSampler sampler(lhat, G, c, rng, topt, &start);
            Lnew.row(i) = sampler.draw(rng).transpose();
        } catch (const InfeasibleRegion& e) {
            throw InfeasibleRegion("loading step, equation " + std::to_string(i + 1) + ": " +
                                   e.what());
        }
    });
    return Lnew;
}

MatrixXd sample_var_coeffs(const ParameterDraw& state, const EstimationInput& in,
                           std::uint64_t seed, std::uint64_t iteration, GibbsOptions opt) {
    const int n = in.dims.n;
    const int k = in.dims.k();

    const MatrixXd XtF = in.X.transpose() * state.F;  // k x r

    MatrixXd Bnew(n, k);
    detail::parallel_for(n, opt.threads, [&](int i) {
        RngStream rng = RngStream::substream(seed, iteration, kVarCoeffs, i);
        const double si = 1.0 / std::max(state.sigma2[i], kVarFloor);
        MatrixXd K = si * in.XtX;
        K(0, 0) += 1.0 / in.prior.intercept_var;
        for (int j = 1; j < k; ++j)
            K(j, j) += 1.0 / clamp_hs(state.hs.lambda[i] * state.hs.psi(i, j - 1));
        Eigen::LLT<MatrixXd> llt(K);
        if (llt.info() != Eigen::Success)
            throw NumericallyDegenerate("coefficient step: posterior precision not positive definite");
        const VectorXd rhs = si * (in.XtY.col(i) - XtF * state.L.row(i).transpose());
        const VectorXd bhat = llt.solve(rhs);
        VectorXd z(k);
        for (int j = 0; j < k; ++j) z[j] = rng.normal();
        Bnew.row(i) = (bhat + llt.matrixU().solve(z)).transpose();
    });
    return Bnew;
}

VectorXd sample_noise_vars(const ParameterDraw& state, const EstimationInput& in,
                           std::uint64_t seed, std::uint64_t iteration, GibbsOptions opt) {
    const int n = in.dims.n;
    const int S = in.dims.t_eff();

    const MatrixXd resid =
        in.Y - in.X * state.beta.transpose() - state.F * state.L.transpose();

    VectorXd s2(n);
    detail::parallel_for(n, opt.threads, [&](int i) {
        RngStream rng = RngStream::substream(seed, iteration, kNoise, i);
        const double shape = in.prior.noise_shape + 0.5 * S;
        const double rate = in.prior.noise_rate + 0.5 * resid.col(i).squaredNorm();
        if (!(shape > 0.0) || !(rate > 0.0))
            throw DegeneratePosterior("noise step, equation " + std::to_string(i + 1) +
                                      ": nonpositive inverse-gamma parameters");
        s2[i] = clamp_variance(rng.inverse_gamma(shape, rate));
    });
    return s2;
}

HorseshoeState sample_horseshoe(const MatrixXd& beta, const HorseshoeState& hs,
                                std::uint64_t seed, std::uint64_t iteration) {
    const int n = static_cast<int>(beta.rows());
    const int k = static_cast<int>(beta.cols());
    HorseshoeState out = hs;
    for (int i = 0; i < n; ++i) {
        RngStream rng = RngStream::substream(seed, iteration, kHorseshoe, i);
        double ssum = 0.0;
        for (int j = 1; j < k; ++j)
            ssum += beta(i, j) * beta(i, j) / (2.0 * hs.psi(i, j - 1));
        const double lam =
            clamp_hs(rng.inverse_gamma(0.5 * k, 1.0 / hs.z_lambda[i] + ssum));
        out.lambda[i] = lam;
        for (int j = 1; j < k; ++j) {
            const double rate = 1.0 / hs.z_psi(i, j - 1) + beta(i, j) * beta(i, j) / (2.0 * lam);
            out.psi(i, j - 1) = clamp_hs(rng.inverse_gamma(1.0, rate));
        }
        out.z_lambda[i] = clamp_hs(rng.inverse_gamma(1.0, 1.0 + 1.0 / lam));
        for (int j = 1; j < k; ++j)
            out.z_psi(i, j - 1) = clamp_hs(rng.inverse_gamma(1.0, 1.0 + 1.0 / out.psi(i, j - 1)));
    }
    return out;
}

ParameterDraw initial_draw(const EstimationInput& in, std::uint64_t seed, GibbsOptions opt) {
    const int n = in.dims.n;
    const int r = in.dims.r;
    const int k = in.dims.k();
    const int S = in.dims.t_eff();
    const TmvnOptions topt = tmvn_options(opt);

    ParameterDraw state;
    state.beta = MatrixXd::Zero(n, k);
    state.hs = HorseshoeState::ones(n, k);
    state.sigma2.resize(n);
    for (int i = 0; i < n; ++i) {
        const double mean = in.Y.col(i).mean();
        const double var = (in.Y.col(i).array() - mean).square().sum() / std::max(1, S - 1);
        state.sigma2[i] = clamp_variance(var);
    }

    state.L.resize(n, r);
    for (int i = 0; i < n; ++i) {
        RngStream rng = RngStream::substream(seed, 0, kInitLoadings, i);
        const auto it = in.restr.impact.find(i);
        if (it == in.restr.impact.end()) {
            Eigen::LLT<MatrixXd> llt(in.prior.loading_cov_for(i));
            VectorXd z(r);
            for (int j = 0; j < r; ++j) z[j] = rng.normal();
            state.L.row(i) =
                (in.prior.loading_mean_for(i) + MatrixXd(llt.matrixL()) * z).transpose();
        } else {
            TruncatedGaussianProblem prob{in.prior.loading_mean_for(i),
                                          in.prior.loading_cov_for(i), it->second};
            state.L.row(i) = sample_tmvn(prob, rng, topt).transpose();
        }
    }

    state.F.resize(S, r);
    for (int t = 0; t < S; ++t) {
        RngStream rng = RngStream::substream(seed, 0, kInitFactors, t);
        LinearConstraint c;
        if (auto it = in.shock_at.find(t); it != in.shock_at.end()) c.append(it->second);
        if (auto it = in.product_at_row.find(t); it != in.product_at_row.end())
            c.append(product_rows_for_factor(it->second, state.L));
        if (c.rows() == 0) {
            for (int j = 0; j < r; ++j) state.F(t, j) = rng.normal();
        } else {
            TruncatedGaussianProblem prob{VectorXd::Zero(r), MatrixXd::Identity(r, r), c};
            try {
                state.F.row(t) = sample_tmvn(prob, rng, topt).transpose();
            } catch (const InfeasibleRegion& e) {
                throw InfeasibleRegion("initialization, period " +
                                       std::to_string(t + in.dims.p + 1) + ": " + e.what());
            }
        }
    }
    return state;
}

double data_log_likelihood(const ParameterDraw& state, const EstimationInput& in) {
    const int n = in.dims.n;
    const MatrixXd E = in.Y - in.X * state.beta.transpose();
    MatrixXd V = state.L * state.L.transpose();
    V.diagonal() += state.sigma2;
    Eigen::LLT<MatrixXd> llt(V);
    if (llt.info() != Eigen::Success)
        throw NumericallyDegenerate("log-likelihood: error covariance not positive definite");
    const MatrixXd Lc = llt.matrixL();
    double logdet = 0.0;
    for (int i = 0; i < n; ++i) logdet += 2.0 * std::log(Lc(i, i));
    const MatrixXd W = llt.matrixL().solve(E.transpose());  // n x t_eff
    const double quad = W.squaredNorm();
    const double cst = in.dims.t_eff() * (n * std::log(2.0 * M_PI) + logdet);
    return -0.5 * (cst + quad);
}

PosteriorChain run_gibbs(const ChainConfig& config, const ModelDims& dims,
                         const Dataset& data, const RestrictionSet& restr,
                         const PriorConfig& prior) {
    if (config.burn_in < 0 || config.burn_in >= config.n_iter || config.thin < 1)
        throw ValidationError("chain config: requires 0 <= burn_in < n_iter and thin >= 1");
    const ValidationReport rep = validate(dims, data, restr, prior);
    if (!rep.ok()) throw ValidationError("validation failed: " + rep.joined());

    const EstimationInput in = EstimationInput::prepare(dims, data, restr, prior);
    GibbsOptions opt;
    opt.tmvn_sweeps = config.tmvn_sweeps;
    opt.tmvn_burnin = config.tmvn_burnin;
    opt.threads = config.threads;

    const MatrixXi sign_table = impact_sign_table(restr, dims.n, dims.r);
    const std::vector<NarrativeSign> narrative = narrative_signs(restr, dims.p);

    PosteriorChain chain;
    chain.config = config;
    chain.draws.reserve(config.retained());

    const auto t_start = std::chrono::steady_clock::now();
    ParameterDraw state = initial_draw(in, config.seed, opt);

    for (int iter = 1; iter <= config.n_iter; ++iter) {
        auto t0 = std::chrono::steady_clock::now();
        state.F = sample_factors(state, in, config.seed, iter, opt);
        chain.timing.factors += seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        state.L = sample_loadings(state, in, config.seed, iter, opt);
        chain.timing.loadings += seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        state.beta = sample_var_coeffs(state, in, config.seed, iter, opt);
        chain.timing.var_coeffs += seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        state.sigma2 = sample_noise_vars(state, in, config.seed, iter, opt);
        chain.timing.noise += seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        state.hs = sample_horseshoe(state.beta, state.hs, config.seed, iter);
        chain.timing.horseshoe += seconds_since(t0);

        if (iter > config.burn_in && (iter - config.burn_in) % config.thin == 0) {
            if (!restr.satisfied_strictly(state.L, state.F, dims.p))
                throw Error("retained draw violates the restriction set at iteration " +
                            std::to_string(iter));
            t0 = std::chrono::steady_clock::now();
            chain.uniqueness_flags.push_back(
                check_sign_uniqueness(state.L, state.F, sign_table, narrative) ? 1 : 0);
            chain.timing.uniqueness += seconds_since(t0);
            chain.draws.push_back(state);
        }
    }
    chain.timing.total = seconds_since(t_start);
    return chain;
}

}  // namespace fsvar
