#include "fsvar/tmvn.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <sstream>

namespace fsvar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2Pi = 2.5066282746310002;

// Standard normal truncated to (alpha, inf), alpha finite.
double tn_lower_std(double alpha, RngStream& rng) {
    if (alpha <= 0.45) {
        for (;;) {
            const double x = rng.normal();
            if (x > alpha) return x;
        }
    }
    // Translated-exponential proposal (Robert 1995), exact for any tail.
    const double lam = 0.5 * (alpha + std::sqrt(alpha * alpha + 4.0));
    for (;;) {
        const double x = alpha + rng.exponential(lam);
        const double d = x - lam;
        if (std::log(rng.uniform()) <= -0.5 * d * d) return x;
    }
}

// Standard normal truncated to (alpha, beta) with 0 <= alpha < beta.
double tn_two_tail_std(double alpha, double beta, RngStream& rng) {
    const double root = std::sqrt(alpha * alpha + 4.0);
    const double lam = 0.5 * (alpha + root);
    // Crossover between uniform and exponential proposals (Robert 1995).
    const double cutoff =
        alpha + 2.0 * std::sqrt(std::exp(1.0)) / (alpha + root) *
                    std::exp(0.25 * (alpha * alpha - alpha * root));
    if (beta < cutoff) {
        for (;;) {
            const double x = rng.uniform(alpha, beta);
            if (std::log(rng.uniform()) <= 0.5 * (alpha * alpha - x * x)) return x;
        }
    }
    const double tail_mass = 1.0 - std::exp(-lam * (beta - alpha));
    for (;;) {
        const double x = alpha - std::log1p(-rng.uniform() * tail_mass) / lam;
        const double d = x - lam;
        if (std::log(rng.uniform()) <= -0.5 * d * d) return x;
    }
}

// Standard normal truncated to (alpha, beta), any bounds.
double tn_std(double alpha, double beta, RngStream& rng) {
    if (alpha == -kInf && beta == kInf) return rng.normal();
    if (beta == kInf) return tn_lower_std(alpha, rng);
    if (alpha == -kInf) return -tn_lower_std(-beta, rng);
    if (alpha >= 0.0) return tn_two_tail_std(alpha, beta, rng);
    if (beta <= 0.0) return -tn_two_tail_std(-beta, -alpha, rng);
    // Interval straddles the mode.
    if (beta - alpha < kSqrt2Pi) {
        for (;;) {
            const double x = rng.uniform(alpha, beta);
            if (std::log(rng.uniform()) <= -0.5 * x * x) return x;
        }
    }
    for (;;) {
        const double x = rng.normal();
        if (x > alpha && x < beta) return x;
    }
}

}  // namespace

double sample_truncated_univariate(double mu, double sd, double a, double b, RngStream& rng) {
    if (!(a < b)) throw InvalidBounds("sample_truncated_univariate: requires a < b");
    if (!(sd > 0.0)) throw InvalidBounds("sample_truncated_univariate: requires sd > 0");
    const double alpha = (a - mu) / sd;
    const double beta = (b - mu) / sd;
    double x = mu + sd * tn_std(alpha, beta, rng);
    // Keep the draw strictly inside the open interval.
    if (x <= a) x = std::nextafter(a, b);
    if (x >= b) x = std::nextafter(b, a);
    if (!(x > a && x < b))
        throw NumericallyDegenerate("sample_truncated_univariate: interval has no interior");
    return x;
}

// ---------------------------------------------------------------------------
// TmvnSampler
// ---------------------------------------------------------------------------

TmvnSampler::TmvnSampler(const TruncatedGaussianProblem& problem, RngStream& rng,
                         TmvnOptions opt)
    : mean_(problem.mean), opt_(opt) {
    Eigen::LLT<MatrixXd> llt(problem.cov);
    if (llt.info() != Eigen::Success)
        throw NumericallyDegenerate("tmvn: covariance is not positive definite");
    G_ = llt.matrixL();
    R_orig_ = problem.constraint.R;
    lo_orig_ = problem.constraint.lower;
    up_orig_ = problem.constraint.upper;
    init(rng, nullptr);
}

TmvnSampler::TmvnSampler(const VectorXd& mean, const MatrixXd& whitener,
                         const LinearConstraint& constraint, RngStream& rng,
                         TmvnOptions opt, const VectorXd* start)
    : mean_(mean), G_(whitener), opt_(opt) {
    R_orig_ = constraint.R;
    lo_orig_ = constraint.lower;
    up_orig_ = constraint.upper;
    init(rng, start);
}

void TmvnSampler::init(RngStream& rng, const VectorXd* start) {
    const int d = dim();
    const int q_in = static_cast<int>(R_orig_.rows());

    std::vector<int> keep;
    for (int i = 0; i < q_in; ++i) {
        if (lo_orig_[i] >= up_orig_[i])
            throw InfeasibleRegion("tmvn: constraint row with lower >= upper");
        if (lo_orig_[i] == -kInf && up_orig_[i] == kInf) continue;  // vacuous
        if (R_orig_.row(i).norm() < 1e-12)
            throw NumericallyDegenerate("tmvn: constraint row has near-zero norm");
        keep.push_back(i);
    }
    const int q = static_cast<int>(keep.size());
    A_.resize(q, d);
    lo_.resize(q);
    up_.resize(q);
    for (int m = 0; m < q; ++m) {
        const int i = keep[m];
        Eigen::RowVectorXd a = R_orig_.row(i) * G_;
        const double nrm = a.norm();
        if (nrm < 1e-300)
            throw NumericallyDegenerate("tmvn: constraint degenerates under whitening");
        const double shift = R_orig_.row(i).dot(mean_);
        A_.row(m) = a / nrm;
        lo_[m] = (lo_orig_[i] - shift) / nrm;
        up_[m] = (up_orig_[i] - shift) / nrm;
    }

    z_ = VectorXd::Zero(d);
    if (q == 0) return;

    if (start != nullptr) {
        const VectorXd zs = G_.fullPivLu().solve(*start - mean_);
        const VectorXd ws = A_ * zs;
        if (((ws - lo_).array() > 0).all() && ((up_ - ws).array() > 0).all()) {
            z_ = zs;
            w_ = ws;
            return;  // warm start, no burn-in
        }
    }
    find_interior(rng);
    w_ = A_ * z_;
    for (int s = 0; s < opt_.burnin_sweeps; ++s) sweep(rng);
}

void TmvnSampler::find_interior(RngStream& rng) {
    (void)rng;
    const int q = static_cast<int>(A_.rows());
    const int d = dim();
    const long budget = std::max(50L, static_cast<long>(opt_.phase1_budget_factor) * q * d);
    VectorXd w = A_ * z_;
    for (long it = 0; it <= budget; ++it) {
        int worst = -1;
        double worst_viol = -kInf;
        for (int i = 0; i < q; ++i) {
            const double v = std::max(lo_[i] - w[i], w[i] - up_[i]);
            if (v > worst_viol) {
                worst_viol = v;
                worst = i;
            }
        }
        if (worst_viol < 0.0) return;  // strictly interior
        if (it == budget) break;
        // Relaxed projection past the violated boundary (rows are unit norm).
        double target;
        const double lo = lo_[worst], up = up_[worst];
        if (std::isfinite(lo) && std::isfinite(up)) {
            const double m = std::min(1.0, 0.25 * (up - lo));
            target = (w[worst] < lo) ? lo + m : up - m;
        } else if (std::isfinite(lo)) {
            target = lo + 1.0;
        } else {
            target = up - 1.0;
        }
        z_ += A_.row(worst).transpose() * (target - w[worst]);
        w = A_ * z_;
    }
    std::ostringstream msg;
    msg << "tmvn: no interior point found within the iteration budget (" << budget
        << " iterations)";
    throw InfeasibleRegion(msg.str());
}

void TmvnSampler::sweep(RngStream& rng) {
    const int q = static_cast<int>(A_.rows());
    const int d = dim();
    for (int j = 0; j < d; ++j) {
        double lo = -kInf, up = kInf;
        for (int i = 0; i < q; ++i) {
            const double a = A_(i, j);
            if (std::abs(a) <= 1e-14) continue;
            const double s = w_[i] - a * z_[j];
            if (a > 0) {
                up = std::min(up, (up_[i] - s) / a);
                lo = std::max(lo, (lo_[i] - s) / a);
            } else {
                up = std::min(up, (lo_[i] - s) / a);
                lo = std::max(lo, (up_[i] - s) / a);
            }
        }
        if (!(lo < up)) continue;  // rounding corner: keep current coordinate
        const double znew = sample_truncated_univariate(0.0, 1.0, lo, up, rng);
        w_ += A_.col(j) * (znew - z_[j]);
        z_[j] = znew;
    }
}

bool TmvnSampler::whitened_feasible() const {
    if (A_.rows() == 0) return true;
    return ((w_ - lo_).array() > 0).all() && ((up_ - w_).array() > 0).all();
}

VectorXd TmvnSampler::draw(RngStream& rng) {
    const int d = dim();
    if (A_.rows() == 0) {
        for (int j = 0; j < d; ++j) z_[j] = rng.normal();
        return mean_ + G_ * z_;
    }
    w_ = A_ * z_;  // refresh accumulated updates
    for (int s = 0; s < opt_.sweeps_per_draw; ++s) sweep(rng);

    for (int attempt = 0; attempt < 8; ++attempt) {
        VectorXd x = mean_ + G_ * z_;
        bool ok = true;
        for (int i = 0; i < R_orig_.rows() && ok; ++i) {
            const double v = R_orig_.row(i).dot(x);
            ok = v > lo_orig_[i] && v < up_orig_[i];
        }
        if (ok) return x;
        sweep(rng);
    }
    throw NumericallyDegenerate("tmvn: draw kept touching a constraint boundary");
}

VectorXd sample_tmvn(const TruncatedGaussianProblem& problem, RngStream& rng,
                     TmvnOptions opt) {
    TmvnSampler sampler(problem, rng, opt);
    return sampler.draw(rng);
}

}  // namespace fsvar
