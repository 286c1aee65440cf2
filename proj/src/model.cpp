#include "fsvar/model.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <sstream>

namespace fsvar {

std::string ValidationReport::joined() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i];
    }
    return os.str();
}

namespace {

void check_constraint(const LinearConstraint& c, int expected_dim, const std::string& where,
                      std::vector<std::string>& out) {
    if (c.rows() < 1) {
        out.push_back(where + ": empty constraint (q >= 1 required)");
        return;
    }
    if (c.dim() != expected_dim) {
        std::ostringstream os;
        os << where << ": R has " << c.dim() << " columns, expected " << expected_dim;
        out.push_back(os.str());
    }
    if (c.lower.size() != c.rows() || c.upper.size() != c.rows()) {
        out.push_back(where + ": bound lengths do not match the row count");
        return;
    }
    for (int j = 0; j < c.rows(); ++j) {
        if (!(c.lower[j] < c.upper[j])) {
            std::ostringstream os;
            os << where << " row " << j + 1 << ": lower < upper required";
            out.push_back(os.str());
        }
        if (c.R.row(j).norm() < 1e-12) {
            std::ostringstream os;
            os << where << " row " << j + 1 << ": near-zero constraint row";
            out.push_back(os.str());
        }
    }
}

}  // namespace

ValidationReport validate(const ModelDims& dims, const Dataset& data,
                          const RestrictionSet& restr, const PriorConfig& prior) {
    ValidationReport rep;
    auto& out = rep.violations;

    if (dims.n < 1 || dims.p < 1 || dims.r < 1 || dims.T < 1)
        out.push_back("dimensions: n, p, r, T must all be >= 1");
    if (2 * dims.r > dims.n - 1) {
        std::ostringstream os;
        os << "identification: r <= (n-1)/2 fails since " << dims.r << " > "
           << (dims.n - 1) / 2.0;
        out.push_back(os.str());
    }
    if (dims.T <= dims.p)
        out.push_back("sample: T must exceed the lag order p");

    if (data.rows() > 0 || data.cols() > 0) {
        if (data.rows() != dims.T || data.cols() != dims.n) {
            std::ostringstream os;
            os << "data: shape " << data.rows() << "x" << data.cols() << " does not match T="
               << dims.T << ", n=" << dims.n;
            out.push_back(os.str());
        }
        if (!data.values.allFinite())
            out.push_back("data: non-finite entries after transformation");
    }

    for (const auto& [i, c] : restr.impact) {
        if (i < 0 || i >= dims.n) {
            std::ostringstream os;
            os << "impact restriction: equation index " << i + 1 << " outside 1.." << dims.n;
            out.push_back(os.str());
        }
        check_constraint(c, dims.r, "impact constraint (equation " + std::to_string(i + 1) + ")",
                         out);
    }
    auto check_period = [&](int t, const std::string& what) {
        if (t < 0 || t >= dims.T) {
            std::ostringstream os;
            os << what << ": period index " << t + 1 << " outside 1.." << dims.T;
            out.push_back(os.str());
        } else if (t < dims.p) {
            std::ostringstream os;
            os << what << ": period " << t + 1 << " falls inside the initial " << dims.p
               << "-lag window and carries no estimable shock";
            out.push_back(os.str());
        }
    };
    for (const auto& [t, c] : restr.shock) {
        check_period(t, "shock restriction");
        check_constraint(c, dims.r, "shock constraint (period " + std::to_string(t + 1) + ")",
                         out);
    }
    for (const auto& [key, c] : restr.product) {
        const auto [i, t] = key;
        if (i < 0 || i >= dims.n) {
            std::ostringstream os;
            os << "product restriction: equation index " << i + 1 << " outside 1.." << dims.n;
            out.push_back(os.str());
        }
        check_period(t, "product restriction");
        check_constraint(c, dims.r,
                         "product constraint (equation " + std::to_string(i + 1) + ", period " +
                             std::to_string(t + 1) + ")",
                         out);
    }

    const std::size_t n_mean = prior.loading_mean.size();
    const std::size_t n_cov = prior.loading_cov.size();
    if (n_mean != 1 && n_mean != static_cast<std::size_t>(dims.n))
        out.push_back("prior: loading_mean must have 1 or n entries");
    if (n_cov != 1 && n_cov != static_cast<std::size_t>(dims.n))
        out.push_back("prior: loading_cov must have 1 or n entries");
    for (std::size_t e = 0; e < n_mean; ++e) {
        if (prior.loading_mean[e].size() != dims.r)
            out.push_back("prior: loading_mean entry " + std::to_string(e + 1) +
                          " is not an r-vector");
    }
    for (std::size_t e = 0; e < n_cov; ++e) {
        const MatrixXd& V = prior.loading_cov[e];
        if (V.rows() != dims.r || V.cols() != dims.r) {
            out.push_back("prior: loading_cov entry " + std::to_string(e + 1) + " is not r x r");
            continue;
        }
        if ((V - V.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + V.cwiseAbs().maxCoeff()))
            out.push_back("prior: loading_cov entry " + std::to_string(e + 1) +
                          " is not symmetric");
        Eigen::LLT<MatrixXd> llt(V);
        if (llt.info() != Eigen::Success)
            out.push_back("prior: loading_cov entry " + std::to_string(e + 1) +
                          " is not positive definite");
    }
    if (prior.noise_shape < 0 || prior.noise_rate < 0)
        out.push_back("prior: noise_shape and noise_rate must be nonnegative");
    if (!(prior.intercept_var > 0))
        out.push_back("prior: intercept_var must be positive");

    return rep;
}

RestrictionSet expand_signs(const MatrixXi& sign_table) {
    const int n = static_cast<int>(sign_table.rows());
    const int r = static_cast<int>(sign_table.cols());
    RestrictionSet restr;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < r; ++j) {
            const int s = sign_table(i, j);
            if (s == 0) continue;
            if (s != 1 && s != -1)
                throw ValidationError("expand_signs: entries must be in {-1, 0, +1}");
            restr.add_impact_sign(i, j, s, r);
        }
    }
    return restr;
}

MatrixXi impact_sign_table(const RestrictionSet& restr, int n, int r) {
    MatrixXi table = MatrixXi::Zero(n, r);
    for (const auto& [i, c] : restr.impact) {
        if (i < 0 || i >= n) continue;
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
            if (!unit || nz < 0 || nz >= r) continue;
            const double lo = c.lower[row], up = c.upper[row];
            const double coef = c.R(row, nz);
            if (lo == 0.0 && up == std::numeric_limits<double>::infinity())
                table(i, nz) = coef > 0 ? 1 : -1;
            else if (up == 0.0 && lo == -std::numeric_limits<double>::infinity())
                table(i, nz) = coef > 0 ? -1 : 1;
        }
    }
    return table;
}

MatrixXd lag_design(const MatrixXd& values, int p) {
    const int T = static_cast<int>(values.rows());
    const int n = static_cast<int>(values.cols());
    if (T <= p) throw ValidationError("lag_design: T must exceed p");
    const int k = 1 + n * p;
    MatrixXd X(T - p, k);
    X.col(0).setOnes();
    for (int t = p; t < T; ++t) {
        for (int l = 1; l <= p; ++l)
            X.block(t - p, 1 + (l - 1) * n, 1, n) = values.row(t - l);
    }
    return X;
}

MatrixXd effective_rows(const MatrixXd& values, int p) {
    return values.bottomRows(values.rows() - p);
}

}  // namespace fsvar
