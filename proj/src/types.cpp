#include "fsvar/types.hpp"

#include <algorithm>
#include <limits>

namespace fsvar {

int Dataset::variable_index(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

int Dataset::time_index_of(const std::string& label) const {
    auto it = std::find(time_index.begin(), time_index.end(), label);
    return it == time_index.end() ? -1 : static_cast<int>(it - time_index.begin());
}

bool LinearConstraint::satisfied_strictly(const VectorXd& x) const {
    for (int j = 0; j < rows(); ++j) {
        const double v = R.row(j).dot(x);
        if (!(v > lower[j] && v < upper[j])) return false;
    }
    return true;
}

void LinearConstraint::append(const LinearConstraint& other) {
    if (rows() == 0) {
        *this = other;
        return;
    }
    if (other.dim() != dim())
        throw std::invalid_argument("LinearConstraint::append: dimension mismatch");
    MatrixXd Rn(rows() + other.rows(), dim());
    Rn << R, other.R;
    VectorXd lo(rows() + other.rows()), up(rows() + other.rows());
    lo << lower, other.lower;
    up << upper, other.upper;
    R = std::move(Rn);
    lower = std::move(lo);
    upper = std::move(up);
}

LinearConstraint LinearConstraint::sign_row(int dim, int index, int sign) {
    const double inf = std::numeric_limits<double>::infinity();
    LinearConstraint c;
    c.R = MatrixXd::Zero(1, dim);
    c.R(0, index) = 1.0;
    c.lower = VectorXd::Constant(1, sign > 0 ? 0.0 : -inf);
    c.upper = VectorXd::Constant(1, sign > 0 ? inf : 0.0);
    return c;
}

std::set<int> RestrictionSet::restricted_periods() const {
    std::set<int> out;
    for (const auto& [t, c] : shock) out.insert(t);
    for (const auto& [key, c] : product) out.insert(key.second);
    return out;
}

void RestrictionSet::add_impact_sign(int eq, int shock_idx, int sign, int r) {
    impact[eq].append(LinearConstraint::sign_row(r, shock_idx, sign));
}

void RestrictionSet::add_shock_sign(int t, int shock_idx, int sign, int r) {
    shock[t].append(LinearConstraint::sign_row(r, shock_idx, sign));
}

bool RestrictionSet::satisfied_strictly(const MatrixXd& L, const MatrixXd& F,
                                        int f_row_offset) const {
    for (const auto& [i, c] : impact) {
        if (!c.satisfied_strictly(L.row(i).transpose())) return false;
    }
    for (const auto& [t, c] : shock) {
        const int row = t - f_row_offset;
        if (row < 0 || row >= F.rows()) return false;
        if (!c.satisfied_strictly(F.row(row).transpose())) return false;
    }
    for (const auto& [key, c] : product) {
        const auto [i, t] = key;
        const int row = t - f_row_offset;
        if (row < 0 || row >= F.rows()) return false;
        const VectorXd prod = L.row(i).cwiseProduct(F.row(row)).transpose();
        if (!c.satisfied_strictly(prod)) return false;
    }
    return true;
}

PriorConfig PriorConfig::defaults(int r) {
    PriorConfig p;
    p.loading_mean = {VectorXd::Zero(r)};
    p.loading_cov = {10.0 * MatrixXd::Identity(r, r)};
    return p;
}

const VectorXd& PriorConfig::loading_mean_for(int eq) const {
    return loading_mean.size() == 1 ? loading_mean.front()
                                    : loading_mean.at(static_cast<std::size_t>(eq));
}

const MatrixXd& PriorConfig::loading_cov_for(int eq) const {
    return loading_cov.size() == 1 ? loading_cov.front()
                                   : loading_cov.at(static_cast<std::size_t>(eq));
}

HorseshoeState HorseshoeState::ones(int n, int k) {
    HorseshoeState hs;
    hs.lambda = VectorXd::Ones(n);
    hs.psi = MatrixXd::Ones(n, k - 1);
    hs.z_lambda = VectorXd::Ones(n);
    hs.z_psi = MatrixXd::Ones(n, k - 1);
    return hs;
}

}  // namespace fsvar
