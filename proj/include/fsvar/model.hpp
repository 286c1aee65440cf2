#pragma once

#include "fsvar/types.hpp"

namespace fsvar {

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string joined() const;
};

/// Structural checks shared by the CLI and the sampler: identification
/// condition, index ranges, bound ordering, prior shape/positivity.
ValidationReport validate(const ModelDims& dims, const Dataset& data,
                          const RestrictionSet& restr, const PriorConfig& prior);

/// Expand a {-1, 0, +1} sign table (n x r) into unit-row impact constraints
/// with single-sided bounds. Zeros contribute nothing.
RestrictionSet expand_signs(const MatrixXi& sign_table);

/// Recover the sign table from unit-row impact constraints (inverse of
/// expand_signs up to row ordering). Non-sign rows are ignored.
MatrixXi impact_sign_table(const RestrictionSet& restr, int n, int r);

/// Regression design for a VAR(p): row t of the result is
/// (1, y'_{t-1}, ..., y'_{t-p}) for dataset rows t = p .. T-1.
MatrixXd lag_design(const MatrixXd& values, int p);

/// Rows p .. T-1 of the dataset, aligned with lag_design.
MatrixXd effective_rows(const MatrixXd& values, int p);

}  // namespace fsvar
