#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace rmt {

/// T×N matrix of returns (rows are days, columns are assets) with labels.
struct ReturnPanel {
    Eigen::MatrixXd values;
    std::vector<std::string> asset_ids;
    std::vector<std::string> time_ids;

    ReturnPanel() = default;
    /// Missing labels are generated ("A1".., "1"..). Validates the result.
    explicit ReturnPanel(Eigen::MatrixXd v, std::vector<std::string> assets = {},
                         std::vector<std::string> times = {});

    Eigen::Index T() const { return values.rows(); }
    Eigen::Index N() const { return values.cols(); }

    /// Throws std::invalid_argument on label mismatches or non-finite entries.
    void validate() const;

    /// Rows [begin, begin + count).
    ReturnPanel slice(Eigen::Index begin, Eigen::Index count) const;
};

}  // namespace rmt
