#include "rmt/panel.hpp"

#include <cmath>
#include <stdexcept>

namespace rmt {

ReturnPanel::ReturnPanel(Eigen::MatrixXd v, std::vector<std::string> assets,
                         std::vector<std::string> times)
    : values(std::move(v)), asset_ids(std::move(assets)), time_ids(std::move(times)) {
    if (asset_ids.empty())
        for (Eigen::Index j = 0; j < values.cols(); ++j) asset_ids.push_back("A" + std::to_string(j + 1));
    if (time_ids.empty())
        for (Eigen::Index t = 0; t < values.rows(); ++t) time_ids.push_back(std::to_string(t + 1));
    validate();
}

void ReturnPanel::validate() const {
    if (static_cast<Eigen::Index>(asset_ids.size()) != values.cols())
        throw std::invalid_argument("panel: " + std::to_string(asset_ids.size()) + " asset ids for " +
                                    std::to_string(values.cols()) + " columns");
    if (static_cast<Eigen::Index>(time_ids.size()) != values.rows())
        throw std::invalid_argument("panel: " + std::to_string(time_ids.size()) + " time ids for " +
                                    std::to_string(values.rows()) + " rows");
    for (Eigen::Index j = 0; j < values.cols(); ++j)
        for (Eigen::Index t = 0; t < values.rows(); ++t)
            if (!std::isfinite(values(t, j)))
                throw std::invalid_argument("panel: non-finite value for asset " + asset_ids[j] +
                                            " at " + time_ids[t]);
}

ReturnPanel ReturnPanel::slice(Eigen::Index begin, Eigen::Index count) const {
    if (begin < 0 || count < 0 || begin + count > T())
        throw std::invalid_argument("panel: slice out of range");
    ReturnPanel out;
    out.values = values.middleRows(begin, count);
    out.asset_ids = asset_ids;
    out.time_ids.assign(time_ids.begin() + begin, time_ids.begin() + begin + count);
    return out;
}

}  // namespace rmt
