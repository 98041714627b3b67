#pragma once

#include "rmt/correlation.hpp"
#include "rmt/panel.hpp"
#include "rmt/spectral_density.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace rmt {

/// Ordered key/value pairs written as `key = value`.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Header `date,ID1,…,IDN`, one row per day, values at 17 significant digits.
void write_panel_csv(std::ostream& os, const ReturnPanel& panel);
ReturnPanel read_panel_csv(std::istream& is, const std::string& source = "panel");
void write_panel_file(const std::string& path, const ReturnPanel& panel, const Metadata& meta = {});
/// Reads `path`; the `.meta` sidecar, when present, is ignored.
ReturnPanel read_panel_file(const std::string& path);

/// `# key = value` lines, `# atom <location> <mass>` lines, then `lambda,density`
/// rows at 12 significant digits.
void write_density_csv(std::ostream& os, const SpectralDensity& d, const Metadata& meta = {});
SpectralDensity read_density_csv(std::istream& is, Metadata* meta = nullptr);

/// Header row of asset ids, then N rows of N values.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m, const std::vector<std::string>& ids,
                      const Metadata& meta = {});
CorrelationMatrix read_matrix_csv(std::istream& is, const std::string& source = "matrix");

void write_metadata(std::ostream& os, const Metadata& meta, const std::string& prefix = "");
Metadata read_key_value_lines(std::istream& is, const std::string& source);

std::string format_double(double x, int digits);

}  // namespace rmt
