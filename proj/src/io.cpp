#include "rmt/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rmt {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_double(const std::string& s, const std::string& where) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    if (!s.empty() && *b == '+') ++b;
    const auto res = std::from_chars(b, e, v);
    if (s.empty() || res.ec != std::errc() || res.ptr != e || !std::isfinite(v))
        throw std::invalid_argument(where + ": invalid number '" + s + "'");
    return v;
}

}  // namespace

std::string format_double(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

void write_metadata(std::ostream& os, const Metadata& meta, const std::string& prefix) {
    for (const auto& [k, v] : meta) os << prefix << k << " = " << v << '\n';
}

Metadata read_key_value_lines(std::istream& is, const std::string& source) {
    Metadata out;
    std::string line;
    int n = 0;
    while (std::getline(is, line)) {
        ++n;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(source + " line " + std::to_string(n) + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw std::invalid_argument(source + " line " + std::to_string(n) + ": empty key");
        out.emplace_back(key, trim(t.substr(eq + 1)));
    }
    return out;
}

void write_panel_csv(std::ostream& os, const ReturnPanel& p) {
    os << "date";
    for (const auto& id : p.asset_ids) os << ',' << id;
    os << '\n';
    for (Eigen::Index t = 0; t < p.T(); ++t) {
        os << p.time_ids[t];
        for (Eigen::Index j = 0; j < p.N(); ++j) os << ',' << format_double(p.values(t, j), 17);
        os << '\n';
    }
}

ReturnPanel read_panel_csv(std::istream& is, const std::string& source) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument(source + ": empty file");
    const auto header = split_csv(line);
    if (header.size() < 2 || header[0] != "date")
        throw std::invalid_argument(source + " line 1: header must be 'date,ID1,...,IDN'");
    std::vector<std::string> ids(header.begin() + 1, header.end());
    for (const auto& id : ids)
        if (id.empty()) throw std::invalid_argument(source + " line 1: empty asset id");
    std::vector<std::string> times;
    std::vector<std::vector<double>> rows;
    int n = 1;
    while (std::getline(is, line)) {
        ++n;
        if (trim(line).empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != header.size())
            throw std::invalid_argument(source + " line " + std::to_string(n) + ": expected " +
                                        std::to_string(header.size()) + " fields, got " +
                                        std::to_string(f.size()));
        times.push_back(f[0]);
        std::vector<double> row;
        for (std::size_t j = 1; j < f.size(); ++j)
            row.push_back(parse_double(f[j], source + " line " + std::to_string(n) + ", field " + ids[j - 1]));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument(source + ": no data rows");
    Eigen::MatrixXd v(rows.size(), ids.size());
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (std::size_t j = 0; j < ids.size(); ++j) v(t, j) = rows[t][j];
    return ReturnPanel(std::move(v), std::move(ids), std::move(times));
}

void write_panel_file(const std::string& path, const ReturnPanel& panel, const Metadata& meta) {
    std::ofstream os(path);
    if (!os) throw std::invalid_argument("cannot open '" + path + "' for writing");
    write_panel_csv(os, panel);
    if (!meta.empty()) {
        std::ofstream ms(path + ".meta");
        if (!ms) throw std::invalid_argument("cannot open '" + path + ".meta' for writing");
        write_metadata(ms, meta);
    }
}

ReturnPanel read_panel_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open '" + path + "'");
    return read_panel_csv(is, path);
}

void write_density_csv(std::ostream& os, const SpectralDensity& d, const Metadata& meta) {
    write_metadata(os, meta, "# ");
    if (d.truncated_mass > 0.0) os << "# truncated_mass = " << format_double(d.truncated_mass, 12) << '\n';
    for (const auto& a : d.atoms)
        os << "# atom " << format_double(a.location, 12) << ' ' << format_double(a.mass, 12) << '\n';
    os << "lambda,density\n";
    for (std::size_t i = 0; i < d.grid.size(); ++i)
        os << format_double(d.grid[i], 12) << ',' << format_double(d.density[i], 12) << '\n';
}

SpectralDensity read_density_csv(std::istream& is, Metadata* meta) {
    SpectralDensity d;
    std::string line;
    int n = 0;
    bool header = false;
    while (std::getline(is, line)) {
        ++n;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::string where = "density line " + std::to_string(n);
        if (t[0] == '#') {
            const std::string body = trim(t.substr(1));
            if (body.rfind("atom ", 0) == 0) {
                std::istringstream ss(body.substr(5));
                std::string loc, mass;
                ss >> loc >> mass;
                d.atoms.push_back({parse_double(loc, where), parse_double(mass, where)});
            } else if (const auto eq = body.find('='); eq != std::string::npos) {
                const std::string key = trim(body.substr(0, eq)), val = trim(body.substr(eq + 1));
                if (key == "truncated_mass") d.truncated_mass = parse_double(val, where);
                else if (meta) meta->emplace_back(key, val);
            }
            continue;
        }
        if (!header) {
            if (t != "lambda,density") throw std::invalid_argument(where + ": expected 'lambda,density'");
            header = true;
            continue;
        }
        const auto f = split_csv(t);
        if (f.size() != 2) throw std::invalid_argument(where + ": expected 2 fields");
        d.grid.push_back(parse_double(f[0], where));
        d.density.push_back(parse_double(f[1], where));
    }
    return d;
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m, const std::vector<std::string>& ids,
                      const Metadata& meta) {
    write_metadata(os, meta, "# ");
    if (ids.empty())
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << "a" << j;
    else
        for (std::size_t j = 0; j < ids.size(); ++j) os << (j ? "," : "") << ids[j];
    os << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << format_double(m(i, j), 17);
        os << '\n';
    }
}

CorrelationMatrix read_matrix_csv(std::istream& is, const std::string& source) {
    std::string line;
    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
    int n = 0;
    while (std::getline(is, line)) {
        ++n;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto f = split_csv(t);
        if (ids.empty()) {
            ids = f;
            continue;
        }
        if (f.size() != ids.size())
            throw std::invalid_argument(source + " line " + std::to_string(n) + ": expected " +
                                        std::to_string(ids.size()) + " fields");
        std::vector<double> row;
        for (std::size_t j = 0; j < f.size(); ++j)
            row.push_back(parse_double(f[j], source + " line " + std::to_string(n) + ", field " + ids[j]));
        rows.push_back(std::move(row));
    }
    if (rows.size() != ids.size() || ids.empty())
        throw std::invalid_argument(source + ": expected a square matrix with " + std::to_string(ids.size()) +
                                    " rows");
    Eigen::MatrixXd m(ids.size(), ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = 0; j < ids.size(); ++j) m(i, j) = rows[i][j];
    return CorrelationMatrix(m, ids);
}

}  // namespace rmt
