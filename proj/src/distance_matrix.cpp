#include "indelphy/distance_matrix.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace indelphy {

namespace {

std::string format_value(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_value(const std::string& tok, std::size_t line_no) {
    if (tok == "inf") return std::numeric_limits<double>::infinity();
    if (tok == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("distance matrix: bad numeric token '" + tok + "' on line " +
                                 std::to_string(line_no));
    }
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == '\t') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

DistanceMatrix::DistanceMatrix(std::vector<std::string> taxa) : names(std::move(taxa)) {
    values.assign(n() * n(), 0.0);
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double v) {
    at(i, j) = v;
    at(j, i) = v;
}

bool DistanceMatrix::finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

int DistanceMatrix::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

void DistanceMatrix::write(std::ostream& os) const {
    for (std::size_t i = 0; i < n(); ++i) os << (i ? "\t" : "") << names[i];
    os << "\n";
    for (std::size_t i = 0; i < n(); ++i) {
        os << names[i];
        for (std::size_t j = 0; j < i; ++j) os << "\t" << format_value(at(i, j));
        os << "\n";
    }
}

DistanceMatrix DistanceMatrix::read(std::istream& is) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(is, line)) throw std::runtime_error("distance matrix: empty input");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = split_tabs(line);
    if (header.empty() || header[0].empty())
        throw std::runtime_error("distance matrix: missing taxon header");
    DistanceMatrix m(header);
    for (std::size_t i = 0; i < m.n(); ++i) {
        if (!std::getline(is, line))
            throw std::runtime_error("distance matrix: expected row for taxon " + m.names[i]);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> toks = split_tabs(line);
        if (toks.size() != i + 1)
            throw std::runtime_error("distance matrix: row on line " + std::to_string(line_no) +
                                     " has " + std::to_string(toks.size() - 1) +
                                     " entries, expected " + std::to_string(i));
        if (toks[0] != m.names[i])
            throw std::runtime_error("distance matrix: row name '" + toks[0] +
                                     "' does not match header name '" + m.names[i] + "'");
        for (std::size_t j = 1; j < toks.size(); ++j)
            m.set(i, j - 1, parse_value(toks[j], line_no));
    }
    return m;
}

}  // namespace indelphy
