#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace indelphy {

// Symmetric pairwise distance matrix over named taxa. +infinity marks pairs
// whose estimate is undefined (sentinel), and survives serialization as the
// token "inf".
struct DistanceMatrix {
    std::vector<std::string> names;
    std::vector<double> values;  // row-major n x n

    explicit DistanceMatrix(std::vector<std::string> taxa = {});

    std::size_t n() const { return names.size(); }
    double& at(std::size_t i, std::size_t j) { return values[i * n() + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * n() + j]; }
    void set(std::size_t i, std::size_t j, double v);

    bool finite() const;
    int index_of(const std::string& name) const;  // -1 when absent

    // Header row of taxon names, then one row per taxon: name plus the
    // tab-separated strictly-lower triangle.
    void write(std::ostream& os) const;
    static DistanceMatrix read(std::istream& is);
};

}  // namespace indelphy
