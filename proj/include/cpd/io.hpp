#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cpd/stats.hpp"

namespace cpd {

struct CsvError : std::runtime_error {
    explicit CsvError(const std::string& what) : std::runtime_error(what) {}
};

// Comma-separated, optional header, rows = time steps, columns = coordinates.
// Throws CsvError naming the offending row on malformed input.
TimeSeries read_series_csv(const std::string& path);

// Row-major p x n matrix written as n rows of p columns.
void write_matrix_csv(const std::string& path, int p, int n,
                      const std::vector<double>& data);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace cpd
