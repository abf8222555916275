#include "cpd/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cpd {

namespace {

bool parse_double(std::string_view field, double& out) {
    // Trim surrounding whitespace; std::from_chars wants a bare number.
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t' ||
                              field.front() == '\r'))
        field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' ||
                              field.back() == '\r'))
        field.remove_suffix(1);
    if (field.empty()) return false;
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

TimeSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    bool header_checked = false;
    int p = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_fields(line);
        std::vector<double> row(fields.size());
        bool ok = true;
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (!parse_double(fields[i], row[i])) {
                ok = false;
                break;
            }
        if (!ok) {
            if (!header_checked) {
                // First non-numeric line is treated as a header.
                header_checked = true;
                continue;
            }
            throw CsvError(path + ": row " + std::to_string(lineno) +
                           " has a non-numeric field");
        }
        header_checked = true;
        if (p == 0)
            p = static_cast<int>(row.size());
        else if (static_cast<int>(row.size()) != p)
            throw CsvError(path + ": row " + std::to_string(lineno) + " has " +
                           std::to_string(row.size()) + " columns, expected " +
                           std::to_string(p));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw CsvError(path + ": no data rows");

    const int n = static_cast<int>(rows.size());
    std::vector<double> data(static_cast<std::size_t>(p) * n);
    for (int t = 0; t < n; ++t)
        for (int i = 0; i < p; ++i)
            data[static_cast<std::size_t>(i) * n + t] = rows[t][i];
    return TimeSeries(p, n, std::move(data));
}

void write_matrix_csv(const std::string& path, int p, int n,
                      const std::vector<double>& data) {
    if (static_cast<std::size_t>(p) * n != data.size())
        throw CsvError("write_matrix_csv: size mismatch");
    std::ofstream out(path);
    if (!out) throw CsvError("cannot open " + path + " for writing");
    out.precision(17);
    for (int t = 0; t < n; ++t) {
        for (int i = 0; i < p; ++i) {
            if (i) out << ',';
            out << data[static_cast<std::size_t>(i) * n + t];
        }
        out << '\n';
    }
    if (!out) throw CsvError("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CsvError("cannot open " + path + " for writing");
    out << contents;
    if (!out) throw CsvError("write failed: " + path);
}

}  // namespace cpd
