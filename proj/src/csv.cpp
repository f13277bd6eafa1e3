#include "dirout/csv.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dirout/errors.hpp"

namespace dirout {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

bool parse_double(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    char* end = nullptr;
    out = std::strtod(cell.c_str(), &end);
    return end == cell.c_str() + cell.size();
}

} // namespace

NumericTable parse_numeric_csv(std::istream& in, const std::string& name) {
    NumericTable table;
    std::string line;
    std::size_t line_no = 0;
    bool saw_first = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;

        const std::vector<std::string> cells = split_cells(line);
        std::vector<double> parsed(cells.size());
        std::size_t bad_col = cells.size();
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!parse_double(cells[c], parsed[c])) {
                bad_col = c;
                break;
            }
        }

        if (!saw_first) {
            saw_first = true;
            if (bad_col < cells.size()) {
                table.header = cells; // non-numeric first row = column names
                continue;
            }
            table.cols = cells.size();
        } else if (bad_col < cells.size()) {
            throw InputError(name + ": non-numeric cell \"" + cells[bad_col] + "\" at line " +
                             std::to_string(line_no) + ", column " + std::to_string(bad_col + 1));
        }

        if (table.cols == 0) table.cols = cells.size();
        if (cells.size() != table.cols) {
            throw InputError(name + ": ragged row at line " + std::to_string(line_no) + " (" +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(table.cols) + ")");
        }
        table.data.insert(table.data.end(), parsed.begin(), parsed.end());
        ++table.rows;
    }
    if (table.rows == 0) {
        throw InputError(name + ": no data rows");
    }
    if (!table.header.empty() && table.header.size() != table.cols) {
        throw InputError(name + ": header has " + std::to_string(table.header.size()) +
                         " cells but data rows have " + std::to_string(table.cols));
    }
    return table;
}

NumericTable read_numeric_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open \"" + path + "\" for reading");
    return parse_numeric_csv(in, path);
}

PointCloud table_to_cloud(const NumericTable& table) {
    return PointCloud(table.rows, table.cols, table.data);
}

UnivariateSample table_to_sample(const NumericTable& table) {
    if (table.cols != 1) {
        throw InputError("expected a single-column table, got " + std::to_string(table.cols) +
                         " columns");
    }
    return UnivariateSample(table.data);
}

FunctionalDataset curves_from_tables(const NumericTable& base,
                                     std::span<const NumericTable> extra_channels,
                                     const NumericTable* weights) {
    const std::size_t n = base.rows;
    const std::size_t gridpoints = base.cols;
    const std::size_t channels = 1 + extra_channels.size();
    for (std::size_t ch = 0; ch < extra_channels.size(); ++ch) {
        if (extra_channels[ch].rows != n || extra_channels[ch].cols != gridpoints) {
            throw InputError("channel " + std::to_string(ch + 2) + " shape " +
                             std::to_string(extra_channels[ch].rows) + "x" +
                             std::to_string(extra_channels[ch].cols) +
                             " does not match the base table " + std::to_string(n) + "x" +
                             std::to_string(gridpoints));
        }
    }

    std::vector<double> values(n * gridpoints * channels);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t g = 0; g < gridpoints; ++g) {
            values[(i * gridpoints + g) * channels] = base.at(i, g);
            for (std::size_t ch = 0; ch < extra_channels.size(); ++ch) {
                values[(i * gridpoints + g) * channels + 1 + ch] = extra_channels[ch].at(i, g);
            }
        }
    }

    std::vector<double> w;
    if (weights != nullptr) {
        if (!((weights->rows == 1 && weights->cols == gridpoints) ||
              (weights->cols == 1 && weights->rows == gridpoints))) {
            throw InputError("weights table must be 1x" + std::to_string(gridpoints) + " or " +
                             std::to_string(gridpoints) + "x1, got " +
                             std::to_string(weights->rows) + "x" + std::to_string(weights->cols));
        }
        w = normalize_weights(weights->data);
    }

    Grid1D grid;
    grid.points.resize(gridpoints);
    for (std::size_t g = 0; g < gridpoints; ++g) grid.points[g] = static_cast<double>(g);
    return FunctionalDataset::curves(std::move(grid), n, channels, std::move(values),
                                     std::move(w));
}

std::string format_value(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::comment(const std::string& line) { out_ << "# " << line << "\n"; }

void CsvWriter::text_row(std::span<const std::string> cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i != 0) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

void CsvWriter::value_row(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i != 0) out_ << ',';
        out_ << format_value(values[i]);
    }
    out_ << '\n';
}

} // namespace dirout
