#pragma once

// CSV ingestion and emission. Dialect: comma separators, '.' decimal point,
// optional single header row, '#'-prefixed comment lines ignored on input and
// used for config echo on output. Values are written with enough digits to
// round-trip doubles exactly.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dirout/functional.hpp"
#include "dirout/multivariate.hpp"

namespace dirout {

// Rectangular numeric table. `header` is empty when the file starts directly
// with data.
struct NumericTable {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data; // row-major
    std::vector<std::string> header;

    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Parses a numeric CSV stream; `name` labels the source in diagnostics.
// Throws InputError naming the offending row and column for ragged rows,
// non-numeric cells, and empty input.
NumericTable parse_numeric_csv(std::istream& in, const std::string& name);
NumericTable read_numeric_csv(const std::string& path);

// Shape adapters for the compute modules.
PointCloud table_to_cloud(const NumericTable& table);
UnivariateSample table_to_sample(const NumericTable& table);

// Rows = functions, columns = gridpoints (unit-spaced 1-d grid). Optional
// extra per-channel tables must match the base shape; an optional weights
// table (one row or one column of `cols` entries) is normalized to sum 1.
FunctionalDataset curves_from_tables(const NumericTable& base,
                                     std::span<const NumericTable> extra_channels = {},
                                     const NumericTable* weights = nullptr);

// One double per line formatting: enough digits for exact round-trips; NaN
// becomes an empty cell.
std::string format_value(double v);

// Output helper binding the dialect in one place.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(const std::string& line);
    void text_row(std::span<const std::string> cells);
    void value_row(std::span<const double> values);

private:
    std::ostream& out_;
};

} // namespace dirout
