#pragma once

#include <optional>
#include <string>
#include <vector>

namespace specshrink {

// Rectangular grid of optional scores with row / column labels, used for the
// method-comparison reports. Missing cells render as "n/a".
struct ScoreTable {
    std::vector<std::string> row_names;
    std::vector<std::string> col_names;
    std::vector<std::vector<std::optional<double>>> cells;

    void add_row(const std::string& name,
                 std::vector<std::optional<double>> values);

    // Header "method,<col>,..." then one line per row; numbers use shortest
    // round-trip-ish formatting (%.9g).
    std::string to_csv() const;

    // Pipe table with a left-aligned label column and scores to four decimal
    // places, padded so the columns line up in a terminal.
    std::string to_markdown() const;
};

}  // namespace specshrink
