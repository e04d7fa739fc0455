#include "specshrink/score_table.hpp"

#include "specshrink/types.hpp"

#include <algorithm>
#include <cstdio>
#include <utility>

namespace specshrink {

namespace {

std::string g9(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

std::string fixed4(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    return buf;
}

}  // namespace

void ScoreTable::add_row(const std::string& name,
                         std::vector<std::optional<double>> values) {
    if (values.size() != col_names.size()) {
        throw Error("ScoreTable: row '" + name + "' has " +
                    std::to_string(values.size()) + " cells, expected " +
                    std::to_string(col_names.size()));
    }
    row_names.push_back(name);
    cells.push_back(std::move(values));
}

std::string ScoreTable::to_csv() const {
    std::string out = "method";
    for (const auto& col : col_names) {
        out += ',';
        out += col;
    }
    out += '\n';
    for (std::size_t i = 0; i < row_names.size(); ++i) {
        out += row_names[i];
        for (const auto& cell : cells[i]) {
            out += ',';
            out += cell.has_value() ? g9(*cell) : std::string("n/a");
        }
        out += '\n';
    }
    return out;
}

std::string ScoreTable::to_markdown() const {
    std::vector<std::vector<std::string>> rendered;
    rendered.reserve(row_names.size());
    for (std::size_t i = 0; i < row_names.size(); ++i) {
        std::vector<std::string> row;
        row.reserve(cells[i].size());
        for (const auto& cell : cells[i]) {
            row.push_back(cell.has_value() ? fixed4(*cell)
                                           : std::string("n/a"));
        }
        rendered.push_back(std::move(row));
    }

    std::vector<std::size_t> widths;
    widths.push_back(std::string("method").size());
    for (const auto& name : row_names) {
        widths[0] = std::max(widths[0], name.size());
    }
    for (std::size_t j = 0; j < col_names.size(); ++j) {
        std::size_t w = col_names[j].size();
        for (const auto& row : rendered) {
            w = std::max(w, row[j].size());
        }
        widths.push_back(w);
    }

    auto pad_left = [](const std::string& s, std::size_t w) {
        return s + std::string(w - s.size(), ' ');
    };
    auto pad_right = [](const std::string& s, std::size_t w) {
        return std::string(w - s.size(), ' ') + s;
    };

    std::string out = "| " + pad_left("method", widths[0]);
    for (std::size_t j = 0; j < col_names.size(); ++j) {
        out += " | " + pad_right(col_names[j], widths[j + 1]);
    }
    out += " |\n";

    out += "| " + std::string(widths[0], '-');
    for (std::size_t j = 0; j < col_names.size(); ++j) {
        out += " | " + std::string(widths[j + 1], '-');
    }
    out += " |\n";

    for (std::size_t i = 0; i < row_names.size(); ++i) {
        out += "| " + pad_left(row_names[i], widths[0]);
        for (std::size_t j = 0; j < col_names.size(); ++j) {
            out += " | " + pad_right(rendered[i][j], widths[j + 1]);
        }
        out += " |\n";
    }
    return out;
}

}  // namespace specshrink
