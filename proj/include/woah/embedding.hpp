#ifndef WOAH_EMBEDDING_HPP
#define WOAH_EMBEDDING_HPP

#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "woah/errors.hpp"
#include "woah/extraction.hpp"
#include "woah/format.hpp"

namespace woah {

// Dense row-labeled, column-labeled matrix of non-negative reals. After
// dict2vec every row has unit L2 norm.
struct EmbeddingMatrix {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<double>> values;

    std::size_t rows() const { return row_labels.size(); }
    std::size_t cols() const { return col_labels.size(); }

    std::optional<std::size_t> find_row(const std::string& label) const {
        for (std::size_t i = 0; i < row_labels.size(); ++i)
            if (row_labels[i] == label) return i;
        return std::nullopt;
    }

    const std::vector<double>& row(const std::string& label) const {
        auto i = find_row(label);
        if (!i) throw Error("matrix has no row \"" + label + "\"");
        return values[*i];
    }
};

struct Dict2VecResult {
    EmbeddingMatrix matrix;
    // labels of all-zero rows removed before normalization, in row order
    std::vector<std::string> dropped_rows;
};

// Builds a binary association matrix (entry 1 iff the column term occurs in
// the row's list) and L2-normalizes each row, so cosine similarity between
// rows reduces to a dot product. Rows with no associations would be
// all-zero and are dropped instead, with the drop reported.
inline Dict2VecResult dict2vec(const AssocTable& rows,
                               const std::vector<std::string>& row_order,
                               const std::vector<std::string>& col_order) {
    std::unordered_map<std::string, std::size_t> col_index;
    for (std::size_t c = 0; c < col_order.size(); ++c)
        col_index.emplace(col_order[c], c);

    Dict2VecResult result;
    result.matrix.col_labels = col_order;
    for (const std::string& label : row_order) {
        std::vector<double> row(col_order.size(), 0.0);
        std::size_t support = 0;
        for (const std::string& term : rows.at(label)) {
            auto it = col_index.find(term);
            if (it == col_index.end())
                throw Error("associated term \"" + term +
                            "\" missing from column space");
            if (row[it->second] == 0.0) ++support;
            row[it->second] = 1.0;
        }
        if (support == 0) {
            result.dropped_rows.push_back(label);
            continue;
        }
        double norm = std::sqrt(static_cast<double>(support));
        for (double& v : row) v /= norm;
        result.matrix.row_labels.push_back(label);
        result.matrix.values.push_back(std::move(row));
    }

    if (result.matrix.row_labels.empty() || result.matrix.col_labels.empty())
        throw Error("degenerate embedding space");
    return result;
}

// TSV dump: header row of column labels, then one labeled row per
// embedding, entries with 12 significant digits.
inline void write_matrix_tsv(const EmbeddingMatrix& matrix,
                             std::ostream& out) {
    for (const std::string& col : matrix.col_labels) out << '\t' << col;
    out << '\n';
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        out << matrix.row_labels[r];
        for (double v : matrix.values[r]) out << '\t' << format_real(v);
        out << '\n';
    }
}

}  // namespace woah

#endif  // WOAH_EMBEDDING_HPP
