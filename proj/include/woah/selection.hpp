#ifndef WOAH_SELECTION_HPP
#define WOAH_SELECTION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "woah/embedding.hpp"
#include "woah/errors.hpp"
#include "woah/format.hpp"

namespace woah {

// Gini index of a non-negative vector, computed on the ascending sort:
//
//   G(x) = sum_i (2i - n - 1) x_(i) / (n sum_i x_i),  i = 1..n
//
// 0 for uniform vectors, (n-1)/n for one-hot vectors; always in [0, 1).
// Scale-invariant, which is what makes it usable as a generality score for
// embeddings of different support sizes.
inline double gini_index(std::span<const double> x) {
    if (x.empty()) throw DomainError("gini: empty vector");
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() < 0.0)
        throw DomainError("gini: negative component");
    double total = 0.0;
    for (double v : sorted) total += v;
    if (total <= 0.0) throw DomainError("gini: all-zero vector");
    const double n = static_cast<double>(sorted.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        acc += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
    return acc / (n * total);
}

inline double cosine_similarity(std::span<const double> a,
                                std::span<const double> b) {
    if (a.size() != b.size())
        throw Error("cosine: vectors have different lengths (" +
                    std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na <= 0.0 || nb <= 0.0)
        throw DomainError("cosine: zero-norm vector");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline double cosine_dissimilarity(std::span<const double> a,
                                   std::span<const double> b) {
    return 1.0 - cosine_similarity(a, b);
}

struct GiniScore {
    std::string row_label;
    double value = 0.0;
};

inline std::vector<GiniScore> gini_scores(const EmbeddingMatrix& matrix) {
    std::vector<GiniScore> out;
    out.reserve(matrix.rows());
    for (std::size_t r = 0; r < matrix.rows(); ++r)
        out.push_back({matrix.row_labels[r], gini_index(matrix.values[r])});
    return out;
}

// Label whose Gini score is the distribution's lower median; ties sort by
// (value, label) so the anchor is reproducible.
inline std::string median_anchor(std::vector<GiniScore> scores) {
    if (scores.empty()) throw Error("median anchor of empty score list");
    std::sort(scores.begin(), scores.end(),
              [](const GiniScore& a, const GiniScore& b) {
                  if (a.value != b.value) return a.value < b.value;
                  return a.row_label < b.row_label;
              });
    return scores[(scores.size() - 1) / 2].row_label;
}

// Representatives (the e_f) with the member embeddings selected for each
// (the e_s,f). `anchor` is the Gini-median row the selection grew from.
struct SelectionResult {
    std::string anchor;
    std::vector<std::string> representatives;
    // parallel to representatives: (member label, cosine similarity),
    // similarity non-increasing
    std::vector<std::vector<std::pair<std::string, double>>> members;

    const std::vector<std::pair<std::string, double>>& members_of(
        const std::string& representative) const {
        for (std::size_t i = 0; i < representatives.size(); ++i)
            if (representatives[i] == representative) return members[i];
        throw Error("no such representative: \"" + representative + "\"");
    }
};

// Greedy max-min (farthest point) selection of g mutually dissimilar rows,
// seeded at the anchor. Each step adds the row with the largest minimum
// cosine dissimilarity to the rows already chosen; ties break to the
// lexicographically smallest label.
inline std::vector<std::string> filter_representatives(
    const EmbeddingMatrix& matrix, const std::string& anchor, int g) {
    if (g < 1) throw ConfigError("g must be >= 1");
    auto anchor_row = matrix.find_row(anchor);
    if (!anchor_row) throw Error("anchor \"" + anchor + "\" is not a row");

    std::vector<bool> selected(matrix.rows(), false);
    std::vector<std::string> result;
    std::vector<double> min_dissim(matrix.rows(),
                                   std::numeric_limits<double>::infinity());

    auto add = [&](std::size_t idx) {
        selected[idx] = true;
        result.push_back(matrix.row_labels[idx]);
        for (std::size_t r = 0; r < matrix.rows(); ++r) {
            if (selected[r]) continue;
            double d = cosine_dissimilarity(matrix.values[r],
                                            matrix.values[idx]);
            min_dissim[r] = std::min(min_dissim[r], d);
        }
    };

    add(*anchor_row);
    const std::size_t target =
        std::min<std::size_t>(static_cast<std::size_t>(g), matrix.rows());
    while (result.size() < target) {
        std::size_t best = matrix.rows();
        for (std::size_t r = 0; r < matrix.rows(); ++r) {
            if (selected[r]) continue;
            if (best == matrix.rows() || min_dissim[r] > min_dissim[best] ||
                (min_dissim[r] == min_dissim[best] &&
                 matrix.row_labels[r] < matrix.row_labels[best]))
                best = r;
        }
        add(best);
    }
    return result;
}

// For each representative, the c most cosine-similar non-representative
// rows (ties by label). Member sets may overlap across representatives;
// representatives themselves are never members.
inline SelectionResult select_members(
    const EmbeddingMatrix& matrix,
    const std::vector<std::string>& representatives, int c) {
    if (c < 0) throw ConfigError("c must be >= 0");
    std::vector<bool> is_representative(matrix.rows(), false);
    for (const std::string& r : representatives) {
        auto idx = matrix.find_row(r);
        if (!idx) throw Error("representative \"" + r + "\" is not a row");
        is_representative[*idx] = true;
    }

    SelectionResult result;
    result.representatives = representatives;
    result.anchor = representatives.empty() ? "" : representatives.front();
    for (const std::string& rep : representatives) {
        const auto& rep_row = matrix.row(rep);
        std::vector<std::pair<std::string, double>> ranked;
        for (std::size_t r = 0; r < matrix.rows(); ++r) {
            if (is_representative[r]) continue;
            ranked.push_back({matrix.row_labels[r],
                              cosine_similarity(rep_row, matrix.values[r])});
        }
        std::sort(ranked.begin(), ranked.end(),
                  [](const auto& a, const auto& b) {
                      if (a.second != b.second) return a.second > b.second;
                      return a.first < b.first;
                  });
        if (ranked.size() > static_cast<std::size_t>(c))
            ranked.resize(static_cast<std::size_t>(c));
        result.members.push_back(std::move(ranked));
    }
    return result;
}

inline void write_gini_tsv(std::ostream& out, const std::string& list_name,
                           const std::vector<GiniScore>& scores) {
    for (const GiniScore& s : scores)
        out << list_name << '\t' << s.row_label << '\t'
            << format_real(s.value) << '\n';
}

}  // namespace woah

#endif  // WOAH_SELECTION_HPP
