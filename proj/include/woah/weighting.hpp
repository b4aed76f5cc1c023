#ifndef WOAH_WEIGHTING_HPP
#define WOAH_WEIGHTING_HPP

#include <cmath>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "woah/corpus.hpp"
#include "woah/errors.hpp"
#include "woah/extraction.hpp"
#include "woah/format.hpp"

namespace woah {

enum class ListKind { Verbs, Objects, Complements };

inline const char* to_string(ListKind kind) {
    switch (kind) {
        case ListKind::Verbs: return "verbs";
        case ListKind::Objects: return "objects";
        case ListKind::Complements: return "complements";
    }
    return "?";
}

// Upper tf-idf cut per list plus the shared lower bound and logarithm base.
// A term survives its list's filter iff lower_bound < aggregate <= t_x.
struct Thresholds {
    double t_v = std::numeric_limits<double>::infinity();
    double t_o = std::numeric_limits<double>::infinity();
    double t_c = std::numeric_limits<double>::infinity();
    double lower_bound = 0.0;
    double log_base = 10.0;

    void validate() const {
        if (!(log_base > 1.0)) throw ConfigError("log_base must be > 1");
        if (lower_bound < 0.0)
            throw ConfigError("lower_bound must be >= 0");
        if (t_v < lower_bound || t_o < lower_bound || t_c < lower_bound)
            throw ConfigError(
                "thresholds must not be below the lower bound");
    }
};

struct TermScore {
    std::string term;
    // (document id, tf-idf), only documents where tf > 0, in document order.
    std::vector<std::pair<std::string, double>> per_doc_tfidf;
    // max over per_doc_tfidf values
    double aggregate = 0.0;
};

inline std::size_t term_frequency(const std::string& term,
                                  std::span<const std::string> doc) {
    std::size_t n = 0;
    for (const auto& t : doc)
        if (t == term) ++n;
    return n;
}

inline double inverse_document_frequency(
    const std::string& term, const std::vector<std::vector<std::string>>& docs,
    double log_base = 10.0) {
    if (docs.empty()) throw DomainError("idf: empty document collection");
    std::size_t df = 0;
    for (const auto& doc : docs)
        if (term_frequency(term, doc) > 0) ++df;
    if (df == 0)
        throw DomainError("idf: term \"" + term + "\" occurs in no document");
    return std::log(static_cast<double>(docs.size()) / static_cast<double>(df)) /
           std::log(log_base);
}

// Named document units for one list: dialogues for verbs, one unit per
// verb_objects key for objects, one per object_complements key for
// complements.
inline std::vector<std::pair<std::string, std::vector<std::string>>>
build_documents(ListKind kind, const ExtractionTables& tables,
                const Corpus& corpus) {
    std::vector<std::pair<std::string, std::vector<std::string>>> docs;
    switch (kind) {
        case ListKind::Verbs: {
            std::unordered_map<std::string, std::size_t> slot;
            for (const Dialogue& d : corpus.dialogues) {
                slot.emplace(d.id, docs.size());
                docs.push_back({d.id, {}});
            }
            for (const Occurrence& o : tables.verbs) {
                auto it = slot.find(o.tag);
                if (it == slot.end())
                    throw Error("verb occurrence tagged with unknown dialogue \"" +
                                o.tag + "\"");
                docs[it->second].second.push_back(o.term);
            }
            break;
        }
        case ListKind::Objects:
            for (const auto& [verb, objects] : tables.verb_objects.items())
                docs.push_back({verb, objects});
            break;
        case ListKind::Complements:
            for (const auto& [object, comps] : tables.object_complements.items())
                docs.push_back({object, comps});
            break;
    }
    return docs;
}

// tf-idf per term per document unit, aggregated with max. Scores come back
// in first-occurrence order of the terms.
inline std::vector<TermScore> tfidf_scores(ListKind kind,
                                           const ExtractionTables& tables,
                                           const Corpus& corpus,
                                           double log_base = 10.0) {
    auto docs = build_documents(kind, tables, corpus);
    if (docs.empty())
        throw Error(std::string("no documents for ") + to_string(kind));

    const std::vector<Occurrence>* occurrences = nullptr;
    switch (kind) {
        case ListKind::Verbs: occurrences = &tables.verbs; break;
        case ListKind::Objects: occurrences = &tables.objects; break;
        case ListKind::Complements: occurrences = &tables.complements; break;
    }

    std::vector<std::string> order;
    std::unordered_set<std::string> seen;
    for (const Occurrence& o : *occurrences)
        if (seen.insert(o.term).second) order.push_back(o.term);

    // tf per (term, doc) in one sweep
    std::vector<std::unordered_map<std::string, std::size_t>> tf(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d)
        for (const std::string& t : docs[d].second) ++tf[d][t];

    const double n_docs = static_cast<double>(docs.size());
    const double log_b = std::log(log_base);
    std::vector<TermScore> scores;
    scores.reserve(order.size());
    for (const std::string& term : order) {
        std::size_t df = 0;
        for (std::size_t d = 0; d < docs.size(); ++d)
            if (tf[d].count(term)) ++df;
        double idf = std::log(n_docs / static_cast<double>(df)) / log_b;
        TermScore score;
        score.term = term;
        for (std::size_t d = 0; d < docs.size(); ++d) {
            auto it = tf[d].find(term);
            if (it == tf[d].end()) continue;
            double value = static_cast<double>(it->second) * idf;
            score.per_doc_tfidf.push_back({docs[d].first, value});
            if (value > score.aggregate) score.aggregate = value;
        }
        scores.push_back(std::move(score));
    }
    return scores;
}

namespace detail {

inline std::unordered_set<std::string> occurrence_terms(
    const std::vector<Occurrence>& occurrences) {
    std::unordered_set<std::string> out;
    for (const Occurrence& o : occurrences) out.insert(o.term);
    return out;
}

inline void retain_occurrences_by_term(
    std::vector<Occurrence>& occurrences,
    const std::unordered_set<std::string>& keep) {
    std::vector<Occurrence> kept;
    for (auto& o : occurrences)
        if (keep.count(o.term)) kept.push_back(std::move(o));
    occurrences = std::move(kept);
}

inline void retain_occurrences_by_tag(
    std::vector<Occurrence>& occurrences,
    const std::unordered_set<std::string>& keep) {
    std::vector<Occurrence> kept;
    for (auto& o : occurrences)
        if (keep.count(o.tag)) kept.push_back(std::move(o));
    occurrences = std::move(kept);
}

}  // namespace detail

// Keeps a term iff lower_bound < aggregate <= threshold, then restores
// referential integrity: a dropped verb takes its verb_objects entry and the
// object occurrences it governed with it, a dropped object its
// object_complements entry and complement occurrences, and dropped terms
// disappear from every association value list. Repetitions are kept; run
// deduplicate_terms once after all three lists are filtered.
inline ExtractionTables filter_terms(ListKind kind,
                                     const std::vector<TermScore>& scores,
                                     double threshold, double lower_bound,
                                     const ExtractionTables& tables) {
    std::unordered_set<std::string> survivors;
    for (const TermScore& s : scores)
        if (s.aggregate > lower_bound && s.aggregate <= threshold)
            survivors.insert(s.term);

    ExtractionTables out = tables;
    switch (kind) {
        case ListKind::Verbs: {
            detail::retain_occurrences_by_term(out.verbs, survivors);
            out.verb_objects.retain_keys(
                [&](const std::string& v) { return survivors.count(v) > 0; });
            detail::retain_occurrences_by_tag(out.objects, survivors);
            auto live_objects = detail::occurrence_terms(out.objects);
            out.object_complements.retain_keys([&](const std::string& o) {
                return live_objects.count(o) > 0;
            });
            detail::retain_occurrences_by_tag(out.complements, live_objects);
            break;
        }
        case ListKind::Objects: {
            detail::retain_occurrences_by_term(out.objects, survivors);
            out.verb_objects.retain_values(
                [&](const std::string& o) { return survivors.count(o) > 0; });
            out.object_complements.retain_keys(
                [&](const std::string& o) { return survivors.count(o) > 0; });
            detail::retain_occurrences_by_tag(out.complements, survivors);
            break;
        }
        case ListKind::Complements: {
            detail::retain_occurrences_by_term(out.complements, survivors);
            out.object_complements.retain_values(
                [&](const std::string& c) { return survivors.count(c) > 0; });
            break;
        }
    }
    return out;
}

// Removes repetitions once all three filters have run: occurrence lists keep
// the first occurrence of each term, association value lists the first of
// each value, both preserving order.
inline ExtractionTables deduplicate_terms(const ExtractionTables& tables) {
    ExtractionTables out = tables;
    auto dedupe = [](std::vector<Occurrence>& occurrences) {
        std::vector<Occurrence> kept;
        std::unordered_set<std::string> seen;
        for (auto& o : occurrences)
            if (seen.insert(o.term).second) kept.push_back(std::move(o));
        occurrences = std::move(kept);
    };
    dedupe(out.verbs);
    dedupe(out.objects);
    dedupe(out.complements);
    out.verb_objects.dedupe_values();
    out.object_complements.dedupe_values();
    return out;
}

inline void write_scores_tsv(std::ostream& out, ListKind kind,
                             const std::vector<TermScore>& scores,
                             double threshold, double lower_bound) {
    for (const TermScore& s : scores) {
        bool kept = s.aggregate > lower_bound && s.aggregate <= threshold;
        out << to_string(kind) << '\t' << s.term << '\t'
            << format_real(s.aggregate) << '\t' << (kept ? "kept" : "dropped")
            << '\n';
    }
}

}  // namespace woah

#endif  // WOAH_WEIGHTING_HPP
