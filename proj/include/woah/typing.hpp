#ifndef WOAH_TYPING_HPP
#define WOAH_TYPING_HPP

#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "woah/corpus.hpp"
#include "woah/embedding.hpp"
#include "woah/errors.hpp"
#include "woah/extraction.hpp"
#include "woah/selection.hpp"
#include "woah/weighting.hpp"

namespace woah {

// One row per estimated type: the normalized sum of a representative
// embedding and its members. Column space is inherited from the source
// matrix, so type rows stay comparable to term rows.
struct TypeMatrix {
    std::vector<std::string> type_labels;
    // per type: anchor term first, then member terms in selection order
    std::vector<std::vector<std::string>> member_terms;
    EmbeddingMatrix matrix;

    const std::vector<std::string>& members_of(const std::string& type) const {
        for (std::size_t i = 0; i < type_labels.size(); ++i)
            if (type_labels[i] == type) return member_terms[i];
        throw Error("no such type: \"" + type + "\"");
    }
};

// Run configuration echoed into every OntologyEstimate.
struct Parameters {
    double t_v = 0, t_o = 0, t_c = 0;
    int g_v = 0, g_o = 0, c_v = 0, c_o = 0;
    double log_base = 10.0;
    double lower_bound = 0.0;
};

struct OntologyEstimate {
    TypeMatrix intents;   // over object dimensions
    TypeMatrix entities;  // over complement dimensions
    // |intents| x |entities|; each row sums to 1 or is all-zero
    std::vector<std::vector<double>> associativity;
    Parameters parameters;
};

// Collapses each representative and its selected members into a single
// unit-norm type embedding, named after the representative's lemma.
inline TypeMatrix extract_types(const SelectionResult& selection,
                                const EmbeddingMatrix& matrix) {
    TypeMatrix types;
    types.matrix.col_labels = matrix.col_labels;
    for (std::size_t i = 0; i < selection.representatives.size(); ++i) {
        const std::string& rep = selection.representatives[i];
        std::vector<double> sum = matrix.row(rep);
        std::vector<std::string> terms = {rep};
        for (const auto& [member, sim] : selection.members[i]) {
            const auto& row = matrix.row(member);
            for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += row[c];
            terms.push_back(member);
        }
        double norm = 0.0;
        for (double v : sum) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : sum) v /= norm;
        types.type_labels.push_back(rep);
        types.member_terms.push_back(std::move(terms));
        types.matrix.row_labels.push_back(rep);
        types.matrix.values.push_back(std::move(sum));
    }
    return types;
}

// Intent-to-entity associativity: the weight of intent i on entity e is the
// mass the intent's type vector puts on the entity's member objects (the
// only dimensions the two matrices share), row-normalized to sum 1. Rows
// with no shared mass stay all-zero.
inline std::vector<std::vector<double>> associate(const TypeMatrix& intents,
                                                  const TypeMatrix& entities) {
    std::unordered_map<std::string, std::size_t> col_of;
    for (std::size_t c = 0; c < intents.matrix.col_labels.size(); ++c)
        col_of.emplace(intents.matrix.col_labels[c], c);

    std::vector<std::vector<double>> assoc;
    for (std::size_t i = 0; i < intents.type_labels.size(); ++i) {
        std::vector<double> row(entities.type_labels.size(), 0.0);
        for (std::size_t e = 0; e < entities.type_labels.size(); ++e) {
            double mass = 0.0;
            for (const std::string& object : entities.member_terms[e]) {
                auto it = col_of.find(object);
                if (it != col_of.end())
                    mass += intents.matrix.values[i][it->second];
            }
            row[e] = mass;
        }
        double total = 0.0;
        for (double v : row) total += v;
        if (total > 0.0)
            for (double& v : row) v /= total;
        assoc.push_back(std::move(row));
    }
    return assoc;
}

struct PipelineConfig {
    Thresholds thresholds;
    int g_v = 3, g_o = 3;
    int c_v = 5, c_o = 5;

    void validate() const {
        thresholds.validate();
        if (g_v < 1) throw ConfigError("g_v must be >= 1");
        if (g_o < 1) throw ConfigError("g_o must be >= 1");
        if (c_v < 0) throw ConfigError("c_v must be >= 0");
        if (c_o < 0) throw ConfigError("c_o must be >= 0");
    }
};

// Intermediate products of build_ontology, for summaries and debug dumps.
struct PipelineTrace {
    ExtractionTables extracted;  // lemmatized, before filtering
    ExtractionTables filtered;   // after all filters + deduplication
    std::vector<TermScore> verb_scores, object_scores, complement_scores;
    Dict2VecResult verb_matrix, object_matrix;
    std::vector<GiniScore> verb_gini, object_gini;
    SelectionResult verb_selection, object_selection;
};

namespace detail {

inline std::vector<std::string> distinct_terms(
    const std::vector<Occurrence>& occurrences) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const Occurrence& o : occurrences)
        if (seen.insert(o.term).second) out.push_back(o.term);
    return out;
}

template <typename F>
auto stage(const char* name, F f) {
    try {
        return f();
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(name, e.what());
    }
}

}  // namespace detail

// The whole estimation pipeline: extract -> lemmatize -> tf-idf filter
// (verbs, then objects, then complements) -> dict2vec (V and O) -> Gini
// median + greedy dissimilarity selection on each -> type extraction ->
// associativity. Any stage failure is rethrown tagged with the stage name.
inline OntologyEstimate build_ontology(const Corpus& corpus,
                                       const PipelineConfig& config,
                                       PipelineTrace* trace = nullptr) {
    config.validate();
    if (corpus.dialogues.empty())
        throw PipelineError("extraction", "empty corpus");
    const Thresholds& th = config.thresholds;

    auto tables = detail::stage("extraction", [&] {
        return extract_tables(corpus);
    });
    tables = detail::stage("lemmatization", [&] {
        return lemmatize_tables(tables);
    });
    if (trace) trace->extracted = tables;

    auto verb_scores = detail::stage("weighting/verbs", [&] {
        return tfidf_scores(ListKind::Verbs, tables, corpus, th.log_base);
    });
    tables = detail::stage("weighting/verbs", [&] {
        return filter_terms(ListKind::Verbs, verb_scores, th.t_v,
                            th.lower_bound, tables);
    });
    auto object_scores = detail::stage("weighting/objects", [&] {
        return tfidf_scores(ListKind::Objects, tables, corpus, th.log_base);
    });
    tables = detail::stage("weighting/objects", [&] {
        return filter_terms(ListKind::Objects, object_scores, th.t_o,
                            th.lower_bound, tables);
    });
    auto complement_scores = detail::stage("weighting/complements", [&] {
        return tfidf_scores(ListKind::Complements, tables, corpus,
                            th.log_base);
    });
    tables = detail::stage("weighting/complements", [&] {
        return filter_terms(ListKind::Complements, complement_scores, th.t_c,
                            th.lower_bound, tables);
    });
    tables = deduplicate_terms(tables);
    if (trace) {
        trace->verb_scores = verb_scores;
        trace->object_scores = object_scores;
        trace->complement_scores = complement_scores;
        trace->filtered = tables;
    }

    auto V = detail::stage("embedding/verbs", [&] {
        return dict2vec(tables.verb_objects, tables.verb_objects.keys(),
                        detail::distinct_terms(tables.objects));
    });
    auto O = detail::stage("embedding/objects", [&] {
        return dict2vec(tables.object_complements,
                        tables.object_complements.keys(),
                        detail::distinct_terms(tables.complements));
    });
    if (trace) {
        trace->verb_matrix = V;
        trace->object_matrix = O;
    }

    auto select = [&](const char* stage_name, const EmbeddingMatrix& m, int g,
                      int c, std::vector<GiniScore>* gini_out,
                      SelectionResult* sel_out) {
        return detail::stage(stage_name, [&] {
            auto gini = gini_scores(m);
            auto anchor = median_anchor(gini);
            auto reps = filter_representatives(m, anchor, g);
            auto sel = select_members(m, reps, c);
            if (gini_out) *gini_out = std::move(gini);
            if (sel_out) *sel_out = sel;
            return sel;
        });
    };
    auto verb_sel = select("selection/verbs", V.matrix, config.g_v,
                           config.c_v, trace ? &trace->verb_gini : nullptr,
                           trace ? &trace->verb_selection : nullptr);
    auto object_sel = select("selection/objects", O.matrix, config.g_o,
                             config.c_o, trace ? &trace->object_gini : nullptr,
                             trace ? &trace->object_selection : nullptr);

    OntologyEstimate ontology;
    ontology.intents = detail::stage("typing", [&] {
        return extract_types(verb_sel, V.matrix);
    });
    ontology.entities = detail::stage("typing", [&] {
        return extract_types(object_sel, O.matrix);
    });
    ontology.associativity = detail::stage("association", [&] {
        return associate(ontology.intents, ontology.entities);
    });
    ontology.parameters = {th.t_v,      th.t_o, th.t_c, config.g_v,
                           config.g_o,  config.c_v, config.c_o,
                           th.log_base, th.lower_bound};
    return ontology;
}

}  // namespace woah

#endif  // WOAH_TYPING_HPP
