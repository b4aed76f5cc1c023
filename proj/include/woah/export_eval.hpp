#ifndef WOAH_EXPORT_EVAL_HPP
#define WOAH_EXPORT_EVAL_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "woah/errors.hpp"
#include "woah/format.hpp"
#include "woah/typing.hpp"

namespace woah {

namespace detail {

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    return out;
}

inline std::string json_string(const std::string& s) {
    return "\"" + json_escape(s) + "\"";
}

// +infinity (the "no upper cut" threshold) has no JSON literal; it is
// serialized as null and read back as +infinity.
inline std::string json_threshold(double v) {
    return std::isfinite(v) ? format_real_json(v) : "null";
}

inline void append_type_matrix_json(std::string& out, const TypeMatrix& tm) {
    out += '[';
    for (std::size_t i = 0; i < tm.type_labels.size(); ++i) {
        if (i) out += ',';
        out += "{\"name\":" + json_string(tm.type_labels[i]) +
               ",\"members\":[";
        for (std::size_t m = 0; m < tm.member_terms[i].size(); ++m) {
            if (m) out += ',';
            out += json_string(tm.member_terms[i][m]);
        }
        out += "],\"vector\":{";
        for (std::size_t c = 0; c < tm.matrix.col_labels.size(); ++c) {
            if (c) out += ',';
            out += json_string(tm.matrix.col_labels[c]) + ":" +
                   format_real_json(tm.matrix.values[i][c]);
        }
        out += "}}";
    }
    out += ']';
}

}  // namespace detail

// Canonical JSON serialization. Top-level keys, in order: "parameters",
// "intents", "entities", "associativity". Each type carries "name",
// "members" and "vector"; the vector is an object keyed by column label in
// column order, values with 12 significant digits. Compact (no whitespace),
// UTF-8, one trailing LF. Identical ontologies serialize byte-identically.
// docs/schema.md describes the format.
inline std::string export_json(const OntologyEstimate& ontology) {
    const Parameters& p = ontology.parameters;
    std::string out = "{\"parameters\":{";
    out += "\"t_v\":" + detail::json_threshold(p.t_v);
    out += ",\"t_o\":" + detail::json_threshold(p.t_o);
    out += ",\"t_c\":" + detail::json_threshold(p.t_c);
    out += ",\"g_v\":" + std::to_string(p.g_v);
    out += ",\"g_o\":" + std::to_string(p.g_o);
    out += ",\"c_v\":" + std::to_string(p.c_v);
    out += ",\"c_o\":" + std::to_string(p.c_o);
    out += ",\"log_base\":" + format_real_json(p.log_base);
    out += ",\"lower_bound\":" + format_real_json(p.lower_bound);
    out += "},\"intents\":";
    detail::append_type_matrix_json(out, ontology.intents);
    out += ",\"entities\":";
    detail::append_type_matrix_json(out, ontology.entities);
    out += ",\"associativity\":[";
    for (std::size_t i = 0; i < ontology.associativity.size(); ++i) {
        if (i) out += ',';
        out += '[';
        for (std::size_t e = 0; e < ontology.associativity[i].size(); ++e) {
            if (e) out += ',';
            out += format_real_json(ontology.associativity[i][e]);
        }
        out += ']';
    }
    out += "]}\n";
    return out;
}

namespace detail {

inline TypeMatrix type_matrix_from_json(const nlohmann::ordered_json& arr) {
    TypeMatrix tm;
    for (const auto& entry : arr) {
        tm.type_labels.push_back(entry.at("name").get<std::string>());
        std::vector<std::string> members;
        for (const auto& m : entry.at("members"))
            members.push_back(m.get<std::string>());
        tm.member_terms.push_back(std::move(members));
        std::vector<double> row;
        if (tm.matrix.col_labels.empty()) {
            for (const auto& [col, value] : entry.at("vector").items()) {
                tm.matrix.col_labels.push_back(col);
                row.push_back(value.get<double>());
            }
        } else {
            for (const auto& col : tm.matrix.col_labels)
                row.push_back(entry.at("vector").at(col).get<double>());
        }
        tm.matrix.row_labels.push_back(tm.type_labels.back());
        tm.matrix.values.push_back(std::move(row));
    }
    return tm;
}

}  // namespace detail

// Inverse of export_json (column labels are recovered from the first
// type's vector keys).
inline OntologyEstimate parse_ontology_json(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("ontology JSON: ") + e.what());
    }
    try {
        OntologyEstimate ontology;
        const auto& p = j.at("parameters");
        auto threshold = [&](const char* key) {
            const auto& v = p.at(key);
            return v.is_null() ? std::numeric_limits<double>::infinity()
                               : v.get<double>();
        };
        ontology.parameters.t_v = threshold("t_v");
        ontology.parameters.t_o = threshold("t_o");
        ontology.parameters.t_c = threshold("t_c");
        ontology.parameters.g_v = p.at("g_v").get<int>();
        ontology.parameters.g_o = p.at("g_o").get<int>();
        ontology.parameters.c_v = p.at("c_v").get<int>();
        ontology.parameters.c_o = p.at("c_o").get<int>();
        ontology.parameters.log_base = p.at("log_base").get<double>();
        ontology.parameters.lower_bound = p.at("lower_bound").get<double>();
        ontology.intents = detail::type_matrix_from_json(j.at("intents"));
        ontology.entities = detail::type_matrix_from_json(j.at("entities"));
        for (const auto& row : j.at("associativity")) {
            std::vector<double> r;
            for (const auto& v : row) r.push_back(v.get<double>());
            ontology.associativity.push_back(std::move(r));
        }
        return ontology;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("ontology JSON: ") + e.what());
    }
}

namespace detail {

// Percent-encodes every byte outside [A-Za-z0-9_] so any lemma yields a
// valid Turtle local name.
inline std::string turtle_local_name(const std::string& term) {
    std::string out;
    for (unsigned char c : term) {
        if (std::isalnum(c) || c == '_') {
            out += static_cast<char>(c);
        } else {
            char buf[4];
            std::snprintf(buf, sizeof(buf), "%%%02X", c);
            out += buf;
        }
    }
    return out;
}

inline std::string type_local_name(const std::string& term,
                                   const char* suffix) {
    std::string capped = term;
    if (!capped.empty())
        capped[0] = static_cast<char>(
            std::toupper(static_cast<unsigned char>(capped[0])));
    return turtle_local_name(capped) + suffix;
}

inline void validate_base_iri(const std::string& iri) {
    auto fail = [&] { throw ConfigError("invalid base IRI: \"" + iri + "\""); };
    if (iri.empty() || !std::isalpha(static_cast<unsigned char>(iri[0])))
        fail();
    std::size_t colon = std::string::npos;
    for (std::size_t i = 0; i < iri.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(iri[i]);
        if (c <= 0x20 || c == '<' || c == '>' || c == '"') fail();
        if (c == ':' && colon == std::string::npos) colon = i;
    }
    if (colon == std::string::npos || colon + 1 >= iri.size()) fail();
    for (std::size_t i = 1; i < colon; ++i) {
        unsigned char c = static_cast<unsigned char>(iri[i]);
        if (!std::isalnum(c) && c != '+' && c != '.' && c != '-') fail();
    }
}

}  // namespace detail

// Minimal Turtle rendering: every type becomes an individual of
// :IntentType or :EntityType, every member term an individual linked with
// :memberOf, and every positive associativity weight a reified
// rdf:Statement with the :associatedWith predicate and a :weight literal.
inline std::string export_turtle(const OntologyEstimate& ontology,
                                 const std::string& base_iri) {
    detail::validate_base_iri(base_iri);
    std::string ns = base_iri;
    if (ns.back() != '#' && ns.back() != '/') ns += '#';

    std::string out;
    out += "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n";
    out += "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n";
    out += "@prefix : <" + ns + "> .\n";

    auto render_types = [&out](const TypeMatrix& tm, const char* suffix,
                               const char* klass) {
        for (std::size_t i = 0; i < tm.type_labels.size(); ++i) {
            std::string type_name =
                detail::type_local_name(tm.type_labels[i], suffix);
            out += "\n:" + type_name + " a :" + klass + " .\n";
            for (const std::string& member : tm.member_terms[i])
                out += ":" + detail::turtle_local_name(member) +
                       " :memberOf :" + type_name + " .\n";
        }
    };
    render_types(ontology.intents, "Intent", "IntentType");
    render_types(ontology.entities, "Entity", "EntityType");

    std::size_t statement = 0;
    for (std::size_t i = 0; i < ontology.associativity.size(); ++i) {
        for (std::size_t e = 0; e < ontology.associativity[i].size(); ++e) {
            double weight = ontology.associativity[i][e];
            if (!(weight > 0.0)) continue;
            out += "\n:assoc" + std::to_string(statement++) +
                   " a rdf:Statement ;\n";
            out += "    rdf:subject :" +
                   detail::type_local_name(ontology.intents.type_labels[i],
                                           "Intent") + " ;\n";
            out += "    rdf:predicate :associatedWith ;\n";
            out += "    rdf:object :" +
                   detail::type_local_name(ontology.entities.type_labels[e],
                                           "Entity") + " ;\n";
            out += "    :weight \"" + format_real_json(weight) +
                   "\"^^xsd:double .\n";
        }
    }
    return out;
}

// Human-authored reference ontology. JSON format in docs/schema.md.
struct GoldType {
    std::string name;
    std::set<std::string> members;
};

struct GoldStandard {
    std::vector<GoldType> intent_types;
    std::vector<GoldType> entity_types;
};

inline GoldStandard parse_gold_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("gold standard JSON: ") + e.what());
    }
    auto read_side = [](const nlohmann::json& arr, const char* side) {
        std::vector<GoldType> types;
        std::set<std::string> names;
        for (const auto& entry : arr) {
            GoldType t;
            t.name = entry.at("name").get<std::string>();
            if (!names.insert(t.name).second)
                throw ParseError(std::string("gold standard: duplicate ") +
                                 side + " type name \"" + t.name + "\"");
            for (const auto& m : entry.at("members"))
                t.members.insert(m.get<std::string>());
            if (t.members.empty())
                throw ParseError(std::string("gold standard: ") + side +
                                 " type \"" + t.name + "\" has no members");
            types.push_back(std::move(t));
        }
        return types;
    };
    try {
        GoldStandard gold;
        gold.intent_types = read_side(j.at("intent_types"), "intent");
        gold.entity_types = read_side(j.at("entity_types"), "entity");
        return gold;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("gold standard JSON: ") + e.what());
    }
}

inline GoldStandard load_gold_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open gold standard file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_gold_json(buf.str());
}

struct TypeMatch {
    std::string predicted;
    std::string gold;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct SideEval {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::vector<TypeMatch> matching;
    std::vector<std::string> unmatched_predicted;
    std::vector<std::string> unmatched_gold;
};

struct EvalReport {
    SideEval intents;
    SideEval entities;

    double intent_f1() const { return intents.f1; }
    double entity_f1() const { return entities.f1; }
};

namespace detail {

inline SideEval evaluate_side(
    const std::vector<std::string>& predicted_names,
    const std::vector<std::set<std::string>>& predicted_sets,
    const std::vector<GoldType>& gold) {
    struct Candidate {
        double f1, precision, recall;
        std::size_t p, g;
    };
    std::vector<Candidate> candidates;
    for (std::size_t p = 0; p < predicted_sets.size(); ++p) {
        for (std::size_t g = 0; g < gold.size(); ++g) {
            std::size_t overlap = 0;
            for (const auto& term : predicted_sets[p])
                overlap += gold[g].members.count(term);
            if (overlap == 0) continue;
            double precision =
                static_cast<double>(overlap) / predicted_sets[p].size();
            double recall =
                static_cast<double>(overlap) / gold[g].members.size();
            double f1 = 2.0 * precision * recall / (precision + recall);
            candidates.push_back({f1, precision, recall, p, g});
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [&](const Candidate& a, const Candidate& b) {
                  if (a.f1 != b.f1) return a.f1 > b.f1;
                  if (predicted_names[a.p] != predicted_names[b.p])
                      return predicted_names[a.p] < predicted_names[b.p];
                  return gold[a.g].name < gold[b.g].name;
              });

    SideEval side;
    std::vector<bool> p_used(predicted_sets.size(), false);
    std::vector<bool> g_used(gold.size(), false);
    std::size_t true_positives = 0;
    for (const Candidate& c : candidates) {
        if (p_used[c.p] || g_used[c.g]) continue;
        p_used[c.p] = true;
        g_used[c.g] = true;
        std::size_t overlap = 0;
        for (const auto& term : predicted_sets[c.p])
            overlap += gold[c.g].members.count(term);
        true_positives += overlap;
        side.matching.push_back({predicted_names[c.p], gold[c.g].name,
                                 c.precision, c.recall, c.f1});
    }
    for (std::size_t p = 0; p < predicted_sets.size(); ++p)
        if (!p_used[p]) side.unmatched_predicted.push_back(predicted_names[p]);
    for (std::size_t g = 0; g < gold.size(); ++g)
        if (!g_used[g]) side.unmatched_gold.push_back(gold[g].name);

    std::size_t predicted_total = 0, gold_total = 0;
    for (const auto& s : predicted_sets) predicted_total += s.size();
    for (const auto& g : gold) gold_total += g.members.size();
    if (true_positives > 0) {
        side.precision = static_cast<double>(true_positives) / predicted_total;
        side.recall = static_cast<double>(true_positives) / gold_total;
        side.f1 = 2.0 * side.precision * side.recall /
                  (side.precision + side.recall);
    }
    return side;
}

inline std::vector<std::set<std::string>> member_sets(const TypeMatrix& tm) {
    std::vector<std::set<std::string>> sets;
    for (const auto& terms : tm.member_terms)
        sets.push_back({terms.begin(), terms.end()});
    return sets;
}

}  // namespace detail

// Greedy one-to-one matching of predicted to gold types by descending
// pairwise F1 of member sets (predicted set = anchor + members), ties by
// (predicted name, gold name). Reported precision/recall are
// micro-averaged: matched-member overlap over all predicted / all gold
// member instances, so unmatched types count against the score.
inline EvalReport evaluate_against_gold(const OntologyEstimate& ontology,
                                        const GoldStandard& gold) {
    if (ontology.intents.type_labels.empty() ||
        ontology.entities.type_labels.empty())
        throw Error("evaluation requires a non-degenerate ontology");
    if (gold.intent_types.empty() || gold.entity_types.empty())
        throw Error("evaluation requires a non-degenerate gold standard");
    EvalReport report;
    report.intents = detail::evaluate_side(
        ontology.intents.type_labels,
        detail::member_sets(ontology.intents), gold.intent_types);
    report.entities = detail::evaluate_side(
        ontology.entities.type_labels,
        detail::member_sets(ontology.entities), gold.entity_types);
    return report;
}

namespace detail {

inline void append_side_json(std::string& out, const SideEval& side) {
    out += "{\"precision\":" + format_real_json(side.precision);
    out += ",\"recall\":" + format_real_json(side.recall);
    out += ",\"f1\":" + format_real_json(side.f1);
    out += ",\"matching\":[";
    for (std::size_t i = 0; i < side.matching.size(); ++i) {
        const TypeMatch& m = side.matching[i];
        if (i) out += ',';
        out += "{\"predicted\":" + json_string(m.predicted);
        out += ",\"gold\":" + json_string(m.gold);
        out += ",\"precision\":" + format_real_json(m.precision);
        out += ",\"recall\":" + format_real_json(m.recall);
        out += ",\"f1\":" + format_real_json(m.f1) + "}";
    }
    out += "],\"unmatched_predicted\":[";
    for (std::size_t i = 0; i < side.unmatched_predicted.size(); ++i) {
        if (i) out += ',';
        out += json_string(side.unmatched_predicted[i]);
    }
    out += "],\"unmatched_gold\":[";
    for (std::size_t i = 0; i < side.unmatched_gold.size(); ++i) {
        if (i) out += ',';
        out += json_string(side.unmatched_gold[i]);
    }
    out += "]}";
}

}  // namespace detail

inline std::string eval_report_json(const EvalReport& report) {
    std::string out = "{\"intent_f1\":" + format_real_json(report.intents.f1);
    out += ",\"entity_f1\":" + format_real_json(report.entities.f1);
    out += ",\"intents\":";
    detail::append_side_json(out, report.intents);
    out += ",\"entities\":";
    detail::append_side_json(out, report.entities);
    out += "}\n";
    return out;
}

}  // namespace woah

#endif  // WOAH_EXPORT_EVAL_HPP
