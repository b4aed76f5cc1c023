#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "woah/export_eval.hpp"

using namespace woah;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

OntologyEstimate small_ontology() {
    OntologyEstimate o;
    o.parameters = {1.5, 10.0, 10.0, 3, 3, 2, 2, 10.0, 0.0};
    o.intents.type_labels = {"book"};
    o.intents.member_terms = {{"book", "reserve"}};
    o.intents.matrix.row_labels = {"book"};
    o.intents.matrix.col_labels = {"flight"};
    o.intents.matrix.values = {{1.0}};
    o.entities.type_labels = {"flight"};
    o.entities.member_terms = {{"flight"}};
    o.entities.matrix.row_labels = {"flight"};
    o.entities.matrix.col_labels = {"morning"};
    o.entities.matrix.values = {{1.0}};
    o.associativity = {{1.0}};
    return o;
}

GoldStandard gold_matching_small() {
    GoldStandard gold;
    gold.intent_types = {{"booking", {"book", "reserve"}}};
    gold.entity_types = {{"flights", {"flight"}}};
    return gold;
}

}  // namespace

TEST_CASE("export_json structure and determinism") {
    OntologyEstimate o = small_ontology();
    std::string json = export_json(o);
    CHECK(json ==
          "{\"parameters\":{\"t_v\":1.5,\"t_o\":10.0,\"t_c\":10.0,"
          "\"g_v\":3,\"g_o\":3,\"c_v\":2,\"c_o\":2,\"log_base\":10.0,"
          "\"lower_bound\":0.0},"
          "\"intents\":[{\"name\":\"book\",\"members\":[\"book\","
          "\"reserve\"],\"vector\":{\"flight\":1.0}}],"
          "\"entities\":[{\"name\":\"flight\",\"members\":[\"flight\"],"
          "\"vector\":{\"morning\":1.0}}],"
          "\"associativity\":[[1.0]]}\n");
    CHECK(export_json(o) == json);
}

TEST_CASE("export_json empty ontology") {
    OntologyEstimate o;
    o.parameters = {std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity(),
                    3, 3, 5, 5, 10.0, 0.0};
    std::string json = export_json(o);
    CHECK_THAT(json, ContainsSubstring("\"intents\":[]"));
    CHECK_THAT(json, ContainsSubstring("\"entities\":[]"));
    CHECK_THAT(json, ContainsSubstring("\"associativity\":[]"));
    CHECK_THAT(json, ContainsSubstring("\"t_v\":null"));
    CHECK(json.back() == '\n');
}

TEST_CASE("export_json round trip preserves every field") {
    OntologyEstimate o = small_ontology();
    o.intents.matrix.values = {{0.123456789012345}};
    std::string json = export_json(o);
    OntologyEstimate parsed = parse_ontology_json(json);
    CHECK(parsed.intents.type_labels == o.intents.type_labels);
    CHECK(parsed.intents.member_terms == o.intents.member_terms);
    CHECK(parsed.intents.matrix.col_labels == o.intents.matrix.col_labels);
    CHECK(parsed.entities.matrix.col_labels == o.entities.matrix.col_labels);
    CHECK(parsed.parameters.g_v == o.parameters.g_v);
    CHECK(parsed.parameters.t_v == o.parameters.t_v);
    CHECK_THAT(parsed.intents.matrix.values[0][0],
               WithinAbs(o.intents.matrix.values[0][0], 1e-12));
    // serializing the parse is byte-identical
    CHECK(export_json(parsed) == json);

    // infinity round-trips through null
    o.parameters.t_v = std::numeric_limits<double>::infinity();
    OntologyEstimate parsed2 = parse_ontology_json(export_json(o));
    CHECK(std::isinf(parsed2.parameters.t_v));
}

TEST_CASE("export_turtle renders classes, members and weights") {
    OntologyEstimate o = small_ontology();
    std::string ttl = export_turtle(o, "http://example.org/woah");
    CHECK_THAT(ttl, ContainsSubstring(
                        "@prefix : <http://example.org/woah#> ."));
    CHECK_THAT(ttl, ContainsSubstring(":BookIntent a :IntentType ."));
    CHECK_THAT(ttl, ContainsSubstring(":reserve :memberOf :BookIntent ."));
    CHECK_THAT(ttl, ContainsSubstring(":book :memberOf :BookIntent ."));
    CHECK_THAT(ttl, ContainsSubstring(":FlightEntity a :EntityType ."));
    CHECK_THAT(ttl, ContainsSubstring("rdf:subject :BookIntent"));
    CHECK_THAT(ttl, ContainsSubstring("rdf:object :FlightEntity"));
    CHECK_THAT(ttl, ContainsSubstring("\"1.0\"^^xsd:double"));
}

TEST_CASE("export_turtle omits zero associativity") {
    OntologyEstimate o = small_ontology();
    o.associativity = {{0.0}};
    std::string ttl = export_turtle(o, "http://example.org/woah");
    CHECK_THAT(ttl, !ContainsSubstring("associatedWith"));
    CHECK_THAT(ttl, !ContainsSubstring("rdf:Statement"));
}

TEST_CASE("export_turtle empty ontology is just the prefix block") {
    OntologyEstimate o;
    std::string ttl = export_turtle(o, "http://example.org/woah#");
    CHECK(ttl ==
          "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n"
          "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
          "@prefix : <http://example.org/woah#> .\n");
}

TEST_CASE("export_turtle escapes non-name characters deterministically") {
    OntologyEstimate o = small_ontology();
    o.intents.type_labels = {"re-book"};
    o.intents.member_terms = {{"re-book", "café"}};
    std::string ttl = export_turtle(o, "http://example.org/x");
    CHECK_THAT(ttl, ContainsSubstring(":Re%2DbookIntent"));
    CHECK_THAT(ttl, ContainsSubstring(":caf%C3%A9"));
}

TEST_CASE("export_turtle rejects bad base IRIs") {
    OntologyEstimate o = small_ontology();
    CHECK_THROWS_AS(export_turtle(o, ""), ConfigError);
    CHECK_THROWS_AS(export_turtle(o, "not an iri"), ConfigError);
    CHECK_THROWS_AS(export_turtle(o, "9http://x"), ConfigError);
    CHECK_THROWS_AS(export_turtle(o, "http//x"), ConfigError);
}

TEST_CASE("parse_gold_json validates its schema") {
    std::string good = R"({
        "intent_types": [{"name": "booking", "members": ["book"]}],
        "entity_types": [{"name": "flights", "members": ["flight"]}]
    })";
    GoldStandard gold = parse_gold_json(good);
    REQUIRE(gold.intent_types.size() == 1);
    CHECK(gold.intent_types[0].members.count("book") == 1);

    CHECK_THROWS_AS(parse_gold_json("{"), ParseError);
    CHECK_THROWS_WITH(
        parse_gold_json(R"({"intent_types":[{"name":"a","members":[]}],
                            "entity_types":[]})"),
        ContainsSubstring("no members"));
    CHECK_THROWS_WITH(
        parse_gold_json(
            R"({"intent_types":[{"name":"a","members":["x"]},
                                {"name":"a","members":["y"]}],
                "entity_types":[]})"),
        ContainsSubstring("duplicate"));
}

TEST_CASE("evaluate_against_gold perfect match") {
    EvalReport report =
        evaluate_against_gold(small_ontology(), gold_matching_small());
    CHECK_THAT(report.intents.f1, WithinAbs(1.0, 1e-15));
    CHECK_THAT(report.entities.f1, WithinAbs(1.0, 1e-15));
    REQUIRE(report.intents.matching.size() == 1);
    CHECK(report.intents.matching[0].predicted == "book");
    CHECK(report.intents.matching[0].gold == "booking");
    CHECK(report.intents.unmatched_predicted.empty());
    CHECK(report.intents.unmatched_gold.empty());
}

TEST_CASE("evaluate_against_gold no overlap") {
    GoldStandard gold;
    gold.intent_types = {{"other", {"pay", "refund"}}};
    gold.entity_types = {{"cars", {"car"}}};
    EvalReport report = evaluate_against_gold(small_ontology(), gold);
    CHECK(report.intents.f1 == 0.0);
    CHECK(report.entities.f1 == 0.0);
    CHECK(report.intents.matching.empty());
    CHECK(report.intents.unmatched_predicted ==
          std::vector<std::string>{"book"});
    CHECK(report.intents.unmatched_gold ==
          std::vector<std::string>{"other"});
}

TEST_CASE("evaluate_against_gold half overlap arithmetic") {
    OntologyEstimate o = small_ontology();
    o.intents.member_terms = {{"x", "y"}};
    GoldStandard gold = gold_matching_small();
    gold.intent_types = {{"G", {"x", "z"}}};
    EvalReport report = evaluate_against_gold(o, gold);
    REQUIRE(report.intents.matching.size() == 1);
    CHECK_THAT(report.intents.matching[0].precision, WithinAbs(0.5, 1e-15));
    CHECK_THAT(report.intents.matching[0].recall, WithinAbs(0.5, 1e-15));
    CHECK_THAT(report.intents.matching[0].f1, WithinAbs(0.5, 1e-15));
    CHECK_THAT(report.intents.f1, WithinAbs(0.5, 1e-15));
}

TEST_CASE("evaluate_against_gold is invariant under predicted renaming") {
    OntologyEstimate a = small_ontology();
    OntologyEstimate b = small_ontology();
    b.intents.type_labels = {"zzz"};
    GoldStandard gold = gold_matching_small();
    CHECK_THAT(evaluate_against_gold(a, gold).intents.f1,
               WithinAbs(evaluate_against_gold(b, gold).intents.f1, 1e-15));
}

TEST_CASE("greedy matching is at most the optimal assignment") {
    // three predicted, three gold, engineered so greedy is tempted early
    OntologyEstimate o = small_ontology();
    o.intents.type_labels = {"p1", "p2", "p3"};
    o.intents.member_terms = {{"a", "b", "c"},
                              {"a", "b"},
                              {"c", "d", "e", "f"}};
    o.intents.matrix.row_labels = o.intents.type_labels;
    o.intents.matrix.values = {{1.0}, {1.0}, {1.0}};
    GoldStandard gold = gold_matching_small();
    gold.intent_types = {{"g1", {"a", "b", "c"}},
                         {"g2", {"d", "e"}},
                         {"g3", {"c", "f"}}};

    EvalReport greedy = evaluate_against_gold(o, gold);

    // brute-force optimal one-to-one assignment by micro F1
    std::vector<std::set<std::string>> predicted;
    for (const auto& terms : o.intents.member_terms)
        predicted.push_back({terms.begin(), terms.end()});
    std::size_t pred_total = 3 + 2 + 4, gold_total = 3 + 2 + 2;
    std::vector<std::size_t> perm = {0, 1, 2};
    double best_f1 = 0.0;
    do {
        std::size_t tp = 0;
        for (std::size_t p = 0; p < 3; ++p)
            for (const auto& t : predicted[p])
                tp += gold.intent_types[perm[p]].members.count(t);
        double precision = double(tp) / pred_total;
        double recall = double(tp) / gold_total;
        if (tp > 0)
            best_f1 = std::max(
                best_f1, 2 * precision * recall / (precision + recall));
    } while (std::next_permutation(perm.begin(), perm.end()));

    CHECK(greedy.intents.f1 <= best_f1 + 1e-12);
}

TEST_CASE("eval_report_json shape") {
    EvalReport report =
        evaluate_against_gold(small_ontology(), gold_matching_small());
    std::string json = eval_report_json(report);
    CHECK_THAT(json, ContainsSubstring("\"intent_f1\":1.0"));
    CHECK_THAT(json, ContainsSubstring("\"entity_f1\":1.0"));
    CHECK_THAT(json, ContainsSubstring("\"unmatched_gold\":[]"));
    CHECK(json.back() == '\n');
}
