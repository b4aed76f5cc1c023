#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "woah/typing.hpp"

using namespace woah;
using Catch::Matchers::WithinAbs;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

EmbeddingMatrix uvw() {
    EmbeddingMatrix m;
    m.row_labels = {"u", "v", "w"};
    m.col_labels = {"c0", "c1"};
    m.values = {{1.0, 0.0}, {0.0, 1.0}, {kInvSqrt2, kInvSqrt2}};
    return m;
}

SelectionResult selection_of(std::vector<std::string> reps,
                             std::vector<std::vector<std::pair<std::string,
                                                               double>>> mem) {
    SelectionResult sel;
    sel.representatives = std::move(reps);
    sel.members = std::move(mem);
    sel.anchor = sel.representatives.front();
    return sel;
}

Sentence sent(std::vector<std::tuple<std::string, std::string, int,
                                     std::string>> spec) {
    Sentence s;
    int index = 1;
    for (auto& [lemma, upos, head, deprel] : spec)
        s.tokens.push_back({index++, lemma, lemma, upos, head, deprel});
    return s;
}

}  // namespace

TEST_CASE("extract_types sums members into a unit-norm type row") {
    EmbeddingMatrix m = uvw();
    SECTION("no members: the representative row itself") {
        TypeMatrix t = extract_types(selection_of({"u"}, {{}}), m);
        CHECK(t.type_labels == std::vector<std::string>{"u"});
        CHECK(t.member_terms[0] == std::vector<std::string>{"u"});
        CHECK_THAT(t.matrix.values[0][0], WithinAbs(1.0, 1e-15));
        CHECK_THAT(t.matrix.values[0][1], WithinAbs(0.0, 1e-15));
    }
    SECTION("one orthogonal member") {
        TypeMatrix t =
            extract_types(selection_of({"u"}, {{{"v", 0.0}}}), m);
        CHECK_THAT(t.matrix.values[0][0], WithinAbs(kInvSqrt2, 1e-12));
        CHECK_THAT(t.matrix.values[0][1], WithinAbs(kInvSqrt2, 1e-12));
    }
    SECTION("two members, symmetric sum") {
        TypeMatrix t = extract_types(
            selection_of({"u"}, {{{"w", kInvSqrt2}, {"v", 0.0}}}), m);
        CHECK_THAT(t.matrix.values[0][0], WithinAbs(kInvSqrt2, 1e-12));
        CHECK_THAT(t.matrix.values[0][1], WithinAbs(kInvSqrt2, 1e-12));
        CHECK(t.member_terms[0] ==
              std::vector<std::string>{"u", "w", "v"});
    }
    SECTION("member order does not change the row") {
        TypeMatrix a = extract_types(
            selection_of({"u"}, {{{"w", kInvSqrt2}, {"v", 0.0}}}), m);
        TypeMatrix b = extract_types(
            selection_of({"u"}, {{{"v", 0.0}, {"w", kInvSqrt2}}}), m);
        for (std::size_t c = 0; c < 2; ++c)
            CHECK_THAT(a.matrix.values[0][c],
                       WithinAbs(b.matrix.values[0][c], 1e-15));
    }
    SECTION("column labels are preserved") {
        TypeMatrix t = extract_types(selection_of({"u"}, {{}}), m);
        CHECK(t.matrix.col_labels == m.col_labels);
    }
}

TEST_CASE("associate distributes intent mass over entity member objects") {
    TypeMatrix intents;
    intents.type_labels = {"book"};
    intents.member_terms = {{"book"}};
    intents.matrix.row_labels = {"book"};
    intents.matrix.col_labels = {"flight", "hotel"};
    intents.matrix.values = {{1.0, 0.0}};

    TypeMatrix entities;
    entities.matrix.col_labels = {"morning"};  // complement space, unused

    SECTION("single overlapping entity") {
        entities.type_labels = {"flight"};
        entities.member_terms = {{"flight"}};
        entities.matrix.row_labels = {"flight"};
        entities.matrix.values = {{1.0}};
        auto assoc = associate(intents, entities);
        REQUIRE(assoc.size() == 1);
        CHECK_THAT(assoc[0][0], WithinAbs(1.0, 1e-15));
    }
    SECTION("entity without shared columns gets zero, row renormalizes") {
        entities.type_labels = {"flight", "alien"};
        entities.member_terms = {{"flight"}, {"alien"}};
        entities.matrix.row_labels = {"flight", "alien"};
        entities.matrix.values = {{1.0}, {1.0}};
        auto assoc = associate(intents, entities);
        CHECK_THAT(assoc[0][0], WithinAbs(1.0, 1e-15));
        CHECK_THAT(assoc[0][1], WithinAbs(0.0, 1e-15));
    }
    SECTION("weights normalize to the raw mass ratio") {
        intents.matrix.values = {{3.0, 1.0}};  // pre-normalization masses
        entities.type_labels = {"flight", "hotel"};
        entities.member_terms = {{"flight"}, {"hotel"}};
        entities.matrix.row_labels = {"flight", "hotel"};
        entities.matrix.values = {{1.0}, {1.0}};
        auto assoc = associate(intents, entities);
        CHECK_THAT(assoc[0][0], WithinAbs(0.75, 1e-15));
        CHECK_THAT(assoc[0][1], WithinAbs(0.25, 1e-15));
    }
    SECTION("intent with no shared mass keeps an all-zero row") {
        intents.matrix.col_labels = {"other1", "other2"};
        entities.type_labels = {"flight"};
        entities.member_terms = {{"flight"}};
        entities.matrix.row_labels = {"flight"};
        entities.matrix.values = {{1.0}};
        auto assoc = associate(intents, entities);
        CHECK_THAT(assoc[0][0], WithinAbs(0.0, 1e-15));
    }
}

namespace {

// two dialogues, two verbs; "flight" occurs under both verbs so the object
// filter treats it as a stop word, leaving disjoint verb/object spaces
Corpus tiny_corpus() {
    Corpus corpus;
    corpus.dialogues.push_back(
        {"d1",
         {sent({{"book", "VERB", 0, "root"},
                {"flight", "NOUN", 1, "obj"},
                {"morning", "NOUN", 2, "nmod"}}),
          sent({{"book", "VERB", 0, "root"},
                {"hotel", "NOUN", 1, "obj"},
                {"night", "NOUN", 2, "nmod"}})}});
    corpus.dialogues.push_back(
        {"d2",
         {sent({{"cancel", "VERB", 0, "root"},
                {"reservation", "NOUN", 1, "obj"},
                {"fee", "NOUN", 2, "nmod"}}),
          sent({{"cancel", "VERB", 0, "root"},
                {"flight", "NOUN", 1, "obj"},
                {"morning", "NOUN", 2, "nmod"}})}});
    return corpus;
}

}  // namespace

TEST_CASE("build_ontology on a tiny deterministic corpus") {
    Corpus corpus = tiny_corpus();

    PipelineConfig config;
    config.g_v = 2;
    config.g_o = 2;
    config.c_v = 0;
    config.c_o = 0;

    PipelineTrace trace;
    OntologyEstimate ontology = build_ontology(corpus, config, &trace);
    CHECK(ontology.intents.type_labels.size() == 2);
    CHECK(ontology.entities.type_labels.size() == 2);
    REQUIRE(ontology.associativity.size() == 2);
    for (const auto& row : ontology.associativity) {
        double sum = 0.0;
        for (double v : row) sum += v;
        CHECK_THAT(sum, WithinAbs(1.0, 1e-12));
    }
    // parameters echo the configuration
    CHECK(ontology.parameters.g_v == 2);
    CHECK(ontology.parameters.c_o == 0);
    CHECK(ontology.parameters.log_base == 10.0);

    // intent columns are object lemmas, entity columns complement lemmas
    CHECK(ontology.intents.matrix.col_labels ==
          trace.verb_matrix.matrix.col_labels);
    CHECK(ontology.entities.matrix.col_labels ==
          trace.object_matrix.matrix.col_labels);

    // identical runs produce identical estimates
    OntologyEstimate again = build_ontology(corpus, config);
    CHECK(again.intents.type_labels == ontology.intents.type_labels);
    CHECK(again.associativity == ontology.associativity);
}

TEST_CASE("build_ontology degenerate pipelines") {
    SECTION("empty corpus fails at extraction") {
        Corpus corpus;
        PipelineConfig config;
        CHECK_THROWS_MATCHES(
            build_ontology(corpus, config), PipelineError,
            Catch::Matchers::MessageMatches(
                Catch::Matchers::StartsWith("extraction")));
    }
    SECTION("g = 1, c = 0 collapses to the anchor verb's embedding") {
        PipelineConfig config;
        config.g_v = 1;
        config.g_o = 1;
        config.c_v = 0;
        config.c_o = 0;
        PipelineTrace trace;
        OntologyEstimate ontology =
            build_ontology(tiny_corpus(), config, &trace);
        REQUIRE(ontology.intents.type_labels.size() == 1);
        const std::string& anchor = trace.verb_selection.anchor;
        CHECK(ontology.intents.type_labels[0] == anchor);
        CHECK(ontology.intents.matrix.values[0] ==
              trace.verb_matrix.matrix.row(anchor));
    }
    SECTION("one-verb corpus cannot survive the object filter") {
        // with a single verb key there is exactly one object document, so
        // every object scores an aggregate of 0 and is removed
        Corpus corpus;
        corpus.dialogues.push_back(
            {"d1",
             {sent({{"book", "VERB", 0, "root"},
                    {"flight", "NOUN", 1, "obj"},
                    {"morning", "NOUN", 2, "nmod"}})}});
        corpus.dialogues.push_back(
            {"d2", {sent({{"thanks", "NOUN", 0, "root"}})}});
        PipelineConfig config;
        config.g_v = 1;
        config.c_v = 1;
        CHECK_THROWS_AS(build_ontology(corpus, config), PipelineError);
    }
    SECTION("corpus whose verbs are all stop words fails in weighting") {
        // one dialogue only: every verb has idf 0 and is filtered out
        Corpus corpus;
        corpus.dialogues.push_back(
            {"d1",
             {sent({{"book", "VERB", 0, "root"},
                    {"flight", "NOUN", 1, "obj"}})}});
        PipelineConfig config;
        CHECK_THROWS_AS(build_ontology(corpus, config), PipelineError);
    }
    SECTION("invalid parameters are rejected before any work") {
        Corpus corpus;
        corpus.dialogues.push_back({"d1", {}});
        PipelineConfig config;
        config.c_v = -2;
        CHECK_THROWS_MATCHES(
            build_ontology(corpus, config), ConfigError,
            Catch::Matchers::MessageMatches(
                Catch::Matchers::ContainsSubstring("c_v")));
    }
}
