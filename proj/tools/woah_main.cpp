// woah: estimate an intent/entity ontology from CoNLL-U dialogue corpora.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "woah/woah.hpp"

namespace fs = std::filesystem;

namespace {

struct RunConfig {
    std::vector<std::string> inputs;
    woah::Thresholds thresholds;
    int g_v = 3, g_o = 3;
    int c_v = 5, c_o = 5;
    std::optional<int> max_sentences;
    std::string out;
    std::string format = "json";
    std::string base_iri = "http://example.org/woah";
    std::string gold_path;
    std::string dump_scores;
    std::string dump_gini;
    std::string dump_matrices;
};

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw woah::PipelineError("output", "cannot write " + path);
    out << bytes;
    if (!out) throw woah::PipelineError("output", "cannot write " + path);
}

std::string strip_format_extension(const std::string& path) {
    for (const char* ext : {".json", ".ttl"}) {
        std::string suffix(ext);
        if (path.size() > suffix.size() &&
            path.compare(path.size() - suffix.size(), suffix.size(), suffix) ==
                0)
            return path.substr(0, path.size() - suffix.size());
    }
    return path;
}

void write_dumps(const RunConfig& config, const woah::PipelineTrace& trace,
                 const woah::OntologyEstimate& ontology) {
    if (!config.dump_scores.empty()) {
        std::ofstream out(config.dump_scores, std::ios::binary);
        if (!out)
            throw woah::PipelineError("output",
                                      "cannot write " + config.dump_scores);
        out << "list\tterm\taggregate\tkept\n";
        const auto& th = config.thresholds;
        woah::write_scores_tsv(out, woah::ListKind::Verbs, trace.verb_scores,
                               th.t_v, th.lower_bound);
        woah::write_scores_tsv(out, woah::ListKind::Objects,
                               trace.object_scores, th.t_o, th.lower_bound);
        woah::write_scores_tsv(out, woah::ListKind::Complements,
                               trace.complement_scores, th.t_c,
                               th.lower_bound);
    }
    if (!config.dump_gini.empty()) {
        std::ofstream out(config.dump_gini, std::ios::binary);
        if (!out)
            throw woah::PipelineError("output",
                                      "cannot write " + config.dump_gini);
        out << "list\tlabel\tgini\n";
        woah::write_gini_tsv(out, "verbs", trace.verb_gini);
        woah::write_gini_tsv(out, "objects", trace.object_gini);
    }
    if (!config.dump_matrices.empty()) {
        fs::create_directories(config.dump_matrices);
        auto dump = [&](const char* name, const woah::EmbeddingMatrix& m) {
            std::ofstream out(fs::path(config.dump_matrices) / name,
                              std::ios::binary);
            if (!out)
                throw woah::PipelineError(
                    "output", std::string("cannot write ") + name);
            woah::write_matrix_tsv(m, out);
        };
        dump("V.tsv", trace.verb_matrix.matrix);
        dump("O.tsv", trace.object_matrix.matrix);
        dump("I.tsv", ontology.intents.matrix);
        dump("E.tsv", ontology.entities.matrix);
        std::ofstream tables(fs::path(config.dump_matrices) / "tables.tsv",
                             std::ios::binary);
        if (!tables)
            throw woah::PipelineError("output", "cannot write tables.tsv");
        woah::write_tables_tsv(trace.extracted, tables);
    }
}

void print_summary(const RunConfig& config, const woah::Corpus& corpus,
                   const woah::PipelineTrace& trace,
                   const woah::OntologyEstimate& ontology) {
    auto distinct = [](const std::vector<woah::Occurrence>& occ) {
        std::unordered_set<std::string> seen;
        for (const auto& o : occ) seen.insert(o.term);
        return seen.size();
    };
    std::cerr << "woah: " << corpus.dialogues.size() << " dialogues, "
              << corpus.sentence_count() << " sentences\n";
    std::cerr << "woah: extracted verbs " << trace.extracted.verbs.size()
              << " (" << distinct(trace.extracted.verbs) << " distinct)"
              << ", objects " << trace.extracted.objects.size() << " ("
              << distinct(trace.extracted.objects) << ")"
              << ", complements " << trace.extracted.complements.size()
              << " (" << distinct(trace.extracted.complements) << ")\n";
    std::cerr << "woah: after tf-idf filter: verbs "
              << trace.filtered.verbs.size() << ", objects "
              << trace.filtered.objects.size() << ", complements "
              << trace.filtered.complements.size() << "\n";
    auto dropped = [](const std::vector<std::string>& rows) {
        if (rows.empty()) return std::string("0 dropped");
        std::string s = std::to_string(rows.size()) + " dropped:";
        for (const auto& r : rows) s += " " + r;
        return s;
    };
    std::cerr << "woah: V " << trace.verb_matrix.matrix.rows() << "x"
              << trace.verb_matrix.matrix.cols() << " ("
              << dropped(trace.verb_matrix.dropped_rows) << "), O "
              << trace.object_matrix.matrix.rows() << "x"
              << trace.object_matrix.matrix.cols() << " ("
              << dropped(trace.object_matrix.dropped_rows) << ")\n";
    std::cerr << "woah: intents " << ontology.intents.type_labels.size()
              << " (anchor \"" << trace.verb_selection.anchor
              << "\"), entities " << ontology.entities.type_labels.size()
              << " (anchor \"" << trace.object_selection.anchor << "\")\n";
    (void)config;
}

int run(const RunConfig& config) {
    std::vector<woah::Corpus> parts;
    for (const std::string& path : config.inputs) {
        if (!fs::exists(path)) {
            std::cerr << "error: input file not found: " << path << "\n";
            return 2;
        }
        try {
            parts.push_back(woah::load_conllu_file(path));
        } catch (const woah::ParseError& e) {
            std::cerr << "error: " << path << ": " << e.what() << "\n";
            return 2;
        }
    }
    woah::GoldStandard gold;
    bool have_gold = !config.gold_path.empty();
    if (have_gold) {
        try {
            gold = woah::load_gold_file(config.gold_path);
        } catch (const woah::ParseError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }

    try {
        woah::Corpus corpus = woah::segment_dialogues(
            woah::merge_corpora(parts), config.max_sentences);

        woah::PipelineConfig pipeline;
        pipeline.thresholds = config.thresholds;
        pipeline.g_v = config.g_v;
        pipeline.g_o = config.g_o;
        pipeline.c_v = config.c_v;
        pipeline.c_o = config.c_o;

        woah::PipelineTrace trace;
        woah::OntologyEstimate ontology =
            woah::build_ontology(corpus, pipeline, &trace);

        if (config.format == "json") {
            write_file(config.out, woah::export_json(ontology));
            std::cerr << "woah: wrote " << config.out << "\n";
        } else if (config.format == "ttl") {
            write_file(config.out,
                       woah::export_turtle(ontology, config.base_iri));
            std::cerr << "woah: wrote " << config.out << "\n";
        } else {
            std::string base = strip_format_extension(config.out);
            write_file(base + ".json", woah::export_json(ontology));
            write_file(base + ".ttl",
                       woah::export_turtle(ontology, config.base_iri));
            std::cerr << "woah: wrote " << base << ".json and " << base
                      << ".ttl\n";
        }
        write_dumps(config, trace, ontology);
        print_summary(config, corpus, trace, ontology);

        if (have_gold) {
            woah::EvalReport report =
                woah::evaluate_against_gold(ontology, gold);
            std::cout << woah::eval_report_json(report);
        }
        return 0;
    } catch (const woah::PipelineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig config;
    CLI::App app{
        "woah - ontology estimation from dependency-parsed dialogue "
        "corpora"};
    app.set_version_flag("--version", WOAH_VERSION);
    app.set_config("--config", "", "TOML config file (flag names with - "
                                   "replaced by _); flags override it")
        ->envname("WOAH_CONFIG");

    app.add_option("-i,--input", config.inputs,
                   "CoNLL-U input file(s), dialogues marked with '# newdoc "
                   "id = ...'")
        ->required()
        ->take_all();
    app.add_option("--tv", config.thresholds.t_v,
                   "max admitted tf-idf for verbs")
        ->capture_default_str();
    app.add_option("--to", config.thresholds.t_o,
                   "max admitted tf-idf for objects")
        ->capture_default_str();
    app.add_option("--tc", config.thresholds.t_c,
                   "max admitted tf-idf for complements")
        ->capture_default_str();
    app.add_option("--lower-bound,--lower_bound", config.thresholds.lower_bound,
                   "strict lower tf-idf bound (0 removes stop words)")
        ->capture_default_str();
    app.add_option("--log-base,--log_base", config.thresholds.log_base,
                   "logarithm base for idf")
        ->capture_default_str();
    app.add_option("--gv", config.g_v, "number of intent representatives")
        ->capture_default_str();
    app.add_option("--go", config.g_o, "number of entity representatives")
        ->capture_default_str();
    app.add_option("--cv", config.c_v, "members per intent representative")
        ->capture_default_str();
    app.add_option("--co", config.c_o, "members per entity representative")
        ->capture_default_str();
    app.add_option("--max-sentences,--max_sentences", config.max_sentences,
                   "split dialogues into chunks of at most N sentences");
    app.add_option("-o,--out", config.out, "output path")->required();
    app.add_option("--format", config.format,
                   "output format: json, ttl or both")
        ->check(CLI::IsMember({"json", "ttl", "both"}))
        ->capture_default_str();
    app.add_option("--base-iri,--base_iri", config.base_iri,
                   "IRI prefix for Turtle output")
        ->capture_default_str();
    app.add_option("--gold", config.gold_path,
                   "gold-standard JSON; prints an evaluation report to "
                   "stdout");
    app.add_option("--dump-scores,--dump_scores", config.dump_scores,
                   "write tf-idf scores TSV (list, term, aggregate, kept)");
    app.add_option("--dump-gini,--dump_gini", config.dump_gini,
                   "write Gini score TSV (list, label, gini)");
    app.add_option("--dump-matrices,--dump_matrices", config.dump_matrices,
                   "write V/O/I/E matrices and extraction tables into DIR");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion& e) {
        std::cout << app.version() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        config.thresholds.validate();
        if (config.g_v < 1) throw woah::ConfigError("g_v must be >= 1");
        if (config.g_o < 1) throw woah::ConfigError("g_o must be >= 1");
        if (config.c_v < 0) throw woah::ConfigError("c_v must be >= 0");
        if (config.c_o < 0) throw woah::ConfigError("c_o must be >= 0");
        if (config.max_sentences && *config.max_sentences < 1)
            throw woah::ConfigError("max_sentences must be >= 1");
    } catch (const woah::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    return run(config);
}
