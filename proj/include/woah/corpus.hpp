#ifndef WOAH_CORPUS_HPP
#define WOAH_CORPUS_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "woah/errors.hpp"

namespace woah {

// One dependency-parsed token. `head` is the 1-based index of the governing
// token within its sentence, 0 for the root.
struct Token {
    int index = 0;
    std::string form;
    std::string lemma;
    std::string upos;
    int head = 0;
    std::string deprel;
};

struct Sentence {
    std::vector<Token> tokens;
};

struct Dialogue {
    std::string id;
    std::vector<Sentence> sentences;
};

struct Corpus {
    std::vector<Dialogue> dialogues;

    std::size_t sentence_count() const {
        std::size_t n = 0;
        for (const auto& d : dialogues) n += d.sentences.size();
        return n;
    }
};

namespace detail {

// Emoticon sequences stripped by normalize_text. Fixed list, kept in one
// place; docs/normalization.md mirrors it. No entry may contain two
// identical adjacent characters (the punctuation-run collapse would
// otherwise be able to re-create an entry it runs after).
inline const std::array<std::string_view, 26>& emoticons() {
    static const std::array<std::string_view, 26> list = {
        ":-)", ":-(", ":-D", ":-P", ":-p", ":-/", ":-\\", ";-)", ";-(",
        ":')", ":'(", ":)",  ":(",  ":D",  ":P",  ":p",   ":/",  ":\\",
        ":|",  ";)",  ";(",  "=)",  "=(",  "<3",  "xD",   "XD",
    };
    return list;
}

inline bool is_ascii_punct(unsigned char c) {
    return std::ispunct(c) != 0;
}

inline bool is_space_like(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
}

// URL = scheme "://" followed by non-whitespace, or a word starting "www."
inline std::size_t match_url(std::string_view s, std::size_t i) {
    auto is_scheme_char = [](unsigned char c) {
        return std::isalnum(c) || c == '+' || c == '.' || c == '-';
    };
    if (std::isalpha(static_cast<unsigned char>(s[i]))) {
        std::size_t j = i + 1;
        while (j < s.size() && is_scheme_char(static_cast<unsigned char>(s[j])))
            ++j;
        if (s.compare(j, 3, "://") == 0 && j + 3 < s.size() &&
            !is_space_like(static_cast<unsigned char>(s[j + 3]))) {
            std::size_t k = j + 3;
            while (k < s.size() && !is_space_like(static_cast<unsigned char>(s[k])))
                ++k;
            return k - i;
        }
    }
    if (s.compare(i, 4, "www.") == 0 && i + 4 < s.size() &&
        !is_space_like(static_cast<unsigned char>(s[i + 4]))) {
        std::size_t k = i + 4;
        while (k < s.size() && !is_space_like(static_cast<unsigned char>(s[k])))
            ++k;
        return k - i;
    }
    return 0;
}

// Email = local part, '@', dotted domain with an alphabetic final label of
// length >= 2.
inline std::size_t match_email(std::string_view s, std::size_t i) {
    auto is_local = [](unsigned char c) {
        return std::isalnum(c) || c == '.' || c == '_' || c == '%' ||
               c == '+' || c == '-';
    };
    auto is_domain = [](unsigned char c) {
        return std::isalnum(c) || c == '.' || c == '-';
    };
    if (!is_local(static_cast<unsigned char>(s[i]))) return 0;
    std::size_t at = i;
    while (at < s.size() && is_local(static_cast<unsigned char>(s[at]))) ++at;
    if (at == i || at >= s.size() || s[at] != '@') return 0;
    std::size_t j = at + 1;
    std::size_t last_dot = std::string_view::npos;
    while (j < s.size() && is_domain(static_cast<unsigned char>(s[j]))) {
        if (s[j] == '.') last_dot = j;
        ++j;
    }
    if (last_dot == std::string_view::npos || j - last_dot < 3) return 0;
    for (std::size_t k = last_dot + 1; k < j; ++k)
        if (!std::isalpha(static_cast<unsigned char>(s[k]))) return 0;
    return j - i;
}

inline std::string normalize_pass(std::string_view in) {
    std::string s;
    s.reserve(in.size());

    // Replace URLs and emails first: the later punctuation collapse would
    // mangle "://" before it can be recognized.
    for (std::size_t i = 0; i < in.size();) {
        bool boundary =
            i == 0 || !std::isalnum(static_cast<unsigned char>(in[i - 1]));
        std::size_t n;
        if (boundary && (n = match_url(in, i)) > 0) {
            s += "<URL>";
            i += n;
        } else if (boundary && (n = match_email(in, i)) > 0) {
            s += "<EMAIL>";
            i += n;
        } else {
            s += in[i++];
        }
    }

    std::string t;
    t.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        std::size_t matched = 0;
        for (std::string_view emo : emoticons()) {
            if (s.compare(i, emo.size(), emo) == 0 && emo.size() > matched)
                matched = emo.size();
        }
        if (matched > 0)
            i += matched;
        else
            t += s[i++];
    }

    // Collapse runs of the same punctuation character ("!!!" -> "!").
    std::string u;
    u.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!u.empty() && u.back() == t[i] &&
            is_ascii_punct(static_cast<unsigned char>(t[i])))
            continue;
        u += t[i];
    }

    // Drop control characters, collapse whitespace, trim.
    std::string out;
    out.reserve(u.size());
    bool pending_space = false;
    for (unsigned char c : u) {
        if (is_space_like(c)) {
            pending_space = true;
            continue;
        }
        if (c < 0x20 || c == 0x7f) continue;
        if (pending_space && !out.empty()) out += ' ';
        pending_space = false;
        out += static_cast<char>(c);
    }
    return out;
}

}  // namespace detail

// Cleans one chunk of raw dialogue text before it is handed to an external
// parser. Applies, in order: URL -> <URL>, email -> <EMAIL>, emoticon
// removal, same-punctuation-run collapse, control-character removal,
// whitespace collapse and trim. The passes repeat until the text is stable,
// so the function is idempotent.
inline std::string normalize_text(std::string_view raw) {
    std::string cur(raw);
    for (int round = 0; round < 8; ++round) {
        std::string next = detail::normalize_pass(cur);
        if (next == cur) break;
        cur = std::move(next);
    }
    return cur;
}

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return out;
}

inline bool parse_int(const std::string& s, int& out) {
    if (s.empty()) return false;
    int value = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
        if (value < 0) return false;
    }
    out = value;
    return true;
}

inline std::optional<std::string> comment_value(const std::string& line,
                                                std::string_view key) {
    // "# newdoc id = X" with flexible interior spacing.
    std::size_t i = 1;  // past '#'
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (line.compare(i, key.size(), key) != 0) return std::nullopt;
    i += key.size();
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size() || line[i] != '=') return std::nullopt;
    ++i;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::string value = line.substr(i);
    while (!value.empty() && (value.back() == ' ' || value.back() == '\t'))
        value.pop_back();
    return value;
}

}  // namespace detail

// Reads CoNLL-U text into a Corpus. Recognized columns are ID, FORM, LEMMA,
// UPOS, HEAD and DEPREL; XPOS, FEATS, DEPS and MISC are ignored. Multiword
// token ranges ("2-4") are skipped. A comment "# newdoc id = X" (or
// "# dialogue_id = X") opens a new dialogue; a file without markers becomes
// the single dialogue "doc0".
inline Corpus parse_conllu(std::istream& input) {
    Corpus corpus;
    std::vector<Sentence> pending;
    Sentence current;
    std::string dialogue_id = "doc0";
    bool saw_marker = false;
    int sentence_start_line = 0;
    int line_no = 0;
    std::string line;

    auto flush_dialogue = [&]() {
        if (!pending.empty()) {
            corpus.dialogues.push_back({dialogue_id, std::move(pending)});
            pending.clear();
        }
    };

    auto finish_sentence = [&]() {
        if (current.tokens.empty()) return;
        int roots = 0;
        for (const Token& tok : current.tokens) {
            if (tok.head == 0) ++roots;
            if (tok.head > static_cast<int>(current.tokens.size()))
                throw ParseError("sentence " + std::to_string(pending.size() + 1) +
                                 " of dialogue \"" + dialogue_id +
                                 "\" (starting at line " +
                                 std::to_string(sentence_start_line) +
                                 "): head " + std::to_string(tok.head) +
                                 " exceeds sentence length " +
                                 std::to_string(current.tokens.size()));
        }
        if (roots != 1)
            throw ParseError("sentence " + std::to_string(pending.size() + 1) +
                             " of dialogue \"" + dialogue_id +
                             "\" (starting at line " +
                             std::to_string(sentence_start_line) +
                             "): expected exactly one root, found " +
                             std::to_string(roots));
        pending.push_back(std::move(current));
        current = Sentence{};
    };

    while (std::getline(input, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        if (line.empty()) {
            finish_sentence();
            continue;
        }
        if (line[0] == '#') {
            auto id = detail::comment_value(line, "newdoc id");
            if (!id) id = detail::comment_value(line, "dialogue_id");
            if (id) {
                finish_sentence();
                flush_dialogue();
                dialogue_id = id->empty() ? "doc" + std::to_string(
                                                corpus.dialogues.size())
                                          : *id;
                saw_marker = true;
            }
            continue;
        }

        auto fields = detail::split_tabs(line);
        if (fields.size() != 10)
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected 10 tab-separated columns, got " +
                             std::to_string(fields.size()));

        if (fields[0].find('-') != std::string::npos) continue;  // MWT range

        Token tok;
        if (!detail::parse_int(fields[0], tok.index) || tok.index < 1)
            throw ParseError("line " + std::to_string(line_no) +
                             ": token id \"" + fields[0] +
                             "\" is not a positive integer");
        if (!detail::parse_int(fields[6], tok.head))
            throw ParseError("line " + std::to_string(line_no) + ": head \"" +
                             fields[6] + "\" is not a non-negative integer");
        if (tok.head == tok.index)
            throw ParseError("line " + std::to_string(line_no) +
                             ": token is its own head");
        if (fields[1].empty() || fields[2].empty())
            throw ParseError("line " + std::to_string(line_no) +
                             ": empty FORM or LEMMA");

        if (current.tokens.empty()) sentence_start_line = line_no;
        int expected = static_cast<int>(current.tokens.size()) + 1;
        if (tok.index != expected)
            throw ParseError("line " + std::to_string(line_no) +
                             ": token id " + std::to_string(tok.index) +
                             " out of sequence (expected " +
                             std::to_string(expected) + ")");

        tok.form = fields[1];
        tok.lemma = fields[2];
        tok.upos = fields[3];
        tok.deprel = fields[7];
        current.tokens.push_back(std::move(tok));
    }
    finish_sentence();
    flush_dialogue();
    (void)saw_marker;
    return corpus;
}

inline Corpus parse_conllu(const std::string& text) {
    std::istringstream in(text);
    return parse_conllu(in);
}

inline Corpus load_conllu_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open input file: " + path);
    return parse_conllu(in);
}

// Re-serializes the six mapped columns; the four ignored columns are
// written as "_".
inline void write_conllu(const Corpus& corpus, std::ostream& out) {
    for (const Dialogue& d : corpus.dialogues) {
        out << "# newdoc id = " << d.id << '\n';
        for (const Sentence& s : d.sentences) {
            for (const Token& t : s.tokens) {
                out << t.index << '\t' << t.form << '\t' << t.lemma << '\t'
                    << t.upos << '\t' << '_' << '\t' << '_' << '\t' << t.head
                    << '\t' << t.deprel << '\t' << '_' << '\t' << '_' << '\n';
            }
            out << '\n';
        }
    }
}

inline std::string write_conllu(const Corpus& corpus) {
    std::ostringstream out;
    write_conllu(corpus, out);
    return out.str();
}

// Splits every dialogue into consecutive chunks of at most `max_sentences`
// sentences. Chunk ids get "-0", "-1", ... suffixes; dialogues that fit in
// one chunk keep their id.
inline Corpus segment_dialogues(const Corpus& corpus,
                                std::optional<int> max_sentences) {
    if (!max_sentences) return corpus;
    if (*max_sentences < 1)
        throw ConfigError("max_sentences must be >= 1");
    Corpus out;
    for (const Dialogue& d : corpus.dialogues) {
        std::size_t chunk = static_cast<std::size_t>(*max_sentences);
        if (d.sentences.size() <= chunk) {
            out.dialogues.push_back(d);
            continue;
        }
        std::size_t part = 0;
        for (std::size_t i = 0; i < d.sentences.size(); i += chunk, ++part) {
            Dialogue piece;
            piece.id = d.id + "-" + std::to_string(part);
            std::size_t end = std::min(i + chunk, d.sentences.size());
            piece.sentences.assign(d.sentences.begin() + i,
                                   d.sentences.begin() + end);
            out.dialogues.push_back(std::move(piece));
        }
    }
    return out;
}

// Concatenates corpora (one per input file). Colliding dialogue ids get a
// "#2", "#3", ... suffix so ids stay unique.
inline Corpus merge_corpora(const std::vector<Corpus>& parts) {
    Corpus out;
    std::vector<std::string> seen;
    auto unique_id = [&](const std::string& id) {
        std::string candidate = id;
        int n = 2;
        while (std::find(seen.begin(), seen.end(), candidate) != seen.end())
            candidate = id + "#" + std::to_string(n++);
        seen.push_back(candidate);
        return candidate;
    };
    for (const Corpus& part : parts) {
        for (const Dialogue& d : part.dialogues) {
            Dialogue copy = d;
            copy.id = unique_id(d.id);
            out.dialogues.push_back(std::move(copy));
        }
    }
    return out;
}

}  // namespace woah

#endif  // WOAH_CORPUS_HPP
