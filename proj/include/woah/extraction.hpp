#ifndef WOAH_EXTRACTION_HPP
#define WOAH_EXTRACTION_HPP

#include <cctype>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "woah/corpus.hpp"
#include "woah/errors.hpp"

namespace woah {

// One extracted term. `tag` is the dialogue id for verbs, the governing
// verb lemma for objects and the governing object lemma for complements.
struct Occurrence {
    std::string term;
    std::string tag;

    friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

// Insertion-ordered mapping term -> associated term list. Key order is the
// order of first insertion, which later fixes embedding row order.
class AssocTable {
public:
    void append(const std::string& key, const std::string& value) {
        auto it = index_.find(key);
        if (it == index_.end()) {
            index_.emplace(key, items_.size());
            items_.push_back({key, {value}});
        } else {
            items_[it->second].second.push_back(value);
        }
    }

    bool contains(const std::string& key) const {
        return index_.count(key) > 0;
    }

    const std::vector<std::string>& at(const std::string& key) const {
        auto it = index_.find(key);
        if (it == index_.end())
            throw Error("association table has no key \"" + key + "\"");
        return items_[it->second].second;
    }

    std::vector<std::string> keys() const {
        std::vector<std::string> out;
        out.reserve(items_.size());
        for (const auto& [key, values] : items_) out.push_back(key);
        return out;
    }

    const std::vector<std::pair<std::string, std::vector<std::string>>>&
    items() const {
        return items_;
    }

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

    std::size_t total_values() const {
        std::size_t n = 0;
        for (const auto& [key, values] : items_) n += values.size();
        return n;
    }

    // Rebuilds the table keeping only keys accepted by `pred`, in order.
    template <typename Pred>
    void retain_keys(Pred pred) {
        std::vector<std::pair<std::string, std::vector<std::string>>> kept;
        for (auto& item : items_)
            if (pred(item.first)) kept.push_back(std::move(item));
        items_ = std::move(kept);
        reindex();
    }

    // Drops values rejected by `pred` from every list; keys are untouched.
    template <typename Pred>
    void retain_values(Pred pred) {
        for (auto& [key, values] : items_) {
            std::vector<std::string> kept;
            for (auto& v : values)
                if (pred(v)) kept.push_back(std::move(v));
            values = std::move(kept);
        }
    }

    // Applies `f` to every key and value, merging keys that collide after
    // the mapping. Lists of merged keys are concatenated in key order.
    template <typename F>
    void transform_terms(F f) {
        std::vector<std::pair<std::string, std::vector<std::string>>> mapped;
        std::unordered_map<std::string, std::size_t> where;
        for (auto& [key, values] : items_) {
            std::string new_key = f(key);
            auto it = where.find(new_key);
            std::size_t slot;
            if (it == where.end()) {
                slot = mapped.size();
                where.emplace(new_key, slot);
                mapped.push_back({new_key, {}});
            } else {
                slot = it->second;
            }
            for (auto& v : values) mapped[slot].second.push_back(f(v));
        }
        items_ = std::move(mapped);
        reindex();
    }

    void dedupe_values() {
        for (auto& [key, values] : items_) {
            std::vector<std::string> kept;
            std::unordered_set<std::string> seen;
            for (auto& v : values)
                if (seen.insert(v).second) kept.push_back(std::move(v));
            values = std::move(kept);
        }
    }

    friend bool operator==(const AssocTable& a, const AssocTable& b) {
        return a.items_ == b.items_;
    }

private:
    void reindex() {
        index_.clear();
        for (std::size_t i = 0; i < items_.size(); ++i)
            index_.emplace(items_[i].first, i);
    }

    std::vector<std::pair<std::string, std::vector<std::string>>> items_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Occurrence lists plus the verb->objects and object->complements
// association tables distilled from the dependency trees. Lists keep
// multiplicity until the tf-idf filter has run.
struct ExtractionTables {
    std::vector<Occurrence> verbs;
    std::vector<Occurrence> objects;
    std::vector<Occurrence> complements;
    AssocTable verb_objects;
    AssocTable object_complements;
};

// Dependency relations and POS tags that define what counts as a verb,
// object or complement. Defaults follow Universal Dependencies.
struct RelationProfile {
    std::unordered_set<std::string> verb_deprels = {"root", "ccomp", "xcomp",
                                                    "advcl", "conj"};
    std::unordered_set<std::string> object_deprels = {"obj", "dobj", "iobj"};
    std::unordered_set<std::string> complement_deprels = {"nmod", "obl",
                                                          "compound"};
    std::unordered_set<std::string> object_upos = {"NOUN", "PROPN"};
    // Complements must be common nouns.
    std::unordered_set<std::string> complement_upos = {"NOUN"};
};

// Walks every sentence and collects:
//   - verbs: VERB tokens whose deprel marks the root or a clause head,
//   - objects: NOUN/PROPN tokens with an object deprel headed by one of
//     those verbs,
//   - complements: common nouns with a modifier deprel headed by a selected
//     verb or object.
// A complement headed by an object pairs with that object; one headed by a
// verb pairs with the verb's first object in the sentence (and is dropped
// when the verb has none). Sentences without a qualifying verb contribute
// nothing.
inline ExtractionTables extract_tables(const Corpus& corpus,
                                       const RelationProfile& profile = {}) {
    ExtractionTables tables;
    for (const Dialogue& dialogue : corpus.dialogues) {
        for (const Sentence& sentence : dialogue.sentences) {
            const auto& toks = sentence.tokens;

            std::unordered_map<int, const Token*> verb_at;
            for (const Token& t : toks)
                if (t.upos == "VERB" && profile.verb_deprels.count(t.deprel))
                    verb_at.emplace(t.index, &t);
            if (verb_at.empty()) continue;

            std::unordered_map<int, const Token*> object_at;
            std::unordered_map<int, const Token*> first_object_of_verb;
            for (const Token& t : toks) {
                if (!profile.object_deprels.count(t.deprel)) continue;
                if (!profile.object_upos.count(t.upos)) continue;
                auto v = verb_at.find(t.head);
                if (v == verb_at.end()) continue;
                object_at.emplace(t.index, &t);
                first_object_of_verb.emplace(t.head, &t);
            }

            for (const Token& t : toks)
                if (verb_at.count(t.index))
                    tables.verbs.push_back({t.lemma, dialogue.id});

            for (const Token& t : toks) {
                auto o = object_at.find(t.index);
                if (o == object_at.end()) continue;
                const std::string& verb = verb_at.at(t.head)->lemma;
                tables.objects.push_back({t.lemma, verb});
                tables.verb_objects.append(verb, t.lemma);
            }

            for (const Token& t : toks) {
                if (!profile.complement_upos.count(t.upos)) continue;
                if (!profile.complement_deprels.count(t.deprel)) continue;
                const Token* governor = nullptr;
                if (auto o = object_at.find(t.head); o != object_at.end()) {
                    governor = o->second;
                } else if (verb_at.count(t.head)) {
                    auto fo = first_object_of_verb.find(t.head);
                    if (fo != first_object_of_verb.end()) governor = fo->second;
                }
                if (!governor) continue;
                tables.complements.push_back({t.lemma, governor->lemma});
                tables.object_complements.append(governor->lemma, t.lemma);
            }
        }
    }
    return tables;
}

namespace detail {

inline std::string ascii_lower(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace detail

// Extraction already reads the LEMMA column, so this pass enforces simple
// ASCII lowercasing and merges entries that collide after it. Occurrence
// tags that reference other terms (verb tags on objects, object tags on
// complements) are lowered consistently; dialogue-id tags are left alone.
inline ExtractionTables lemmatize_tables(const ExtractionTables& tables) {
    ExtractionTables out = tables;
    for (Occurrence& o : out.verbs) o.term = detail::ascii_lower(o.term);
    for (Occurrence& o : out.objects) {
        o.term = detail::ascii_lower(o.term);
        o.tag = detail::ascii_lower(o.tag);
    }
    for (Occurrence& o : out.complements) {
        o.term = detail::ascii_lower(o.term);
        o.tag = detail::ascii_lower(o.tag);
    }
    out.verb_objects.transform_terms(detail::ascii_lower);
    out.object_complements.transform_terms(detail::ascii_lower);
    return out;
}

// Debug dump, one row per occurrence: kind, term, governor, dialogue_id.
inline void write_tables_tsv(const ExtractionTables& tables,
                             std::ostream& out) {
    out << "kind\tterm\tgovernor\tdialogue_id\n";
    for (const Occurrence& o : tables.verbs)
        out << "verb\t" << o.term << "\t_\t" << o.tag << '\n';
    for (const Occurrence& o : tables.objects)
        out << "object\t" << o.term << '\t' << o.tag << "\t_\n";
    for (const Occurrence& o : tables.complements)
        out << "complement\t" << o.term << '\t' << o.tag << "\t_\n";
}

}  // namespace woah

#endif  // WOAH_EXTRACTION_HPP
