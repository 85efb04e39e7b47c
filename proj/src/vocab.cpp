#include "embkit/vocab.hpp"

#include <cctype>
#include <fstream>

#include "embkit/error.hpp"

namespace embkit {

Vocabulary Vocabulary::from_words(std::vector<std::string> words) {
    Vocabulary v;
    for (auto& w : words) {
        if (v.contains(w)) {
            throw DuplicateWordError("duplicate word '" + w + "'");
        }
        v.add(std::move(w));
    }
    return v;
}

bool Vocabulary::add(std::string word) {
    auto [it, inserted] = index_.try_emplace(std::move(word), words_.size());
    if (inserted) words_.push_back(it->first);
    return inserted;
}

namespace {

bool is_multiword_or_punct(std::string_view w) {
    if (w.find('_') != std::string_view::npos) return true;
    bool all_punct = !w.empty();
    for (unsigned char c : w) {
        if (c >= 0x80 || !std::ispunct(c)) {
            all_punct = false;
            break;
        }
    }
    return all_punct;
}

}  // namespace

Vocabulary intersect_vocabularies(const std::vector<const Vocabulary*>& vocabularies,
                                  const IntersectOptions& options) {
    if (vocabularies.empty()) {
        throw ArgumentError("intersect_vocabularies needs at least one vocabulary");
    }
    Vocabulary out;
    const Vocabulary& first = *vocabularies.front();
    for (const std::string& w : first.words()) {
        if (options.drop_multiword_and_punct && is_multiword_or_punct(w)) continue;
        bool everywhere = true;
        for (std::size_t i = 1; i < vocabularies.size(); ++i) {
            if (!vocabularies[i]->contains(w)) {
                everywhere = false;
                break;
            }
        }
        if (everywhere) out.add(w);
    }
    return out;
}

Vocabulary load_vocab_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open vocabulary file '" + path + "'");
    Vocabulary v;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!v.add(line)) {
            throw DuplicateWordError("duplicate word '" + line + "' at line " +
                                     std::to_string(line_no) + " of '" + path + "'");
        }
    }
    return v;
}

void save_vocab_file(const Vocabulary& vocab, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write vocabulary file '" + path + "'");
    for (const std::string& w : vocab.words()) {
        out << w << '\n';
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace embkit
