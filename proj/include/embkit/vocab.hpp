#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace embkit {

// Ordered set of word strings with O(1) index lookup. Iteration order is
// insertion order and never changes after construction. Matching is exact
// byte-wise UTF-8.
class Vocabulary {
public:
    Vocabulary() = default;

    // Throws DuplicateWordError naming the first repeated word.
    static Vocabulary from_words(std::vector<std::string> words);

    // Returns false (and leaves the vocabulary unchanged) if already present.
    bool add(std::string word);

    std::size_t size() const { return words_.size(); }
    bool empty() const { return words_.empty(); }
    const std::string& word(std::size_t i) const { return words_[i]; }
    const std::vector<std::string>& words() const { return words_; }

    std::optional<std::size_t> find(std::string_view w) const {
        auto it = index_.find(w);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    bool contains(std::string_view w) const { return index_.contains(w); }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const {
            return std::hash<std::string_view>{}(s);
        }
    };

    std::vector<std::string> words_;
    std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

struct IntersectOptions {
    // Pre-filter applied to every input before intersection: drops tokens
    // that join multiple words with '_' and tokens made only of ASCII
    // punctuation. Off by default.
    bool drop_multiword_and_punct = false;
};

// Words present in every input, ordered by their position in the first.
// Throws ArgumentError on an empty input list.
Vocabulary intersect_vocabularies(const std::vector<const Vocabulary*>& vocabularies,
                                  const IntersectOptions& options = {});

// One word per line, UTF-8, LF endings.
Vocabulary load_vocab_file(const std::string& path);
void save_vocab_file(const Vocabulary& vocab, const std::string& path);

}  // namespace embkit
