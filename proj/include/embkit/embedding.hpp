#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "embkit/vocab.hpp"

namespace embkit {

// Deterministic synthesis of vectors for out-of-vocabulary words: i.i.d.
// Normal(mean, stddev) samples keyed on (seed, word), so the same word
// always resolves to the same vector within and across runs.
struct OovPolicy {
    double mean = 0.0;
    double stddev = 0.6;
    std::uint64_t seed = 0;
};

// Dense |V| x dim table of 32-bit floats bound to a Vocabulary. Immutable
// once built; safe for concurrent reads.
class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;
    EmbeddingMatrix(Vocabulary vocab, std::size_t dim);

    std::size_t rows() const { return vocab_.size(); }
    std::size_t dim() const { return dim_; }
    const Vocabulary& vocab() const { return vocab_; }
    bool normalized() const { return normalized_; }
    void set_normalized(bool v) { normalized_ = v; }

    std::span<const float> row(std::size_t i) const {
        return {values_.data() + i * dim_, dim_};
    }
    std::span<float> row_mut(std::size_t i) {
        return {values_.data() + i * dim_, dim_};
    }
    std::optional<std::span<const float>> row_for(std::string_view word) const {
        auto idx = vocab_.find(word);
        if (!idx) return std::nullopt;
        return row(*idx);
    }

    const std::vector<float>& values() const { return values_; }

private:
    Vocabulary vocab_;
    std::size_t dim_ = 0;
    std::vector<float> values_;
    bool normalized_ = false;
};

struct LoadOptions {
    // Apply Unicode NFC normalization to words at load time. Off by
    // default: matching is byte-wise.
    bool nfc = false;
};

// word2vec text format: first line "<count> <dim>", then one
// "<word> <v_1> ... <v_dim>" line per word, single ASCII spaces, UTF-8,
// LF endings, no trailing spaces. Floats are serialized in the shortest
// form that parses back to the identical value, so load/save round-trips
// are value-exact.
EmbeddingMatrix load_word2vec_text(const std::string& path, const LoadOptions& options = {});
void save_word2vec_text(const EmbeddingMatrix& m, const std::string& path);

struct NormalizeResult {
    EmbeddingMatrix matrix;
    // Zero rows pass through unchanged and are tallied here; they are a
    // warning, not an error.
    std::size_t zero_rows = 0;
};

// Divide every nonzero row by its L2 norm.
NormalizeResult normalize_rows(const EmbeddingMatrix& m);

// Matrix over exactly `vocab` with rows copied from `m`, vocab order
// preserved. Throws MissingWordError naming the first absent word.
EmbeddingMatrix restrict_to(const EmbeddingMatrix& m, const Vocabulary& vocab);

// Stored row for in-vocabulary words, synthesized OOV vector otherwise.
std::vector<float> lookup_or_oov(const EmbeddingMatrix& m, std::string_view word,
                                 const OovPolicy& policy);

// Unicode NFC (ICU-backed); throws ArgumentError on invalid UTF-8.
std::string nfc_normalize(std::string_view utf8);

// Default-locale Unicode lowercasing (ICU-backed).
std::string utf8_lowercase(std::string_view utf8);

}  // namespace embkit
