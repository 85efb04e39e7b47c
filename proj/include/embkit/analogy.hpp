#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "embkit/embedding.hpp"
#include "embkit/vocab.hpp"

namespace embkit {

// a : b :: c : d, with d the gold answer.
struct AnalogyQuestion {
    std::string a, b, c, d;
};

struct AnalogyCategory {
    std::string name;
    std::vector<AnalogyQuestion> questions;
    // Count before any vocabulary restriction (provenance for the
    // filtering report; equals questions.size() on a freshly parsed set).
    std::size_t original_count = 0;
};

struct AnalogyDataset {
    std::vector<AnalogyCategory> categories;
    std::size_t total_questions() const;
};

// Mikolov-style file: ": <category>" headers, then one four-word question
// per line. Throws FormatError with the line number on anything else.
AnalogyDataset parse_analogy_file(const std::string& path);

// Keep a question iff all four words are in the vocabulary. Empty
// categories are retained with zero questions; original counts carry over.
AnalogyDataset filter_to_vocab(const AnalogyDataset& ds, const Vocabulary& vocab);

struct FilterRow {
    std::string name;
    std::size_t original = 0;
    std::size_t restricted = 0;
    double ratio = 0.0;  // restricted / original, 0 when original is 0
};
std::vector<FilterRow> filter_report(const AnalogyDataset& ds);

enum class AnalogyMethod {
    // Candidate maximizing cosine(v, b - a + c); the standard offset method.
    cos_add,
    // Levy & Goldberg multiplicative variant over shifted cosines.
    cos_mul,
};

struct SolveOptions {
    std::uint32_t k = 10;
    AnalogyMethod method = AnalogyMethod::cos_add;
    // Query words never appear among the candidates unless disabled.
    bool exclude_query_words = true;
};

struct ScoredWord {
    std::string word;
    float score = 0.0f;
};

// Ranked top-k answers for a : b :: c : ?. Requires a normalized matrix.
// Scores accumulate in 32-bit floats (matching storage precision); ties
// break by ascending vocabulary index. Returns exactly
// min(k, |V| - |excluded|) entries.
std::vector<ScoredWord> solve_analogy(const EmbeddingMatrix& m, const std::string& a,
                                      const std::string& b, const std::string& c,
                                      const SolveOptions& options = {});

struct CategoryResult {
    std::string name;
    std::size_t n = 0;
    double accuracy = 0.0;
    double mrr = 0.0;
};

struct AnalogyResult {
    std::vector<CategoryResult> per_category;
    double overall_accuracy = 0.0;
    // Question-weighted aggregate across categories.
    double overall_mrr = 0.0;
    // Unweighted mean over categories (empty categories count as zero).
    double average_mrr = 0.0;
    std::uint32_t k = 10;
};

// Per question: reciprocal rank of d in the top-k answer list, zero when
// absent; accuracy counts rank-1 hits. All question words must be in the
// vocabulary (filter first); otherwise MissingWordError identifies the
// question. `threads` > 1 parallelizes over questions with a fixed-order
// reduction, so results are bit-identical to a serial run.
AnalogyResult evaluate(const EmbeddingMatrix& m, const AnalogyDataset& ds,
                       const SolveOptions& options = {}, unsigned threads = 1);

std::string analogy_result_csv(const AnalogyResult& r);
std::string analogy_result_json(const AnalogyResult& r);
std::string filter_report_csv(const std::vector<FilterRow>& rows);

}  // namespace embkit
