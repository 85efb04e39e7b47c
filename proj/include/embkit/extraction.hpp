#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "embkit/dump.hpp"
#include "embkit/embedding.hpp"
#include "embkit/vocab.hpp"

namespace embkit {

// Mean-pool the subwords of each single-word record; the first record of a
// word wins when it appears more than once. Every vocabulary word must be
// covered or MissingWordError lists all absentees.
EmbeddingMatrix extract_decontextualized(const DumpSource& dump, const Vocabulary& vocab);

// Per-word streaming mean state. The mean is updated incrementally with
// compensated summation so a single pass suffices for corpora that do not
// fit in memory.
struct RunningMean {
    std::vector<double> mean;
    std::vector<double> compensation;
    std::uint64_t count = 0;

    explicit RunningMean(std::size_t dim = 0)
        : mean(dim, 0.0), compensation(dim, 0.0) {}
    void update(std::span<const float> x);
};

enum class OccurrenceScope {
    // An occurrence contributes the word's own subword-pooled vector.
    word,
    // An occurrence contributes the mean over every subword vector of the
    // sentence it appears in.
    sentence,
};

struct AggregateOptions {
    // Stop accumulating a word after this many occurrences.
    std::optional<std::uint64_t> cap;
    OccurrenceScope scope = OccurrenceScope::word;
};

struct AggregateResult {
    EmbeddingMatrix matrix;
    // Words the corpus never attested; their rows are zero.
    std::vector<std::string> missing_words;
};

// Mean over a word's corpus occurrences, one pass over the dump.
AggregateResult extract_aggregate(const DumpSource& dump, const Vocabulary& vocab,
                                  const AggregateOptions& options = {});

struct X2StaticConfig {
    std::uint32_t dim = 0;  // 0 means: use the teacher dimension
    std::uint32_t window = 5;
    std::uint32_t negatives = 5;
    std::uint32_t epochs = 5;
    double lr0 = 0.05;
    double neg_exponent = 0.75;
    std::uint32_t min_count = 5;
    std::uint64_t seed = 0;
};

// Learned parameters: one static target vector per participating word and
// a projection from teacher space into the static space.
struct X2StaticModel {
    Eigen::MatrixXd targets;     // V_eff x dim, row per word
    Eigen::MatrixXd projection;  // dim x teacher_dim
};

struct X2OccurrenceGrads {
    double loss = 0.0;
    Eigen::VectorXd d_target;
    std::vector<Eigen::VectorXd> d_negatives;  // parallel to the negative list
    Eigen::MatrixXd d_projection;
};

// Negative-sampling loss of one occurrence given the teacher-space context
// mean. Split out so gradients can be checked against finite differences.
double x2_occurrence_loss(const X2StaticModel& model, const Eigen::VectorXd& context,
                          std::uint32_t target, std::span<const std::uint32_t> negatives);
X2OccurrenceGrads x2_occurrence_backward(const X2StaticModel& model,
                                         const Eigen::VectorXd& context, std::uint32_t target,
                                         std::span<const std::uint32_t> negatives);

struct X2StaticStats {
    std::vector<double> epoch_mean_loss;
    std::uint64_t updates = 0;
    std::size_t participating_words = 0;
};

struct X2StaticResult {
    EmbeddingMatrix matrix;
    // Below min_count or absent entirely; their rows are zero.
    std::vector<std::string> skipped_words;
    X2StaticStats stats;
};

// CBOW-style distillation: for every occurrence of a participating word,
// project the windowed mean of teacher word vectors into the static space
// and take a negative-sampling step on the target table and projection.
// Plain SGD, learning rate linearly decayed to zero over all planned
// updates. Bit-reproducible for a fixed seed.
X2StaticResult train_x2static(const DumpSource& dump, const Vocabulary& vocab,
                              const X2StaticConfig& config);

}  // namespace embkit
