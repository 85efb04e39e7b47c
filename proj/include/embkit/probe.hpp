#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "embkit/embedding.hpp"
#include "embkit/rng.hpp"

namespace embkit {

struct TaggedSentence {
    std::vector<std::string> words;
    std::vector<std::uint32_t> tags;  // indices into the corpus tagset
};

struct TaggedCorpus {
    std::vector<TaggedSentence> sentences;
    std::vector<std::string> tagset;  // first-occurrence order

    std::size_t token_count() const;
    // Same sentences re-indexed against another tagset; throws DataError
    // on a tag the target tagset lacks.
    TaggedCorpus remapped_to(const std::vector<std::string>& target_tagset) const;
};

// Tab-separated columns, blank line between sentences, '#' comment lines
// skipped. Throws FormatError with the line number when a row lacks the
// requested columns.
TaggedCorpus load_conll(const std::string& path, std::size_t word_column,
                        std::size_t tag_column);

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct ProbeConfig {
    std::uint32_t hidden_size = 64;  // per direction
    double dropout_rate = 0.5;
    std::uint32_t epochs = 5;
    std::uint32_t batch_size = 32;
    AdamConfig adam;
    OovPolicy oov;
    std::uint64_t seed = 0;
    // Longer sentences are split into segments, never truncated.
    std::uint32_t max_sentence_len = 512;
};

// Single-layer bidirectional LSTM tagger over frozen embeddings. All
// arithmetic is 64-bit. Gate rows are stacked [input; forget; candidate;
// output], each `hidden` tall; biases are stored as single-column
// matrices so every parameter tensor is an Eigen::MatrixXd.
struct ProbeModel {
    struct Direction {
        Eigen::MatrixXd w_in;   // 4H x D
        Eigen::MatrixXd w_rec;  // 4H x H
        Eigen::MatrixXd bias;   // 4H x 1
    };

    std::size_t input_dim = 0;
    std::size_t hidden = 0;
    std::size_t tags = 0;
    Direction forward_cell;
    Direction backward_cell;
    Eigen::MatrixXd w_out;  // K x 2H
    Eigen::MatrixXd b_out;  // K x 1

    // Weights ~ Uniform(-1/sqrt(hidden), +1/sqrt(hidden)); forget-gate
    // biases 1, all other biases 0.
    static ProbeModel init(std::size_t input_dim, std::size_t hidden, std::size_t tags,
                           Rng& rng);

    static constexpr std::size_t kParamCount = 8;
    std::array<Eigen::MatrixXd*, kParamCount> parameters();
    std::array<const Eigen::MatrixXd*, kParamCount> parameters() const;
    static std::array<const char*, kParamCount> parameter_names();
};

struct ProbeGrads {
    std::array<Eigen::MatrixXd, ProbeModel::kParamCount> tensors;
    static ProbeGrads zeros_like(const ProbeModel& model);
};

// Sentence ready for the model: one embedding row per token. A tag of -1
// marks padding; padding is trailing-only and contributes neither loss
// nor gradient (padded positions are never fed through the recurrence,
// so appending padding leaves results bit-identical).
struct EncodedSentence {
    Eigen::MatrixXd x;               // T x D, rows are timesteps
    std::vector<std::int32_t> tags;  // gold tag per row, -1 = padding
};

// Per-timestep tag distribution (rows sum to 1). `dropout_mask`, when
// given, is the 2H inverted-dropout mask applied to the concatenated
// bidirectional state at every timestep.
Eigen::MatrixXd probe_forward(const ProbeModel& model, const Eigen::MatrixXd& sentence,
                              const Eigen::VectorXd* dropout_mask = nullptr);

// Mean over non-padding tokens of -log p(gold tag), with gradients for
// every parameter tensor via backpropagation through time. When
// `dropout_rng` is non-null one 2H mask is sampled per sentence from it
// (inverted dropout at `dropout_rate`). Throws ArgumentError when the
// batch holds no real token, DataError on a tag outside the model.
double probe_loss_and_grads(const ProbeModel& model,
                            std::span<const EncodedSentence* const> batch,
                            double dropout_rate, Rng* dropout_rng, ProbeGrads& grads);

struct AdamState {
    std::array<Eigen::MatrixXd, ProbeModel::kParamCount> m;
    std::array<Eigen::MatrixXd, ProbeModel::kParamCount> v;
    std::uint64_t t = 0;

    static AdamState zeros_like(const ProbeModel& model);
};

// One bias-corrected Adam update; throws DivergenceError on a non-finite
// gradient.
void adam_step(ProbeModel& model, const ProbeGrads& grads, AdamState& state,
               const AdamConfig& config);

struct EpochMetrics {
    double train_loss = 0.0;
    std::optional<double> dev_accuracy;
};

struct TrainResult {
    ProbeModel model;                        // final-epoch weights
    std::optional<ProbeModel> best_dev_model;  // best dev-accuracy snapshot
    std::vector<EpochMetrics> epochs;
};

// Train on frozen embeddings. OOV vectors are resolved once per unique
// word and reused for the whole run. Mini-batches follow a seeded
// shuffle per epoch; the run is bit-reproducible for a fixed seed.
TrainResult train_probe(const TaggedCorpus& corpus, const EmbeddingMatrix& embeddings,
                        const ProbeConfig& config, const TaggedCorpus* dev = nullptr);

// Token-level accuracy with dropout disabled; every token counts,
// including any 'O' tags.
double evaluate_accuracy(const ProbeModel& model, const TaggedCorpus& corpus,
                         const EmbeddingMatrix& embeddings, const OovPolicy& oov,
                         std::uint32_t max_sentence_len = 512);

struct SweepCell {
    std::uint32_t hidden = 0;
    double test_accuracy = 0.0;           // final-epoch weights
    double best_dev_test_accuracy = 0.0;  // best-dev snapshot
    std::vector<EpochMetrics> epochs;
};

struct SweepResult {
    std::vector<SweepCell> cells;  // input order preserved
};

// One probe per hidden size, otherwise identical configuration; each
// cell's random streams derive from (seed, hidden_size) so cells are
// independent and reproducible in isolation.
SweepResult sweep_probe(const TaggedCorpus& train, const TaggedCorpus& dev,
                        const TaggedCorpus& test, const EmbeddingMatrix& embeddings,
                        std::span<const std::uint32_t> hidden_sizes, const ProbeConfig& config);

}  // namespace embkit
