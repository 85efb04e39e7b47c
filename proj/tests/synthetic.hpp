#pragma once

// Synthetic fixtures shared by the unit suites, the acceptance suite, and
// the calibration runner. Thresholds asserted against these fixtures were
// locked from calibration output (tests/calibrate.cpp); rerun that binary
// before changing any generator here.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "embkit/dump.hpp"
#include "embkit/embedding.hpp"
#include "embkit/extraction.hpp"
#include "embkit/probe.hpp"
#include "embkit/rng.hpp"

namespace synthetic {

// ------------------------------------------------------------- x2static --

// Cluster-structured corpus: words co-occur only with cluster mates, the
// teacher emits each word's planted vector plus noise. Distillation should
// align each learned vector with its planted direction.
struct PlantedCorpus {
    embkit::MemoryDumpSource dump;
    embkit::Vocabulary vocab;
    Eigen::MatrixXd truth;  // planted vector per word
};

inline PlantedCorpus planted_corpus(std::uint64_t seed, int clusters = 10,
                                    int words_per_cluster = 2, int dim = 16, int sentences = 400,
                                    int sentence_len = 6, double teacher_noise = 0.05) {
    embkit::Rng rng(seed);
    const int n_words = clusters * words_per_cluster;
    Eigen::MatrixXd centers(clusters, dim);
    for (int k = 0; k < clusters; ++k) {
        for (int j = 0; j < dim; ++j) centers(k, j) = rng.normal(0.0, 1.0);
        centers.row(k) *= 2.0 / centers.row(k).norm();
    }
    Eigen::MatrixXd truth(n_words, dim);
    embkit::Vocabulary vocab;
    for (int w = 0; w < n_words; ++w) {
        vocab.add("w" + std::to_string(w));
        const int k = w / words_per_cluster;
        for (int j = 0; j < dim; ++j) truth(w, j) = centers(k, j) + 0.15 * rng.normal(0.0, 1.0);
    }

    embkit::DumpHeader header;
    header.dim = static_cast<std::uint32_t>(dim);
    header.teacher = "planted";
    std::vector<embkit::SentenceRecord> records;
    for (int s = 0; s < sentences; ++s) {
        const int k = static_cast<int>(rng.below(clusters));
        embkit::SentenceRecord rec;
        for (int t = 0; t < sentence_len; ++t) {
            const int w =
                k * words_per_cluster + static_cast<int>(rng.below(words_per_cluster));
            rec.words.push_back("w" + std::to_string(w));
            std::vector<float> v(dim);
            for (int j = 0; j < dim; ++j) {
                v[j] = static_cast<float>(truth(w, j) + teacher_noise * rng.normal(0.0, 1.0));
            }
            rec.alignment.push_back({static_cast<std::uint32_t>(t)});
            rec.subword_vectors.push_back(std::move(v));
        }
        records.push_back(std::move(rec));
    }
    return {embkit::MemoryDumpSource(header, records), std::move(vocab), std::move(truth)};
}

inline embkit::X2StaticConfig planted_config(std::uint64_t seed) {
    embkit::X2StaticConfig config;
    config.epochs = 6;
    config.negatives = 2;
    config.min_count = 2;
    config.seed = seed;
    return config;
}

inline double mean_cosine_to_truth(const embkit::EmbeddingMatrix& learned,
                                   const Eigen::MatrixXd& truth) {
    double sum = 0.0;
    for (std::size_t w = 0; w < learned.rows(); ++w) {
        Eigen::VectorXd v(learned.dim());
        for (std::size_t j = 0; j < learned.dim(); ++j) v(j) = learned.row(w)[j];
        const double denom = v.norm() * truth.row(w).norm();
        sum += denom == 0.0 ? 0.0 : v.dot(truth.row(w)) / denom;
    }
    return sum / static_cast<double>(learned.rows());
}

// Locked from `calibrate x2-recovery` over seeds 1..10: mean 0.4551,
// stddev 0.0251, mean - 3 * stddev = 0.3797. The ceiling sits well below
// 1: the learned projection and the targets share a gauge freedom, so the
// static space can rotate relative to the teacher space during training.
inline constexpr double kX2RecoveryThreshold = 0.3797;

// ----------------------------------------------------------------- probe --

// Random but fixed embedding table for the probe corpora.
inline embkit::EmbeddingMatrix probe_embeddings(const embkit::Vocabulary& vocab, int dim,
                                                std::uint64_t seed) {
    embkit::Rng rng(seed);
    embkit::EmbeddingMatrix m(vocab, dim);
    for (std::size_t w = 0; w < m.rows(); ++w) {
        auto row = m.row_mut(w);
        for (int j = 0; j < dim; ++j) row[j] = static_cast<float>(rng.normal(0.0, 1.0));
    }
    return m;
}

struct ProbeFixture {
    embkit::TaggedCorpus train;
    embkit::TaggedCorpus dev;
    embkit::TaggedCorpus test;
    embkit::EmbeddingMatrix embeddings;
};

// Tag is a pure function of the word: a lookup table reaches 100%, so the
// probe should saturate given enough epochs.
inline ProbeFixture lookup_task(std::uint64_t seed, int n_words = 12, int n_tags = 3,
                                int sentences = 10, int sentence_len = 8, int dim = 8) {
    embkit::Rng rng(seed);
    embkit::Vocabulary vocab;
    for (int w = 0; w < n_words; ++w) vocab.add("w" + std::to_string(w));

    auto make_corpus = [&](int count) {
        embkit::TaggedCorpus corpus;
        for (int t = 0; t < n_tags; ++t) corpus.tagset.push_back("T" + std::to_string(t));
        for (int s = 0; s < count; ++s) {
            embkit::TaggedSentence sentence;
            for (int t = 0; t < sentence_len; ++t) {
                const int w = static_cast<int>(rng.below(n_words));
                sentence.words.push_back("w" + std::to_string(w));
                sentence.tags.push_back(static_cast<std::uint32_t>(w % n_tags));
            }
            corpus.sentences.push_back(std::move(sentence));
        }
        return corpus;
    };

    ProbeFixture fixture;
    fixture.train = make_corpus(sentences);
    fixture.dev = make_corpus(2);
    fixture.test = make_corpus(4);
    fixture.embeddings = probe_embeddings(vocab, dim, embkit::derive_seed(seed, "emb"));
    return fixture;
}

// Small batches give the optimizer enough steps to saturate the tiny
// lookup corpus within the pinned epoch budget.
inline embkit::ProbeConfig lookup_task_config(std::uint64_t seed) {
    embkit::ProbeConfig config;
    config.hidden_size = 16;
    config.epochs = 200;
    config.batch_size = 4;
    config.seed = seed;
    config.oov.seed = embkit::derive_seed(seed, "oov");
    return config;
}

// Tag is the pair of neighbor classes:
//   tag_t = class(w_{t-1}) * 4 + class(w_{t+1}),
// boundary neighbors counting as class 0. The class is a linear feature
// of the embedding (a one-hot block plus noise), so solving the task is
// purely a matter of carrying two bits of neighbor class through the
// recurrent state in each direction: accuracy grows with hidden size.
inline ProbeFixture context_task(std::uint64_t seed, int n_words = 16, int train_sentences = 120,
                                 int dev_sentences = 30, int test_sentences = 40, int dim = 8) {
    embkit::Rng rng(seed);
    embkit::Vocabulary vocab;
    for (int w = 0; w < n_words; ++w) vocab.add("w" + std::to_string(w));
    const int n_classes = 4;

    auto word_class = [&](int w) { return w % n_classes; };
    auto make_corpus = [&](int count) {
        embkit::TaggedCorpus corpus;
        for (int t = 0; t < n_classes * n_classes; ++t) {
            corpus.tagset.push_back("T" + std::to_string(t));
        }
        for (int s = 0; s < count; ++s) {
            const int len = 8 + static_cast<int>(rng.below(5));
            std::vector<int> words(len);
            for (auto& w : words) w = static_cast<int>(rng.below(n_words));
            embkit::TaggedSentence sentence;
            for (int t = 0; t < len; ++t) {
                const int left = t > 0 ? word_class(words[t - 1]) : 0;
                const int right = t + 1 < len ? word_class(words[t + 1]) : 0;
                sentence.words.push_back("w" + std::to_string(words[t]));
                sentence.tags.push_back(static_cast<std::uint32_t>(left * n_classes + right));
            }
            corpus.sentences.push_back(std::move(sentence));
        }
        return corpus;
    };

    ProbeFixture fixture;
    fixture.train = make_corpus(train_sentences);
    fixture.dev = make_corpus(dev_sentences);
    fixture.test = make_corpus(test_sentences);

    embkit::Rng emb_rng(embkit::derive_seed(seed, "emb"));
    embkit::EmbeddingMatrix embeddings(vocab, dim);
    for (int w = 0; w < n_words; ++w) {
        auto row = embeddings.row_mut(static_cast<std::size_t>(w));
        for (int j = 0; j < dim; ++j) {
            row[j] = static_cast<float>(0.3 * emb_rng.normal(0.0, 1.0));
        }
        row[word_class(w)] += 1.0f;
    }
    fixture.embeddings = std::move(embeddings);
    return fixture;
}

inline embkit::ProbeConfig context_task_config(std::uint64_t seed) {
    embkit::ProbeConfig config;
    config.epochs = 40;
    config.batch_size = 4;
    config.seed = seed;
    config.oov.seed = embkit::derive_seed(seed, "oov");
    return config;
}

// Line the acceptance suite holds the hidden-size trend to, confirmed
// attainable by `calibrate probe-trend` over seeds 1..5: per-seed
// Spearman {0.991, 1.000, 0.991, 1.000, 0.991}, mean 0.9946, stddev
// 0.0044.
inline constexpr double kTrendSpearmanThreshold = 0.8;

}  // namespace synthetic
