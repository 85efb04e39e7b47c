#include "embkit/extraction.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <unordered_map>

#include "embkit/error.hpp"
#include "embkit/rng.hpp"

namespace embkit {

void RunningMean::update(std::span<const float> x) {
    ++count;
    const double inv_n = 1.0 / static_cast<double>(count);
    for (std::size_t j = 0; j < mean.size(); ++j) {
        const double delta = (static_cast<double>(x[j]) - mean[j]) * inv_n;
        // Kahan step on the increment.
        const double y = delta - compensation[j];
        const double t = mean[j] + y;
        compensation[j] = (t - mean[j]) - y;
        mean[j] = t;
    }
}

EmbeddingMatrix extract_decontextualized(const DumpSource& dump, const Vocabulary& vocab) {
    DumpReader reader = dump.open();
    const std::uint32_t dim = reader.header().dim;
    std::unordered_map<std::string, std::vector<float>> first_seen;
    std::size_t record_index = 0;
    while (auto rec = reader.next()) {
        ++record_index;
        if (rec->words.size() != 1) {
            throw FormatError("decontextualized dump record " + std::to_string(record_index) +
                              " has " + std::to_string(rec->words.size()) +
                              " words; expected single-word sentences");
        }
        const std::string& word = rec->words[0];
        if (!vocab.contains(word)) continue;
        if (first_seen.contains(word)) continue;  // first record wins
        first_seen.emplace(word, pool_subwords(*rec, 0, PoolMode::mean));
    }

    std::vector<std::string> absent;
    for (const std::string& w : vocab.words()) {
        if (!first_seen.contains(w)) absent.push_back(w);
    }
    if (!absent.empty()) {
        std::string msg = "dump does not cover " + std::to_string(absent.size()) + " word(s):";
        for (const auto& w : absent) {
            msg += ' ';
            msg += w;
        }
        throw MissingWordError(msg);
    }

    EmbeddingMatrix m(vocab, dim);
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        const auto& v = first_seen.at(vocab.word(i));
        auto dst = m.row_mut(i);
        std::copy(v.begin(), v.end(), dst.begin());
    }
    return m;
}

namespace {

std::vector<float> sentence_mean(const SentenceRecord& rec, std::uint32_t dim) {
    std::vector<double> sum(dim, 0.0);
    for (const auto& v : rec.subword_vectors) {
        for (std::uint32_t j = 0; j < dim; ++j) sum[j] += v[j];
    }
    std::vector<float> out(dim, 0.0f);
    if (!rec.subword_vectors.empty()) {
        const double inv = 1.0 / static_cast<double>(rec.subword_vectors.size());
        for (std::uint32_t j = 0; j < dim; ++j) out[j] = static_cast<float>(sum[j] * inv);
    }
    return out;
}

}  // namespace

AggregateResult extract_aggregate(const DumpSource& dump, const Vocabulary& vocab,
                                  const AggregateOptions& options) {
    DumpReader reader = dump.open();
    const std::uint32_t dim = reader.header().dim;
    std::vector<RunningMean> states(vocab.size(), RunningMean(dim));

    while (auto rec = reader.next()) {
        std::vector<float> shared;
        if (options.scope == OccurrenceScope::sentence && !rec->words.empty()) {
            shared = sentence_mean(*rec, dim);
        }
        for (std::size_t w = 0; w < rec->words.size(); ++w) {
            auto idx = vocab.find(rec->words[w]);
            if (!idx) continue;
            RunningMean& state = states[*idx];
            if (options.cap && state.count >= *options.cap) continue;
            if (options.scope == OccurrenceScope::sentence) {
                state.update(shared);
            } else {
                state.update(pool_subwords(*rec, w, PoolMode::mean));
            }
        }
    }

    AggregateResult result;
    result.matrix = EmbeddingMatrix(vocab, dim);
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        if (states[i].count == 0) {
            result.missing_words.push_back(vocab.word(i));
            continue;
        }
        auto dst = result.matrix.row_mut(i);
        for (std::uint32_t j = 0; j < dim; ++j) {
            dst[j] = static_cast<float>(states[i].mean[j]);
        }
    }
    return result;
}

namespace {

double stable_log_sigmoid(double x) {
    // log sigma(x) = -softplus(-x)
    const double z = -x;
    return -(std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double x2_occurrence_loss(const X2StaticModel& model, const Eigen::VectorXd& context,
                          std::uint32_t target, std::span<const std::uint32_t> negatives) {
    const Eigen::VectorXd h = model.projection * context;
    double loss = -stable_log_sigmoid(h.dot(model.targets.row(target)));
    for (std::uint32_t n : negatives) {
        loss -= stable_log_sigmoid(-h.dot(model.targets.row(n)));
    }
    return loss;
}

X2OccurrenceGrads x2_occurrence_backward(const X2StaticModel& model,
                                         const Eigen::VectorXd& context, std::uint32_t target,
                                         std::span<const std::uint32_t> negatives) {
    X2OccurrenceGrads grads;
    const Eigen::VectorXd h = model.projection * context;

    const double score_t = h.dot(model.targets.row(target));
    grads.loss = -stable_log_sigmoid(score_t);
    const double coeff_t = sigmoid(score_t) - 1.0;
    grads.d_target = coeff_t * h;
    Eigen::VectorXd g_h = coeff_t * model.targets.row(target).transpose();

    grads.d_negatives.reserve(negatives.size());
    for (std::uint32_t n : negatives) {
        const double score_n = h.dot(model.targets.row(n));
        grads.loss -= stable_log_sigmoid(-score_n);
        const double coeff_n = sigmoid(score_n);
        grads.d_negatives.push_back(coeff_n * h);
        g_h += coeff_n * model.targets.row(n).transpose();
    }

    grads.d_projection = g_h * context.transpose();
    return grads;
}

namespace {

struct CorpusCensus {
    std::vector<std::uint64_t> freq;            // per vocab word, all sentences
    std::vector<std::uint64_t> freq_trainable;  // per vocab word, sentences of length >= 2
};

CorpusCensus census_pass(const DumpSource& dump, const Vocabulary& vocab) {
    CorpusCensus census;
    census.freq.assign(vocab.size(), 0);
    census.freq_trainable.assign(vocab.size(), 0);
    DumpReader reader = dump.open();
    while (auto rec = reader.next()) {
        const bool trainable = rec->words.size() >= 2;
        for (const auto& w : rec->words) {
            if (auto idx = vocab.find(w)) {
                ++census.freq[*idx];
                if (trainable) ++census.freq_trainable[*idx];
            }
        }
    }
    return census;
}

// Cumulative unigram^alpha table; sampling is a binary search over it.
class NegativeTable {
public:
    NegativeTable(const std::vector<std::uint64_t>& freq_by_compact, double alpha) {
        cumulative_.reserve(freq_by_compact.size());
        double acc = 0.0;
        for (std::uint64_t f : freq_by_compact) {
            acc += std::pow(static_cast<double>(f), alpha);
            cumulative_.push_back(acc);
        }
    }

    std::uint32_t sample(Rng& rng) const {
        const double x = rng.next_unit() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
        if (it == cumulative_.end()) --it;
        return static_cast<std::uint32_t>(it - cumulative_.begin());
    }

private:
    std::vector<double> cumulative_;
};

}  // namespace

X2StaticResult train_x2static(const DumpSource& dump, const Vocabulary& vocab,
                              const X2StaticConfig& config) {
    if (config.window == 0 || config.negatives == 0 || config.epochs == 0) {
        throw ConfigError("window, negatives, and epochs must all be positive");
    }
    if (!(config.lr0 > 0.0)) throw ConfigError("lr0 must be positive");
    if (!(config.neg_exponent > 0.0) || config.neg_exponent > 1.0) {
        throw ConfigError("neg_exponent must be in (0, 1]");
    }
    if (config.min_count == 0) throw ConfigError("min_count must be positive");

    const std::uint32_t teacher_dim = dump.open().header().dim;
    const std::uint32_t dim = config.dim == 0 ? teacher_dim : config.dim;

    const CorpusCensus census = census_pass(dump, vocab);

    // Compact index over the words that clear min_count.
    std::vector<std::int64_t> compact_of(vocab.size(), -1);
    std::vector<std::uint32_t> vocab_of_compact;
    std::vector<std::uint64_t> compact_freq;
    std::uint64_t trainable_occurrences = 0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        if (census.freq[i] >= config.min_count) {
            compact_of[i] = static_cast<std::int64_t>(vocab_of_compact.size());
            vocab_of_compact.push_back(static_cast<std::uint32_t>(i));
            compact_freq.push_back(census.freq[i]);
            trainable_occurrences += census.freq_trainable[i];
        }
    }
    if (vocab_of_compact.empty()) {
        throw ConfigError("no vocabulary word reaches min_count = " +
                          std::to_string(config.min_count));
    }
    if (trainable_occurrences == 0) {
        throw ConfigError("corpus has no trainable occurrence (every attested word sits in a "
                          "single-word sentence)");
    }

    X2StaticModel model;
    {
        Rng init_rng(derive_seed(config.seed, "x2static-init"));
        model.targets.resize(static_cast<Eigen::Index>(vocab_of_compact.size()), dim);
        const double bound = 0.5 / static_cast<double>(dim);
        for (Eigen::Index r = 0; r < model.targets.rows(); ++r) {
            for (Eigen::Index c = 0; c < model.targets.cols(); ++c) {
                model.targets(r, c) = init_rng.uniform(-bound, bound);
            }
        }
        if (dim == teacher_dim) {
            // Identity start keeps the learned space anchored to the teacher's.
            model.projection = Eigen::MatrixXd::Identity(dim, teacher_dim);
        } else {
            model.projection.resize(dim, teacher_dim);
            const double xavier = std::sqrt(6.0 / static_cast<double>(dim + teacher_dim));
            for (Eigen::Index r = 0; r < model.projection.rows(); ++r) {
                for (Eigen::Index c = 0; c < model.projection.cols(); ++c) {
                    model.projection(r, c) = init_rng.uniform(-xavier, xavier);
                }
            }
        }
    }

    const NegativeTable table(compact_freq, config.neg_exponent);
    Rng neg_rng(derive_seed(config.seed, "x2static-negatives"));

    const std::uint64_t total_updates =
        static_cast<std::uint64_t>(config.epochs) * trainable_occurrences;
    std::uint64_t update = 0;

    X2StaticResult result;
    result.stats.participating_words = vocab_of_compact.size();

    std::vector<Eigen::VectorXd> pooled;
    std::vector<std::uint32_t> negatives;
    for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
        double epoch_loss = 0.0;
        std::uint64_t epoch_updates = 0;
        DumpReader reader = dump.open();
        while (auto rec = reader.next()) {
            const std::size_t len = rec->words.size();
            if (len < 2) continue;
            pooled.assign(len, Eigen::VectorXd());
            for (std::size_t i = 0; i < len; ++i) {
                const auto v = pool_subwords(*rec, i, PoolMode::mean);
                pooled[i] = Eigen::Map<const Eigen::VectorXf>(v.data(), v.size()).cast<double>();
            }
            for (std::size_t i = 0; i < len; ++i) {
                auto vocab_idx = vocab.find(rec->words[i]);
                if (!vocab_idx || compact_of[*vocab_idx] < 0) continue;
                const auto target = static_cast<std::uint32_t>(compact_of[*vocab_idx]);

                const std::size_t lo = i >= config.window ? i - config.window : 0;
                const std::size_t hi = std::min(len - 1, i + config.window);
                Eigen::VectorXd context = Eigen::VectorXd::Zero(teacher_dim);
                std::size_t n_context = 0;
                for (std::size_t j = lo; j <= hi; ++j) {
                    if (j == i) continue;
                    context += pooled[j];
                    ++n_context;
                }
                context /= static_cast<double>(n_context);

                negatives.clear();
                for (std::uint32_t s = 0; s < config.negatives; ++s) {
                    const std::uint32_t n = table.sample(neg_rng);
                    if (n != target) negatives.push_back(n);
                }

                const X2OccurrenceGrads grads =
                    x2_occurrence_backward(model, context, target, negatives);
                if (!std::isfinite(grads.loss)) {
                    throw DivergenceError("non-finite loss at update " + std::to_string(update));
                }
                const double lr =
                    config.lr0 * (1.0 - static_cast<double>(update) /
                                            static_cast<double>(total_updates));
                model.targets.row(target) -= lr * grads.d_target.transpose();
                for (std::size_t s = 0; s < negatives.size(); ++s) {
                    model.targets.row(negatives[s]) -= lr * grads.d_negatives[s].transpose();
                }
                model.projection -= lr * grads.d_projection;
                assert(model.targets.row(target).allFinite());
                assert(model.projection.allFinite());

                epoch_loss += grads.loss;
                ++epoch_updates;
                ++update;
            }
        }
        result.stats.epoch_mean_loss.push_back(
            epoch_updates == 0 ? 0.0 : epoch_loss / static_cast<double>(epoch_updates));
    }
    result.stats.updates = update;

    result.matrix = EmbeddingMatrix(vocab, dim);
    for (std::size_t compact = 0; compact < vocab_of_compact.size(); ++compact) {
        auto dst = result.matrix.row_mut(vocab_of_compact[compact]);
        for (std::uint32_t j = 0; j < dim; ++j) {
            dst[j] = static_cast<float>(model.targets(static_cast<Eigen::Index>(compact), j));
        }
    }
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        if (compact_of[i] < 0) result.skipped_words.push_back(vocab.word(i));
    }
    return result;
}

}  // namespace embkit
