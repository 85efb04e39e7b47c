#include "embkit/probe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "embkit/error.hpp"
#include "embkit/text.hpp"

namespace embkit {

std::size_t TaggedCorpus::token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.words.size();
    return n;
}

TaggedCorpus TaggedCorpus::remapped_to(const std::vector<std::string>& target_tagset) const {
    std::unordered_map<std::string, std::uint32_t> index;
    for (std::size_t i = 0; i < target_tagset.size(); ++i) {
        index.emplace(target_tagset[i], static_cast<std::uint32_t>(i));
    }
    std::vector<std::uint32_t> mapping(tagset.size());
    for (std::size_t i = 0; i < tagset.size(); ++i) {
        auto it = index.find(tagset[i]);
        if (it == index.end()) {
            throw DataError("tag '" + tagset[i] + "' is not in the target tagset");
        }
        mapping[i] = it->second;
    }
    TaggedCorpus out;
    out.tagset = target_tagset;
    out.sentences.reserve(sentences.size());
    for (const auto& s : sentences) {
        TaggedSentence mapped;
        mapped.words = s.words;
        mapped.tags.reserve(s.tags.size());
        for (std::uint32_t t : s.tags) mapped.tags.push_back(mapping[t]);
        out.sentences.push_back(std::move(mapped));
    }
    return out;
}

TaggedCorpus load_conll(const std::string& path, std::size_t word_column,
                        std::size_t tag_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus file '" + path + "'");

    TaggedCorpus corpus;
    std::unordered_map<std::string, std::uint32_t> tag_index;
    TaggedSentence current;
    std::string line;
    std::size_t line_no = 0;

    auto flush = [&] {
        if (!current.words.empty()) {
            corpus.sentences.push_back(std::move(current));
            current = TaggedSentence{};
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush();
            continue;
        }
        if (line.front() == '#') continue;
        auto fields = split(line, '\t');
        const std::size_t needed = std::max(word_column, tag_column);
        if (fields.size() <= needed) {
            throw FormatError("row has " + std::to_string(fields.size()) +
                              " columns, needs at least " + std::to_string(needed + 1) +
                              ", at line " + std::to_string(line_no) + " of '" + path + "'");
        }
        std::string tag(fields[tag_column]);
        auto [it, inserted] =
            tag_index.try_emplace(tag, static_cast<std::uint32_t>(corpus.tagset.size()));
        if (inserted) corpus.tagset.push_back(tag);
        current.words.emplace_back(fields[word_column]);
        current.tags.push_back(it->second);
    }
    flush();
    return corpus;
}

ProbeModel ProbeModel::init(std::size_t input_dim, std::size_t hidden, std::size_t tags,
                            Rng& rng) {
    if (input_dim == 0 || hidden == 0 || tags == 0) {
        throw ArgumentError("probe dimensions must all be positive");
    }
    ProbeModel m;
    m.input_dim = input_dim;
    m.hidden = hidden;
    m.tags = tags;
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
    auto fill = [&](Eigen::MatrixXd& w, Eigen::Index rows, Eigen::Index cols) {
        w.resize(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = rng.uniform(-bound, bound);
        }
    };
    const auto h = static_cast<Eigen::Index>(hidden);
    const auto d = static_cast<Eigen::Index>(input_dim);
    const auto k = static_cast<Eigen::Index>(tags);
    for (Direction* dir : {&m.forward_cell, &m.backward_cell}) {
        fill(dir->w_in, 4 * h, d);
        fill(dir->w_rec, 4 * h, h);
        dir->bias = Eigen::MatrixXd::Zero(4 * h, 1);
        dir->bias.block(h, 0, h, 1).setOnes();  // forget gate opens at start
    }
    fill(m.w_out, k, 2 * h);
    m.b_out = Eigen::MatrixXd::Zero(k, 1);
    return m;
}

std::array<Eigen::MatrixXd*, ProbeModel::kParamCount> ProbeModel::parameters() {
    return {&forward_cell.w_in, &forward_cell.w_rec, &forward_cell.bias,
            &backward_cell.w_in, &backward_cell.w_rec, &backward_cell.bias,
            &w_out, &b_out};
}

std::array<const Eigen::MatrixXd*, ProbeModel::kParamCount> ProbeModel::parameters() const {
    return {&forward_cell.w_in, &forward_cell.w_rec, &forward_cell.bias,
            &backward_cell.w_in, &backward_cell.w_rec, &backward_cell.bias,
            &w_out, &b_out};
}

std::array<const char*, ProbeModel::kParamCount> ProbeModel::parameter_names() {
    return {"forward.w_in", "forward.w_rec", "forward.bias",
            "backward.w_in", "backward.w_rec", "backward.bias",
            "w_out", "b_out"};
}

ProbeGrads ProbeGrads::zeros_like(const ProbeModel& model) {
    ProbeGrads g;
    auto params = model.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
        g.tensors[i] = Eigen::MatrixXd::Zero(params[i]->rows(), params[i]->cols());
    }
    return g;
}

namespace {

// One direction's activations over a sentence, step-ordered.
struct LstmTrace {
    Eigen::MatrixXd x;  // D x L, columns are steps
    Eigen::MatrixXd gate_i, gate_f, gate_g, gate_o;  // H x L
    Eigen::MatrixXd cell, tanh_cell, hidden;         // H x L
};

LstmTrace lstm_run(const ProbeModel::Direction& dir, Eigen::MatrixXd x_steps) {
    const Eigen::Index h = dir.w_rec.cols();
    const Eigen::Index len = x_steps.cols();
    LstmTrace trace;
    trace.x = std::move(x_steps);
    trace.gate_i.resize(h, len);
    trace.gate_f.resize(h, len);
    trace.gate_g.resize(h, len);
    trace.gate_o.resize(h, len);
    trace.cell.resize(h, len);
    trace.tanh_cell.resize(h, len);
    trace.hidden.resize(h, len);

    Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(h);
    Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(h);
    for (Eigen::Index t = 0; t < len; ++t) {
        const Eigen::VectorXd z = dir.w_in * trace.x.col(t) + dir.w_rec * h_prev + dir.bias;
        const auto logistic = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
        for (Eigen::Index r = 0; r < h; ++r) {
            trace.gate_i(r, t) = logistic(z(r));
            trace.gate_f(r, t) = logistic(z(h + r));
            trace.gate_g(r, t) = std::tanh(z(2 * h + r));
            trace.gate_o(r, t) = logistic(z(3 * h + r));
        }
        trace.cell.col(t) = trace.gate_f.col(t).cwiseProduct(c_prev) +
                            trace.gate_i.col(t).cwiseProduct(trace.gate_g.col(t));
        trace.tanh_cell.col(t) = trace.cell.col(t).array().tanh();
        trace.hidden.col(t) = trace.gate_o.col(t).cwiseProduct(trace.tanh_cell.col(t));
        h_prev = trace.hidden.col(t);
        c_prev = trace.cell.col(t);
    }
    return trace;
}

void lstm_backward(const ProbeModel::Direction& dir, const LstmTrace& trace,
                   const Eigen::MatrixXd& d_hidden_ext, Eigen::MatrixXd& g_w_in,
                   Eigen::MatrixXd& g_w_rec, Eigen::MatrixXd& g_bias) {
    const Eigen::Index h = dir.w_rec.cols();
    const Eigen::Index len = trace.x.cols();
    Eigen::VectorXd dh_carry = Eigen::VectorXd::Zero(h);
    Eigen::VectorXd dc_carry = Eigen::VectorXd::Zero(h);
    Eigen::VectorXd dz(4 * h);
    for (Eigen::Index t = len - 1; t >= 0; --t) {
        const Eigen::VectorXd dh = d_hidden_ext.col(t) + dh_carry;
        const auto i = trace.gate_i.col(t);
        const auto f = trace.gate_f.col(t);
        const auto g = trace.gate_g.col(t);
        const auto o = trace.gate_o.col(t);
        const auto tc = trace.tanh_cell.col(t);

        const Eigen::VectorXd d_o = dh.cwiseProduct(tc);
        const Eigen::VectorXd dc =
            dc_carry + dh.cwiseProduct(o).cwiseProduct(
                           (1.0 - tc.array().square()).matrix());
        const Eigen::VectorXd c_prev =
            t > 0 ? Eigen::VectorXd(trace.cell.col(t - 1)) : Eigen::VectorXd::Zero(h);
        const Eigen::VectorXd d_i = dc.cwiseProduct(g);
        const Eigen::VectorXd d_f = dc.cwiseProduct(c_prev);
        const Eigen::VectorXd d_g = dc.cwiseProduct(i);
        dc_carry = dc.cwiseProduct(f);

        dz.segment(0, h) = d_i.array() * i.array() * (1.0 - i.array());
        dz.segment(h, h) = d_f.array() * f.array() * (1.0 - f.array());
        dz.segment(2 * h, h) = d_g.array() * (1.0 - g.array().square());
        dz.segment(3 * h, h) = d_o.array() * o.array() * (1.0 - o.array());

        g_w_in += dz * trace.x.col(t).transpose();
        if (t > 0) g_w_rec += dz * trace.hidden.col(t - 1).transpose();
        g_bias += dz;
        dh_carry = dir.w_rec.transpose() * dz;
    }
}

Eigen::MatrixXd reverse_columns(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.col(c) = m.col(m.cols() - 1 - c);
    return out;
}

Eigen::MatrixXd softmax_columns(const Eigen::MatrixXd& logits) {
    Eigen::MatrixXd probs(logits.rows(), logits.cols());
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
        const double peak = logits.col(c).maxCoeff();
        Eigen::VectorXd e = (logits.col(c).array() - peak).exp();
        probs.col(c) = e / e.sum();
    }
    return probs;
}

struct SentencePass {
    LstmTrace fwd;
    LstmTrace bwd;
    Eigen::MatrixXd concat;  // 2H x L, after dropout when a mask is set
    Eigen::MatrixXd probs;   // K x L
};

SentencePass run_sentence(const ProbeModel& model, const Eigen::MatrixXd& sentence,
                          const Eigen::VectorXd* mask) {
    if (static_cast<std::size_t>(sentence.cols()) != model.input_dim) {
        throw ShapeError("sentence has " + std::to_string(sentence.cols()) +
                         " columns, model expects " + std::to_string(model.input_dim));
    }
    if (sentence.rows() == 0) throw ShapeError("sentence must have at least one token");

    const Eigen::Index h = static_cast<Eigen::Index>(model.hidden);
    const Eigen::Index len = sentence.rows();
    const Eigen::MatrixXd x_steps = sentence.transpose();

    SentencePass pass;
    pass.fwd = lstm_run(model.forward_cell, x_steps);
    pass.bwd = lstm_run(model.backward_cell, reverse_columns(x_steps));

    pass.concat.resize(2 * h, len);
    for (Eigen::Index t = 0; t < len; ++t) {
        pass.concat.block(0, t, h, 1) = pass.fwd.hidden.col(t);
        pass.concat.block(h, t, h, 1) = pass.bwd.hidden.col(len - 1 - t);
    }
    if (mask != nullptr) {
        pass.concat = mask->asDiagonal() * pass.concat;
    }
    const Eigen::MatrixXd logits = (model.w_out * pass.concat).colwise() +
                                   Eigen::VectorXd(model.b_out.col(0));
    pass.probs = softmax_columns(logits);
    return pass;
}

}  // namespace

Eigen::MatrixXd probe_forward(const ProbeModel& model, const Eigen::MatrixXd& sentence,
                              const Eigen::VectorXd* dropout_mask) {
    return run_sentence(model, sentence, dropout_mask).probs.transpose();
}

namespace {

// True length = tokens before the first padding mark; padding must be a
// trailing block.
std::size_t true_length(const EncodedSentence& s) {
    if (s.x.rows() != static_cast<Eigen::Index>(s.tags.size())) {
        throw ShapeError("sentence has " + std::to_string(s.x.rows()) + " rows but " +
                         std::to_string(s.tags.size()) + " tags");
    }
    std::size_t len = 0;
    while (len < s.tags.size() && s.tags[len] >= 0) ++len;
    for (std::size_t i = len; i < s.tags.size(); ++i) {
        if (s.tags[i] >= 0) throw DataError("padding must be trailing");
    }
    return len;
}

}  // namespace

double probe_loss_and_grads(const ProbeModel& model,
                            std::span<const EncodedSentence* const> batch,
                            double dropout_rate, Rng* dropout_rng, ProbeGrads& grads) {
    grads = ProbeGrads::zeros_like(model);
    const Eigen::Index h = static_cast<Eigen::Index>(model.hidden);

    double loss_sum = 0.0;
    std::size_t tokens = 0;

    for (const EncodedSentence* sentence : batch) {
        const std::size_t len = true_length(*sentence);
        if (len == 0) continue;

        // One mask per sentence per call; the stream position depends only
        // on the order of non-empty sentences.
        Eigen::VectorXd mask;
        bool use_mask = false;
        if (dropout_rng != nullptr && dropout_rate > 0.0) {
            mask.resize(2 * h);
            const double scale = 1.0 / (1.0 - dropout_rate);
            for (Eigen::Index r = 0; r < 2 * h; ++r) {
                mask(r) = dropout_rng->next_unit() >= dropout_rate ? scale : 0.0;
            }
            use_mask = true;
        }
        const Eigen::MatrixXd x = sentence->x.topRows(static_cast<Eigen::Index>(len));
        SentencePass pass = run_sentence(model, x, use_mask ? &mask : nullptr);

        Eigen::MatrixXd d_logits = pass.probs;  // dCE/dlogits = p - onehot(gold)
        for (std::size_t t = 0; t < len; ++t) {
            const std::int32_t gold = sentence->tags[t];
            if (gold >= static_cast<std::int32_t>(model.tags)) {
                throw DataError("gold tag index " + std::to_string(gold) +
                                " outside tagset of size " + std::to_string(model.tags));
            }
            loss_sum -= std::log(pass.probs(gold, static_cast<Eigen::Index>(t)));
            d_logits(gold, static_cast<Eigen::Index>(t)) -= 1.0;
        }
        tokens += len;

        grads.tensors[6] += d_logits * pass.concat.transpose();
        grads.tensors[7] += d_logits.rowwise().sum();

        Eigen::MatrixXd d_concat = model.w_out.transpose() * d_logits;
        if (use_mask) d_concat = mask.asDiagonal() * d_concat;

        const Eigen::MatrixXd d_h_fwd = d_concat.topRows(h);
        const Eigen::MatrixXd d_h_bwd = reverse_columns(d_concat.bottomRows(h));

        lstm_backward(model.forward_cell, pass.fwd, d_h_fwd, grads.tensors[0], grads.tensors[1],
                      grads.tensors[2]);
        lstm_backward(model.backward_cell, pass.bwd, d_h_bwd, grads.tensors[3], grads.tensors[4],
                      grads.tensors[5]);
    }

    if (tokens == 0) throw ArgumentError("batch holds no non-padding token");
    const double inv = 1.0 / static_cast<double>(tokens);
    for (auto& g : grads.tensors) g *= inv;
    return loss_sum * inv;
}

AdamState AdamState::zeros_like(const ProbeModel& model) {
    AdamState s;
    auto params = model.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
        s.m[i] = Eigen::MatrixXd::Zero(params[i]->rows(), params[i]->cols());
        s.v[i] = Eigen::MatrixXd::Zero(params[i]->rows(), params[i]->cols());
    }
    return s;
}

void adam_step(ProbeModel& model, const ProbeGrads& grads, AdamState& state,
               const AdamConfig& config) {
    ++state.t;
    const double bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.t));
    const double bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.t));
    auto params = model.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Eigen::MatrixXd& g = grads.tensors[i];
        if (!g.allFinite()) {
            throw DivergenceError(std::string("non-finite gradient in ") +
                                  ProbeModel::parameter_names()[i]);
        }
        state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
        state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g.cwiseProduct(g);
        const Eigen::MatrixXd m_hat = state.m[i] / bias1;
        const Eigen::MatrixXd v_hat = state.v[i] / bias2;
        *params[i] -= config.lr *
                      (m_hat.array() / (v_hat.array().sqrt() + config.epsilon)).matrix();
    }
}

namespace {

class EmbeddingLookupCache {
public:
    EmbeddingLookupCache(const EmbeddingMatrix& m, const OovPolicy& policy)
        : m_(m), policy_(policy) {}

    const Eigen::VectorXd& get(const std::string& word) {
        auto it = cache_.find(word);
        if (it != cache_.end()) return it->second;
        const std::vector<float> v = lookup_or_oov(m_, word, policy_);
        Eigen::VectorXd dense =
            Eigen::Map<const Eigen::VectorXf>(v.data(), static_cast<Eigen::Index>(v.size()))
                .cast<double>();
        return cache_.emplace(word, std::move(dense)).first->second;
    }

private:
    const EmbeddingMatrix& m_;
    OovPolicy policy_;
    std::unordered_map<std::string, Eigen::VectorXd> cache_;
};

std::vector<EncodedSentence> encode_corpus(const TaggedCorpus& corpus,
                                           EmbeddingLookupCache& lookup, std::size_t dim,
                                           std::uint32_t max_len) {
    if (max_len == 0) throw ConfigError("max_sentence_len must be positive");
    std::vector<EncodedSentence> out;
    for (const auto& sentence : corpus.sentences) {
        if (sentence.words.size() != sentence.tags.size()) {
            throw DataError("sentence has mismatched word/tag counts");
        }
        // Split, never truncate: every token keeps its supervision.
        for (std::size_t start = 0; start < sentence.words.size(); start += max_len) {
            const std::size_t len = std::min<std::size_t>(max_len, sentence.words.size() - start);
            EncodedSentence enc;
            enc.x.resize(static_cast<Eigen::Index>(len), static_cast<Eigen::Index>(dim));
            enc.tags.reserve(len);
            for (std::size_t t = 0; t < len; ++t) {
                enc.x.row(static_cast<Eigen::Index>(t)) =
                    lookup.get(sentence.words[start + t]).transpose();
                enc.tags.push_back(static_cast<std::int32_t>(sentence.tags[start + t]));
            }
            out.push_back(std::move(enc));
        }
    }
    return out;
}

double accuracy_over(const ProbeModel& model, const std::vector<EncodedSentence>& sentences) {
    std::size_t correct = 0;
    std::size_t total = 0;
    for (const auto& s : sentences) {
        const Eigen::MatrixXd probs = probe_forward(model, s.x);
        for (Eigen::Index t = 0; t < probs.rows(); ++t) {
            Eigen::Index best = 0;
            probs.row(t).maxCoeff(&best);
            correct += best == s.tags[static_cast<std::size_t>(t)] ? 1 : 0;
            ++total;
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace

TrainResult train_probe(const TaggedCorpus& corpus, const EmbeddingMatrix& embeddings,
                        const ProbeConfig& config, const TaggedCorpus* dev) {
    if (corpus.sentences.empty()) throw ArgumentError("training corpus is empty");
    if (corpus.tagset.empty()) throw ArgumentError("training corpus has an empty tagset");
    if (embeddings.dim() == 0) throw ConfigError("embedding dimension must be positive");
    if (config.hidden_size == 0) throw ConfigError("hidden_size must be positive");
    if (config.batch_size == 0) throw ConfigError("batch_size must be positive");
    if (config.dropout_rate < 0.0 || config.dropout_rate >= 1.0) {
        throw ConfigError("dropout_rate must lie in [0, 1)");
    }

    EmbeddingLookupCache lookup(embeddings, config.oov);
    const std::vector<EncodedSentence> encoded =
        encode_corpus(corpus, lookup, embeddings.dim(), config.max_sentence_len);
    std::vector<EncodedSentence> dev_encoded;
    if (dev != nullptr) {
        dev_encoded = encode_corpus(*dev, lookup, embeddings.dim(), config.max_sentence_len);
    }

    Rng init_rng(derive_seed(config.seed, "probe-init"));
    TrainResult result;
    result.model =
        ProbeModel::init(embeddings.dim(), config.hidden_size, corpus.tagset.size(), init_rng);

    if (config.epochs == 0) return result;

    Rng shuffle_rng(derive_seed(config.seed, "probe-shuffle"));
    Rng dropout_rng(derive_seed(config.seed, "probe-dropout"));
    AdamState adam = AdamState::zeros_like(result.model);
    ProbeGrads grads;

    std::vector<std::size_t> order(encoded.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    double best_dev = -1.0;
    for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        std::size_t token_sum = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            std::vector<const EncodedSentence*> batch;
            batch.reserve(end - start);
            std::size_t batch_tokens = 0;
            for (std::size_t i = start; i < end; ++i) {
                batch.push_back(&encoded[order[i]]);
                batch_tokens += encoded[order[i]].tags.size();
            }
            const double loss =
                probe_loss_and_grads(result.model, batch, config.dropout_rate,
                                     config.dropout_rate > 0.0 ? &dropout_rng : nullptr, grads);
            adam_step(result.model, grads, adam, config.adam);
            loss_sum += loss * static_cast<double>(batch_tokens);
            token_sum += batch_tokens;
        }

        EpochMetrics metrics;
        metrics.train_loss = token_sum == 0 ? 0.0 : loss_sum / static_cast<double>(token_sum);
        if (dev != nullptr) {
            const double acc = accuracy_over(result.model, dev_encoded);
            metrics.dev_accuracy = acc;
            if (acc > best_dev) {
                best_dev = acc;
                result.best_dev_model = result.model;
            }
        }
        result.epochs.push_back(metrics);
    }
    return result;
}

double evaluate_accuracy(const ProbeModel& model, const TaggedCorpus& corpus,
                         const EmbeddingMatrix& embeddings, const OovPolicy& oov,
                         std::uint32_t max_sentence_len) {
    if (embeddings.dim() != model.input_dim) {
        throw ConfigError("embedding dimension " + std::to_string(embeddings.dim()) +
                          " does not match model input " + std::to_string(model.input_dim));
    }
    EmbeddingLookupCache lookup(embeddings, oov);
    const std::vector<EncodedSentence> encoded =
        encode_corpus(corpus, lookup, embeddings.dim(), max_sentence_len);
    for (const auto& s : encoded) {
        for (std::int32_t t : s.tags) {
            if (t >= static_cast<std::int32_t>(model.tags)) {
                throw DataError("corpus tag index " + std::to_string(t) +
                                " outside model tagset of size " + std::to_string(model.tags));
            }
        }
    }
    return accuracy_over(model, encoded);
}

SweepResult sweep_probe(const TaggedCorpus& train, const TaggedCorpus& dev,
                        const TaggedCorpus& test, const EmbeddingMatrix& embeddings,
                        std::span<const std::uint32_t> hidden_sizes, const ProbeConfig& config) {
    if (hidden_sizes.empty()) throw ArgumentError("hidden size list is empty");
    const TaggedCorpus dev_mapped = dev.remapped_to(train.tagset);
    const TaggedCorpus test_mapped = test.remapped_to(train.tagset);

    SweepResult result;
    for (std::uint32_t hidden : hidden_sizes) {
        ProbeConfig cell_config = config;
        cell_config.hidden_size = hidden;
        cell_config.seed = derive_seed(config.seed, "sweep-hidden-" + std::to_string(hidden));
        TrainResult trained = train_probe(train, embeddings, cell_config, &dev_mapped);

        SweepCell cell;
        cell.hidden = hidden;
        cell.epochs = trained.epochs;
        cell.test_accuracy = evaluate_accuracy(trained.model, test_mapped, embeddings,
                                               cell_config.oov, cell_config.max_sentence_len);
        const ProbeModel& best =
            trained.best_dev_model ? *trained.best_dev_model : trained.model;
        cell.best_dev_test_accuracy = evaluate_accuracy(best, test_mapped, embeddings,
                                                        cell_config.oov,
                                                        cell_config.max_sentence_len);
        result.cells.push_back(std::move(cell));
    }
    return result;
}

}  // namespace embkit
