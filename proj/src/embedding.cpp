#include "embkit/embedding.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "embkit/error.hpp"
#include "embkit/rng.hpp"
#include "embkit/text.hpp"

namespace embkit {

EmbeddingMatrix::EmbeddingMatrix(Vocabulary vocab, std::size_t dim)
    : vocab_(std::move(vocab)), dim_(dim), values_(vocab_.size() * dim, 0.0f) {}

namespace {

std::string at_line(const std::string& path, std::size_t line_no) {
    return "'" + path + "' line " + std::to_string(line_no);
}

}  // namespace

EmbeddingMatrix load_word2vec_text(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open embedding file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("empty embedding file '" + path + "'");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split(line, ' ');
    if (header.size() != 2) {
        throw FormatError("expected '<count> <dim>' header at " + at_line(path, 1));
    }
    std::int64_t count = 0;
    std::int64_t dim = 0;
    try {
        count = parse_int(header[0]);
        dim = parse_int(header[1]);
    } catch (const ParseError&) {
        throw FormatError("malformed header at " + at_line(path, 1));
    }
    if (count < 0 || dim <= 0) {
        throw FormatError("header must declare count >= 0 and dim > 0 at " + at_line(path, 1));
    }

    Vocabulary vocab;
    std::vector<float> values;
    values.reserve(static_cast<std::size_t>(count) * static_cast<std::size_t>(dim));

    std::size_t line_no = 1;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto tokens = split(line, ' ');
        if (tokens.size() != static_cast<std::size_t>(dim) + 1) {
            throw FormatError("row has " + std::to_string(tokens.size() - 1) +
                              " values, dim=" + std::to_string(dim) + " at " +
                              at_line(path, line_no));
        }
        if (tokens[0].empty()) {
            throw FormatError("empty word at " + at_line(path, line_no));
        }
        std::string word(tokens[0]);
        if (options.nfc) word = nfc_normalize(word);
        if (!vocab.add(word)) {
            throw DuplicateWordError("duplicate word '" + word + "' at " +
                                     at_line(path, line_no));
        }
        for (std::int64_t j = 0; j < dim; ++j) {
            float v;
            try {
                v = parse_float(tokens[static_cast<std::size_t>(j) + 1]);
            } catch (const ParseError&) {
                throw ParseError("bad float '" + std::string(tokens[j + 1]) + "' at " +
                                 at_line(path, line_no));
            }
            if (!std::isfinite(v)) {
                throw ParseError("non-finite value '" + std::string(tokens[j + 1]) +
                                 "' at " + at_line(path, line_no));
            }
            values.push_back(v);
        }
        ++rows;
        if (rows > static_cast<std::size_t>(count)) break;
    }
    if (rows != static_cast<std::size_t>(count)) {
        throw FormatError("header declares " + std::to_string(count) + " rows but file has " +
                          std::to_string(rows) + " (" + at_line(path, line_no) + ")");
    }

    EmbeddingMatrix m(std::move(vocab), static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto dst = m.row_mut(i);
        for (std::size_t j = 0; j < m.dim(); ++j) dst[j] = values[i * m.dim() + j];
    }
    return m;
}

void save_word2vec_text(const EmbeddingMatrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write embedding file '" + path + "'");
    out << m.rows() << ' ' << m.dim() << '\n';
    std::string buf;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        buf = m.vocab().word(i);
        auto row = m.row(i);
        for (std::size_t j = 0; j < m.dim(); ++j) {
            buf += ' ';
            buf += format_float(row[j]);
        }
        buf += '\n';
        out << buf;
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

NormalizeResult normalize_rows(const EmbeddingMatrix& m) {
    NormalizeResult result;
    EmbeddingMatrix normalized(m.vocab(), m.dim());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto src = m.row(i);
        auto dst = normalized.row_mut(i);
        double norm_sq = 0.0;
        for (float v : src) norm_sq += static_cast<double>(v) * static_cast<double>(v);
        if (norm_sq == 0.0) {
            ++result.zero_rows;
            continue;  // zero rows stay zero
        }
        const float inv = static_cast<float>(1.0 / std::sqrt(norm_sq));
        for (std::size_t j = 0; j < m.dim(); ++j) dst[j] = src[j] * inv;
    }
    normalized.set_normalized(true);
    result.matrix = std::move(normalized);
    return result;
}

EmbeddingMatrix restrict_to(const EmbeddingMatrix& m, const Vocabulary& vocab) {
    EmbeddingMatrix out(vocab, m.dim());
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        auto src_idx = m.vocab().find(vocab.word(i));
        if (!src_idx) {
            throw MissingWordError("word '" + vocab.word(i) + "' not present in embedding");
        }
        auto src = m.row(*src_idx);
        auto dst = out.row_mut(i);
        for (std::size_t j = 0; j < m.dim(); ++j) dst[j] = src[j];
    }
    out.set_normalized(m.normalized());
    return out;
}

std::vector<float> lookup_or_oov(const EmbeddingMatrix& m, std::string_view word,
                                 const OovPolicy& policy) {
    if (auto row = m.row_for(word)) {
        return std::vector<float>(row->begin(), row->end());
    }
    if (!(policy.stddev > 0.0)) {
        throw ArgumentError("OOV policy stddev must be positive");
    }
    // The stream is keyed on a stable hash of (seed, word), never on any
    // global state, so sweeps are reproducible without persisting vectors.
    Rng rng(mix64(policy.seed ^ fnv1a64(word)));
    std::vector<float> v(m.dim());
    for (std::size_t j = 0; j < m.dim(); ++j) {
        v[j] = static_cast<float>(rng.normal(policy.mean, policy.stddev));
    }
    return v;
}

}  // namespace embkit
