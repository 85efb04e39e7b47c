#include "embkit/analogy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "embkit/error.hpp"
#include "embkit/text.hpp"

namespace embkit {

using ordered_json = nlohmann::ordered_json;

std::size_t AnalogyDataset::total_questions() const {
    std::size_t n = 0;
    for (const auto& c : categories) n += c.questions.size();
    return n;
}

AnalogyDataset parse_analogy_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open analogy file '" + path + "'");
    AnalogyDataset ds;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view body = trim(line);
        if (body.empty()) continue;
        if (body.front() == ':') {
            std::string name(trim(body.substr(1)));
            if (name.empty()) {
                throw FormatError("empty category name at line " + std::to_string(line_no) +
                                  " of '" + path + "'");
            }
            for (const auto& c : ds.categories) {
                if (c.name == name) {
                    throw FormatError("duplicate category '" + name + "' at line " +
                                      std::to_string(line_no) + " of '" + path + "'");
                }
            }
            ds.categories.push_back({name, {}, 0});
            continue;
        }
        auto tokens = split_whitespace(body);
        if (tokens.size() != 4) {
            throw FormatError("question line has " + std::to_string(tokens.size()) +
                              " tokens, expected 4, at line " + std::to_string(line_no) +
                              " of '" + path + "'");
        }
        if (ds.categories.empty()) {
            throw FormatError("question before any ': <category>' header at line " +
                              std::to_string(line_no) + " of '" + path + "'");
        }
        ds.categories.back().questions.push_back({std::string(tokens[0]), std::string(tokens[1]),
                                                  std::string(tokens[2]), std::string(tokens[3])});
    }
    for (auto& c : ds.categories) c.original_count = c.questions.size();
    return ds;
}

AnalogyDataset filter_to_vocab(const AnalogyDataset& ds, const Vocabulary& vocab) {
    AnalogyDataset out;
    out.categories.reserve(ds.categories.size());
    for (const auto& cat : ds.categories) {
        AnalogyCategory kept;
        kept.name = cat.name;
        kept.original_count = cat.original_count;
        for (const auto& q : cat.questions) {
            if (vocab.contains(q.a) && vocab.contains(q.b) && vocab.contains(q.c) &&
                vocab.contains(q.d)) {
                kept.questions.push_back(q);
            }
        }
        out.categories.push_back(std::move(kept));
    }
    return out;
}

std::vector<FilterRow> filter_report(const AnalogyDataset& ds) {
    std::vector<FilterRow> rows;
    rows.reserve(ds.categories.size());
    for (const auto& c : ds.categories) {
        FilterRow row;
        row.name = c.name;
        row.original = c.original_count;
        row.restricted = c.questions.size();
        row.ratio = c.original_count == 0
                        ? 0.0
                        : static_cast<double>(row.restricted) / static_cast<double>(row.original);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

// 32-bit accumulation throughout the scoring path; this is the precision
// contract the exhaustive-sort oracle mirrors.
float dot_f32(std::span<const float> x, std::span<const float> y) {
    float acc = 0.0f;
    for (std::size_t j = 0; j < x.size(); ++j) acc += x[j] * y[j];
    return acc;
}

struct Candidate {
    float score;
    std::uint32_t index;
};

bool better(const Candidate& x, const Candidate& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.index < y.index;
}

std::size_t require_word(const EmbeddingMatrix& m, const std::string& w) {
    auto idx = m.vocab().find(w);
    if (!idx) throw MissingWordError("query word '" + w + "' not in vocabulary");
    return *idx;
}

}  // namespace

std::vector<ScoredWord> solve_analogy(const EmbeddingMatrix& m, const std::string& a,
                                      const std::string& b, const std::string& c,
                                      const SolveOptions& options) {
    if (!m.normalized()) {
        throw ArgumentError("solve_analogy requires a row-normalized matrix");
    }
    if (options.k == 0) throw ArgumentError("k must be positive");
    const std::size_t ia = require_word(m, a);
    const std::size_t ib = require_word(m, b);
    const std::size_t ic = require_word(m, c);
    const std::size_t dim = m.dim();

    std::vector<std::size_t> excluded;
    if (options.exclude_query_words) {
        excluded = {ia, ib, ic};
        std::sort(excluded.begin(), excluded.end());
        excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
    }
    const std::size_t k =
        std::min<std::size_t>(options.k, m.rows() - excluded.size());

    std::vector<float> query(dim);
    {
        auto va = m.row(ia);
        auto vb = m.row(ib);
        auto vc = m.row(ic);
        float norm_sq = 0.0f;
        for (std::size_t j = 0; j < dim; ++j) {
            query[j] = vb[j] - va[j] + vc[j];
            norm_sq += query[j] * query[j];
        }
        if (norm_sq > 0.0f) {
            const float inv = 1.0f / std::sqrt(norm_sq);
            for (std::size_t j = 0; j < dim; ++j) query[j] *= inv;
        } else {
            std::fill(query.begin(), query.end(), 0.0f);
        }
    }

    std::vector<Candidate> top;
    top.reserve(k + 1);
    auto consider = [&](Candidate cand) {
        if (top.size() == k && !better(cand, top.back())) return;
        auto pos = top.end();
        while (pos != top.begin() && better(cand, *(pos - 1))) --pos;
        top.insert(pos, cand);
        if (top.size() > k) top.pop_back();
    };

    const bool mul = options.method == AnalogyMethod::cos_mul;
    auto row_a = m.row(ia);
    auto row_b = m.row(ib);
    auto row_c = m.row(ic);
    std::size_t next_excluded = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (next_excluded < excluded.size() && excluded[next_excluded] == i) {
            ++next_excluded;
            continue;
        }
        float score;
        if (mul) {
            // Shifted cosines keep every factor positive.
            auto v = m.row(i);
            const float sa = (1.0f + dot_f32(v, row_a)) * 0.5f;
            const float sb = (1.0f + dot_f32(v, row_b)) * 0.5f;
            const float sc = (1.0f + dot_f32(v, row_c)) * 0.5f;
            score = sb * sc / (sa + 0.001f);
        } else {
            score = dot_f32(m.row(i), query);
        }
        consider({score, static_cast<std::uint32_t>(i)});
    }

    std::vector<ScoredWord> out;
    out.reserve(top.size());
    for (const auto& cand : top) {
        out.push_back({m.vocab().word(cand.index), cand.score});
    }
    return out;
}

namespace {

// Rank of the gold answer in the top-k list, 0 when absent. Keeping the
// integer rank (not the reciprocal) lets aggregation run over rank
// histograms, which makes every reported number exactly invariant under
// question and category permutations.
std::size_t question_rank(const EmbeddingMatrix& m, const AnalogyQuestion& q,
                          const SolveOptions& options) {
    if (!m.vocab().contains(q.a) || !m.vocab().contains(q.b) || !m.vocab().contains(q.c) ||
        !m.vocab().contains(q.d)) {
        throw MissingWordError("question '" + q.a + " " + q.b + " " + q.c + " " + q.d +
                               "' contains a word outside the vocabulary; filter first");
    }
    auto ranked = solve_analogy(m, q.a, q.b, q.c, options);
    for (std::size_t r = 0; r < ranked.size(); ++r) {
        if (ranked[r].word == q.d) return r + 1;
    }
    return 0;
}

double mrr_from_histogram(const std::vector<std::size_t>& rank_counts, std::size_t n) {
    if (n == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t r = 1; r < rank_counts.size(); ++r) {
        sum += static_cast<double>(rank_counts[r]) / static_cast<double>(r);
    }
    return sum / static_cast<double>(n);
}

}  // namespace

AnalogyResult evaluate(const EmbeddingMatrix& m, const AnalogyDataset& ds,
                       const SolveOptions& options, unsigned threads) {
    struct Slot {
        const AnalogyQuestion* q;
        std::size_t category;
    };
    std::vector<Slot> slots;
    for (std::size_t c = 0; c < ds.categories.size(); ++c) {
        for (const auto& q : ds.categories[c].questions) slots.push_back({&q, c});
    }

    std::vector<std::size_t> ranks(slots.size());
    if (threads <= 1 || slots.size() < 2) {
        for (std::size_t i = 0; i < slots.size(); ++i) {
            ranks[i] = question_rank(m, *slots[i].q, options);
        }
    } else {
        const unsigned n_workers = std::min<unsigned>(threads, static_cast<unsigned>(slots.size()));
        std::vector<std::thread> workers;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (unsigned w = 0; w < n_workers; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < slots.size(); i += n_workers) {
                        ranks[i] = question_rank(m, *slots[i].q, options);
                    }
                } catch (...) {
                    std::scoped_lock lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& t : workers) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    // Histogram reduction: identical results whatever the worker count or
    // the question/category ordering.
    AnalogyResult result;
    result.k = options.k;
    std::vector<std::size_t> overall_hist(options.k + 1, 0);
    std::size_t total_n = 0;
    std::size_t slot = 0;
    for (const auto& cat : ds.categories) {
        CategoryResult cr;
        cr.name = cat.name;
        cr.n = cat.questions.size();
        std::vector<std::size_t> hist(options.k + 1, 0);
        for (std::size_t i = 0; i < cat.questions.size(); ++i, ++slot) {
            ++hist[ranks[slot]];
            ++overall_hist[ranks[slot]];
        }
        cr.accuracy = cr.n == 0
                          ? 0.0
                          : static_cast<double>(hist.size() > 1 ? hist[1] : 0) /
                                static_cast<double>(cr.n);
        cr.mrr = mrr_from_histogram(hist, cr.n);
        total_n += cr.n;
        result.per_category.push_back(std::move(cr));
    }
    result.overall_accuracy =
        total_n == 0 ? 0.0
                     : static_cast<double>(overall_hist.size() > 1 ? overall_hist[1] : 0) /
                           static_cast<double>(total_n);
    result.overall_mrr = mrr_from_histogram(overall_hist, total_n);

    // Mean over categories, summed in value order so category permutations
    // cannot shift the floating-point result.
    if (!result.per_category.empty()) {
        std::vector<double> mrrs;
        mrrs.reserve(result.per_category.size());
        for (const auto& cr : result.per_category) mrrs.push_back(cr.mrr);
        std::sort(mrrs.begin(), mrrs.end());
        double sum = 0.0;
        for (double v : mrrs) sum += v;
        result.average_mrr = sum / static_cast<double>(mrrs.size());
    }
    return result;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += "\"\"";
        else quoted.push_back(ch);
    }
    quoted += '"';
    return quoted;
}

}  // namespace

std::string analogy_result_csv(const AnalogyResult& r) {
    std::string out = "category,n,accuracy,mrr\n";
    std::size_t total_n = 0;
    for (const auto& c : r.per_category) {
        total_n += c.n;
        out += csv_field(c.name) + "," + std::to_string(c.n) + "," + format_double(c.accuracy) +
               "," + format_double(c.mrr) + "\n";
    }
    out += "overall_accuracy," + std::to_string(total_n) + "," +
           format_double(r.overall_accuracy) + ",\n";
    out += "overall_mrr," + std::to_string(total_n) + ",," + format_double(r.overall_mrr) + "\n";
    out += "average_mrr," + std::to_string(total_n) + ",," + format_double(r.average_mrr) + "\n";
    return out;
}

std::string analogy_result_json(const AnalogyResult& r) {
    ordered_json j;
    j["k"] = r.k;
    j["overall_accuracy"] = r.overall_accuracy;
    j["overall_mrr"] = r.overall_mrr;
    j["average_mrr"] = r.average_mrr;
    j["categories"] = ordered_json::array();
    for (const auto& c : r.per_category) {
        ordered_json jc;
        jc["name"] = c.name;
        jc["n"] = c.n;
        jc["accuracy"] = c.accuracy;
        jc["mrr"] = c.mrr;
        j["categories"].push_back(std::move(jc));
    }
    return j.dump(2) + "\n";
}

std::string filter_report_csv(const std::vector<FilterRow>& rows) {
    std::string out = "category,original,restricted,ratio\n";
    for (const auto& row : rows) {
        out += csv_field(row.name) + "," + std::to_string(row.original) + "," +
               std::to_string(row.restricted) + "," + format_double(row.ratio) + "\n";
    }
    return out;
}

}  // namespace embkit
