#include "embkit/cli.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "embkit/analogy.hpp"
#include "embkit/dump.hpp"
#include "embkit/embedding.hpp"
#include "embkit/error.hpp"
#include "embkit/extraction.hpp"
#include "embkit/probe.hpp"
#include "embkit/report.hpp"
#include "embkit/rng.hpp"
#include "embkit/text.hpp"
#include "embkit/vocab.hpp"

namespace embkit::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void add_input(RunManifest& m, const std::string& path) {
    m.inputs.emplace_back(path, digest_hex(digest_file(path)));
}

// Flat "key = value" config files, one option per line, '#' comments.
// Values fill only options the command line left unset, so flags always
// win. Unknown keys are an error: sweep configs must stay diffable.
void apply_config_file(CLI::App& cmd, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const std::size_t eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("expected 'key = value' at line " + std::to_string(line_no) +
                              " of '" + path + "'");
        }
        const std::string key(trim(body.substr(0, eq)));
        const std::string value(trim(body.substr(eq + 1)));
        if (key.empty()) {
            throw ConfigError("empty key at line " + std::to_string(line_no) + " of '" + path +
                              "'");
        }
        CLI::Option* opt = key == "config" ? nullptr : cmd.get_option_no_throw("--" + key);
        if (opt == nullptr) {
            throw ConfigError("unknown config key '" + key + "' at line " +
                              std::to_string(line_no) + " of '" + path + "'");
        }
        if (opt->empty()) {
            opt->add_result(value);
            opt->run_callback();
        }
    }
}

// ---------------------------------------------------------------- vocab --

struct VocabIntersectArgs {
    std::vector<std::string> inputs;
    std::string out;
    bool prefilter = false;
    bool nfc = false;
    std::uint64_t seed = 0;
};

int run_vocab_intersect(const VocabIntersectArgs& args) {
    Stopwatch watch;
    std::vector<EmbeddingMatrix> matrices;
    matrices.reserve(args.inputs.size());
    for (const auto& path : args.inputs) {
        matrices.push_back(load_word2vec_text(path, {.nfc = args.nfc}));
    }
    std::vector<const Vocabulary*> vocabs;
    for (const auto& m : matrices) vocabs.push_back(&m.vocab());
    const Vocabulary common =
        intersect_vocabularies(vocabs, {.drop_multiword_and_punct = args.prefilter});
    save_vocab_file(common, args.out);
    std::cout << "intersection: " << common.size() << " words -> " << args.out << "\n";

    RunManifest manifest;
    manifest.command = "vocab intersect";
    manifest.seed = args.seed;
    manifest.config = {{"prefilter", args.prefilter ? "true" : "false"},
                       {"nfc", args.nfc ? "true" : "false"}};
    for (const auto& path : args.inputs) add_input(manifest, path);
    manifest.outputs = {args.out};
    manifest.duration_ms = watch.elapsed_ms();
    write_manifest(manifest, args.out + ".manifest.json");
    return 0;
}

// -------------------------------------------------------------- analogy --

struct AnalogyEvalArgs {
    std::string embedding;
    std::string dataset;
    std::string vocab;
    std::string out_dir;
    std::uint32_t k = 10;
    std::string method = "3cosadd";
    bool include_query_words = false;
    bool lowercase = false;
    bool nfc = false;
    unsigned threads = 1;
    std::uint64_t seed = 0;
};

int run_analogy_eval(const AnalogyEvalArgs& args) {
    Stopwatch watch;
    fs::create_directories(args.out_dir);

    EmbeddingMatrix matrix = load_word2vec_text(args.embedding, {.nfc = args.nfc});
    if (!args.vocab.empty()) {
        matrix = restrict_to(matrix, load_vocab_file(args.vocab));
    }
    matrix = normalize_rows(matrix).matrix;

    AnalogyDataset dataset = parse_analogy_file(args.dataset);
    if (args.lowercase) {
        for (auto& cat : dataset.categories) {
            for (auto& q : cat.questions) {
                q.a = utf8_lowercase(q.a);
                q.b = utf8_lowercase(q.b);
                q.c = utf8_lowercase(q.c);
                q.d = utf8_lowercase(q.d);
            }
        }
    }
    const AnalogyDataset restricted = filter_to_vocab(dataset, matrix.vocab());

    SolveOptions options;
    options.k = args.k;
    options.exclude_query_words = !args.include_query_words;
    if (args.method == "3cosadd") {
        options.method = AnalogyMethod::cos_add;
    } else if (args.method == "3cosmul") {
        options.method = AnalogyMethod::cos_mul;
    } else {
        throw ConfigError("unknown method '" + args.method + "' (expected 3cosadd|3cosmul)");
    }

    const AnalogyResult result = evaluate(matrix, restricted, options, args.threads);

    // Every report names the manifest that produced it.
    const std::string manifest_note = "# manifest: manifest.json\n";
    const fs::path out(args.out_dir);
    write_text_file((out / "results.csv").string(), manifest_note + analogy_result_csv(result));
    ordered_json result_json = ordered_json::parse(analogy_result_json(result));
    result_json["manifest"] = "manifest.json";
    write_text_file((out / "results.json").string(), result_json.dump(2) + "\n");
    write_text_file((out / "filter_report.csv").string(),
                    manifest_note + filter_report_csv(filter_report(restricted)));

    std::cout << "questions: " << restricted.total_questions() << "/" << dataset.total_questions()
              << "  accuracy: " << format_double(result.overall_accuracy)
              << "  overall MRR: " << format_double(result.overall_mrr)
              << "  average MRR: " << format_double(result.average_mrr) << "\n";

    RunManifest manifest;
    manifest.command = "analogy eval";
    manifest.seed = args.seed;
    manifest.config = {{"k", std::to_string(args.k)},
                       {"method", args.method},
                       {"include_query_words", args.include_query_words ? "true" : "false"},
                       {"lowercase", args.lowercase ? "true" : "false"},
                       {"nfc", args.nfc ? "true" : "false"},
                       {"threads", std::to_string(args.threads)}};
    add_input(manifest, args.embedding);
    add_input(manifest, args.dataset);
    if (!args.vocab.empty()) add_input(manifest, args.vocab);
    manifest.outputs = {(out / "results.csv").string(), (out / "results.json").string(),
                        (out / "filter_report.csv").string()};
    manifest.duration_ms = watch.elapsed_ms();
    write_manifest(manifest, (out / "manifest.json").string());
    return 0;
}

// -------------------------------------------------------------- extract --

struct ExtractArgs {
    std::string method;  // de | agg | x2
    std::string dump;
    std::string vocab;
    std::string out;
    std::uint64_t seed = 0;
    // agg
    std::uint64_t cap = 0;  // 0 = unlimited
    std::string scope = "word";
    // x2
    X2StaticConfig x2;
};

int run_extract(const ExtractArgs& args) {
    Stopwatch watch;
    const std::string meta_path = args.out + ".meta.json";
    const std::string manifest_path = args.out + ".manifest.json";
    try {
        const FileDumpSource dump(args.dump);
        const Vocabulary vocab = load_vocab_file(args.vocab);
        const DumpHeader header = dump.open().header();

        ordered_json meta;
        meta["method"] = args.method;
        meta["dump"] = {{"dim", header.dim},
                        {"teacher", header.teacher},
                        {"layer", header.layer}};
        if (header.sentences) meta["dump"]["sentences"] = *header.sentences;
        meta["manifest"] = fs::path(manifest_path).filename().string();

        EmbeddingMatrix matrix;
        if (args.method == "de") {
            matrix = extract_decontextualized(dump, vocab);
            meta["warnings"] = ordered_json::object();
        } else if (args.method == "agg") {
            AggregateOptions options;
            if (args.cap > 0) options.cap = args.cap;
            options.scope =
                args.scope == "sentence" ? OccurrenceScope::sentence : OccurrenceScope::word;
            if (args.scope != "word" && args.scope != "sentence") {
                throw ConfigError("scope must be word or sentence, got '" + args.scope + "'");
            }
            AggregateResult agg = extract_aggregate(dump, vocab, options);
            matrix = std::move(agg.matrix);
            meta["config"] = {{"cap", args.cap}, {"scope", args.scope}};
            meta["warnings"] = {{"unattested_words", agg.missing_words}};
        } else if (args.method == "x2") {
            X2StaticConfig config = args.x2;
            config.seed = args.seed;
            X2StaticResult trained = train_x2static(dump, vocab, config);
            matrix = std::move(trained.matrix);
            meta["config"] = {{"dim", config.dim},
                              {"window", config.window},
                              {"negatives", config.negatives},
                              {"epochs", config.epochs},
                              {"lr0", config.lr0},
                              {"neg_exponent", config.neg_exponent},
                              {"min_count", config.min_count},
                              {"seed", config.seed}};
            meta["warnings"] = {{"skipped_words", trained.skipped_words}};
            meta["stats"] = {{"updates", trained.stats.updates},
                             {"participating_words", trained.stats.participating_words},
                             {"epoch_mean_loss", trained.stats.epoch_mean_loss}};
        } else {
            throw ConfigError("unknown extraction method '" + args.method + "'");
        }

        save_word2vec_text(matrix, args.out);
        write_text_file(meta_path, meta.dump(2) + "\n");
        std::cout << args.method << ": " << matrix.rows() << " x " << matrix.dim() << " -> "
                  << args.out << "\n";

        RunManifest manifest;
        manifest.command = "extract " + args.method;
        manifest.seed = args.seed;
        manifest.config = {{"method", args.method}};
        add_input(manifest, args.dump);
        add_input(manifest, args.vocab);
        manifest.outputs = {args.out, meta_path};
        manifest.duration_ms = watch.elapsed_ms();
        write_manifest(manifest, manifest_path);
        return 0;
    } catch (...) {
        // Never leave partial artifacts behind.
        std::error_code ec;
        fs::remove(args.out, ec);
        fs::remove(meta_path, ec);
        fs::remove(manifest_path, ec);
        throw;
    }
}

// ---------------------------------------------------------------- probe --

struct ProbeSweepArgs {
    std::string train;
    std::string dev;
    std::string test;
    std::string embedding;
    std::string out_dir;
    std::string name;  // row label; defaults to the embedding file stem
    std::vector<std::uint32_t> hidden_sizes;
    std::size_t word_column = 0;
    std::size_t tag_column = 1;
    std::uint32_t epochs = 5;
    std::uint32_t batch_size = 32;
    double dropout = 0.5;
    std::uint32_t max_len = 512;
    std::uint32_t chart_min_hidden = 0;
    std::uint64_t seed = 0;
};

std::string metrics_csv(const std::vector<EpochMetrics>& epochs) {
    std::string csv = "# manifest: manifest.json\nepoch,split,loss,accuracy\n";
    for (std::size_t e = 0; e < epochs.size(); ++e) {
        csv += std::to_string(e + 1) + ",train," + format_double(epochs[e].train_loss) + ",\n";
        if (epochs[e].dev_accuracy) {
            csv += std::to_string(e + 1) + ",dev,," + format_double(*epochs[e].dev_accuracy) +
                   "\n";
        }
    }
    return csv;
}

int run_probe_sweep(const ProbeSweepArgs& args) {
    Stopwatch watch;
    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);

    const TaggedCorpus train = load_conll(args.train, args.word_column, args.tag_column);
    const TaggedCorpus dev = load_conll(args.dev, args.word_column, args.tag_column);
    const TaggedCorpus test = load_conll(args.test, args.word_column, args.tag_column);
    if (train.sentences.empty()) throw DataError("training corpus is empty");
    const EmbeddingMatrix embeddings = load_word2vec_text(args.embedding);

    ProbeConfig config;
    config.epochs = args.epochs;
    config.batch_size = args.batch_size;
    config.dropout_rate = args.dropout;
    config.max_sentence_len = args.max_len;
    config.seed = args.seed;
    config.oov.seed = derive_seed(args.seed, "oov");

    const std::string row_name =
        args.name.empty() ? fs::path(args.embedding).stem().string() : args.name;

    struct CellOutcome {
        std::uint32_t hidden;
        std::optional<SweepCell> cell;
        std::string error;
    };
    std::vector<CellOutcome> outcomes;
    std::vector<std::string> outputs;
    bool any_failed = false;
    for (std::uint32_t hidden : args.hidden_sizes) {
        CellOutcome outcome;
        outcome.hidden = hidden;
        try {
            const std::uint32_t sizes[] = {hidden};
            SweepResult one = sweep_probe(train, dev, test, embeddings, sizes, config);
            outcome.cell = std::move(one.cells.front());
            const std::string metrics_path =
                (out / ("metrics_h" + std::to_string(hidden) + ".csv")).string();
            write_text_file(metrics_path, metrics_csv(outcome.cell->epochs));
            outputs.push_back(metrics_path);
        } catch (const Error& e) {
            any_failed = true;
            outcome.error = e.what();
            std::cerr << "hidden " << hidden << " failed: " << e.what() << "\n";
        }
        outcomes.push_back(std::move(outcome));
    }

    // Grid over the completed cells, Table-style: one row per embedding,
    // one column per hidden size, accuracy in percent.
    std::string grid = "# manifest: manifest.json\nembedding";
    for (const auto& outcome : outcomes) {
        if (outcome.cell) grid += "," + std::to_string(outcome.hidden);
    }
    grid += "\n" + row_name;
    for (const auto& outcome : outcomes) {
        if (outcome.cell) grid += "," + format_double(outcome.cell->test_accuracy * 100.0);
    }
    grid += "\n";
    const std::string grid_path = (out / "grid.csv").string();
    write_text_file(grid_path, grid);
    outputs.push_back(grid_path);

    ordered_json summary;
    summary["embedding"] = row_name;
    summary["seed"] = args.seed;
    summary["manifest"] = "manifest.json";
    summary["cells"] = ordered_json::array();
    for (const auto& outcome : outcomes) {
        ordered_json cell;
        cell["hidden"] = outcome.hidden;
        if (outcome.cell) {
            cell["test_accuracy"] = outcome.cell->test_accuracy;
            cell["best_dev_test_accuracy"] = outcome.cell->best_dev_test_accuracy;
        } else {
            cell["error"] = outcome.error;
        }
        summary["cells"].push_back(std::move(cell));
    }
    const std::string summary_path = (out / "sweep.json").string();
    write_text_file(summary_path, summary.dump(2) + "\n");
    outputs.push_back(summary_path);

    ChartSeries series;
    series.name = row_name;
    for (const auto& outcome : outcomes) {
        if (outcome.cell && outcome.hidden >= args.chart_min_hidden) {
            series.points.emplace_back(static_cast<double>(outcome.hidden),
                                       outcome.cell->test_accuracy * 100.0);
        }
    }
    if (!series.points.empty()) {
        ChartSpec spec;
        spec.title = "Test accuracy across hidden sizes";
        spec.x_label = "hidden size";
        spec.y_label = "accuracy (%)";
        spec.series.push_back(std::move(series));
        std::string svg = svg_line_chart(spec);
        const std::string decl = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        svg.insert(decl.size(), "<!-- manifest: manifest.json -->\n");
        const std::string chart_path = (out / "chart.svg").string();
        write_text_file(chart_path, svg);
        outputs.push_back(chart_path);
    }

    for (const auto& outcome : outcomes) {
        if (outcome.cell) {
            std::cout << "hidden " << outcome.hidden << ": test accuracy "
                      << format_double(outcome.cell->test_accuracy) << "\n";
        }
    }

    RunManifest manifest;
    manifest.command = "probe sweep";
    manifest.seed = args.seed;
    std::string sizes_str;
    for (auto h : args.hidden_sizes) {
        if (!sizes_str.empty()) sizes_str += ',';
        sizes_str += std::to_string(h);
    }
    manifest.config = {{"hidden", sizes_str},
                       {"epochs", std::to_string(args.epochs)},
                       {"batch_size", std::to_string(args.batch_size)},
                       {"dropout", format_double(args.dropout)},
                       {"max_len", std::to_string(args.max_len)},
                       {"word_column", std::to_string(args.word_column)},
                       {"tag_column", std::to_string(args.tag_column)},
                       {"chart_min_hidden", std::to_string(args.chart_min_hidden)},
                       {"name", row_name}};
    add_input(manifest, args.train);
    add_input(manifest, args.dev);
    add_input(manifest, args.test);
    add_input(manifest, args.embedding);
    manifest.outputs = outputs;
    manifest.duration_ms = watch.elapsed_ms();
    write_manifest(manifest, (out / "manifest.json").string());
    return any_failed ? 1 : 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("embkit");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
    CLI::App app{"static word embedding toolkit: extraction, analogy evaluation, BiLSTM probes"};
    app.require_subcommand(1);

    int exit_code = 0;

    // vocab intersect
    auto* vocab_cmd = app.add_subcommand("vocab", "vocabulary operations");
    vocab_cmd->require_subcommand(1);
    auto intersect_args = std::make_shared<VocabIntersectArgs>();
    auto* intersect_cmd =
        vocab_cmd->add_subcommand("intersect", "intersect the vocabularies of embedding files");
    intersect_cmd->add_option("inputs", intersect_args->inputs, "word2vec text files")
        ->required()
        ->expected(-1);
    intersect_cmd->add_option("--out", intersect_args->out, "output vocabulary file")->required();
    intersect_cmd->add_flag("--prefilter", intersect_args->prefilter,
                            "drop multiword ('_'-joined) and punctuation-only tokens");
    intersect_cmd->add_flag("--nfc", intersect_args->nfc, "NFC-normalize words at load");
    intersect_cmd->add_option("--seed", intersect_args->seed, "seed (recorded in the manifest)");
    auto intersect_config = std::make_shared<std::string>();
    intersect_cmd->add_option("--config", *intersect_config,
                              "flat key=value config; flags override");
    intersect_cmd->callback([&, intersect_args, intersect_config, intersect_cmd] {
        if (!intersect_config->empty()) apply_config_file(*intersect_cmd, *intersect_config);
        exit_code = run_vocab_intersect(*intersect_args);
    });

    // analogy eval
    auto* analogy_cmd = app.add_subcommand("analogy", "word-analogy benchmark");
    analogy_cmd->require_subcommand(1);
    auto eval_args = std::make_shared<AnalogyEvalArgs>();
    auto* eval_cmd = analogy_cmd->add_subcommand(
        "eval", "normalize, filter to the vocabulary, and score an analogy dataset");
    eval_cmd->add_option("--embedding", eval_args->embedding, "word2vec text file")->required();
    eval_cmd->add_option("--dataset", eval_args->dataset, "analogy question file")->required();
    eval_cmd->add_option("--vocab", eval_args->vocab,
                         "restrict the embedding to this vocabulary first");
    eval_cmd->add_option("--k", eval_args->k, "rank cutoff")->default_val(10);
    eval_cmd->add_option("--method", eval_args->method, "3cosadd|3cosmul")
        ->default_val("3cosadd");
    eval_cmd->add_flag("--include-query-words", eval_args->include_query_words,
                       "let a, b, c compete as candidates");
    eval_cmd->add_flag("--lowercase", eval_args->lowercase, "lowercase question words");
    eval_cmd->add_flag("--nfc", eval_args->nfc, "NFC-normalize embedding words at load");
    eval_cmd->add_option("--threads", eval_args->threads, "worker threads")->default_val(1);
    eval_cmd->add_option("--out", eval_args->out_dir, "output directory")->required();
    eval_cmd->add_option("--seed", eval_args->seed, "seed (recorded in the manifest)");
    auto eval_config = std::make_shared<std::string>();
    eval_cmd->add_option("--config", *eval_config, "flat key=value config; flags override");
    eval_cmd->callback([&, eval_args, eval_config, eval_cmd] {
        if (!eval_config->empty()) apply_config_file(*eval_cmd, *eval_config);
        exit_code = run_analogy_eval(*eval_args);
    });

    // extract de|agg|x2
    auto* extract_cmd = app.add_subcommand("extract", "static embedding extraction from dumps");
    extract_cmd->require_subcommand(1);
    auto extract_args = std::make_shared<ExtractArgs>();
    auto extract_config = std::make_shared<std::string>();
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--dump", extract_args->dump, "teacher dump file")->required();
        sub->add_option("--vocab", extract_args->vocab, "vocabulary file")->required();
        sub->add_option("--out", extract_args->out, "output word2vec text file")->required();
        sub->add_option("--seed", extract_args->seed, "seed");
        sub->add_option("--config", *extract_config, "flat key=value config; flags override");
    };
    auto* de_cmd = extract_cmd->add_subcommand(
        "de", "decontextualized: pooled vectors of single-word inputs");
    add_common(de_cmd);
    de_cmd->callback([&, extract_args, extract_config, de_cmd] {
        if (!extract_config->empty()) apply_config_file(*de_cmd, *extract_config);
        extract_args->method = "de";
        exit_code = run_extract(*extract_args);
    });
    auto* agg_cmd =
        extract_cmd->add_subcommand("agg", "aggregate: mean over corpus occurrences");
    add_common(agg_cmd);
    agg_cmd->add_option("--cap", extract_args->cap, "max occurrences per word (0 = unlimited)");
    agg_cmd->add_option("--scope", extract_args->scope,
                        "occurrence vector: word|sentence")
        ->default_val("word");
    agg_cmd->callback([&, extract_args, extract_config, agg_cmd] {
        if (!extract_config->empty()) apply_config_file(*agg_cmd, *extract_config);
        extract_args->method = "agg";
        exit_code = run_extract(*extract_args);
    });
    auto* x2_cmd = extract_cmd->add_subcommand(
        "x2", "distilled static embeddings trained against teacher contexts");
    add_common(x2_cmd);
    x2_cmd->add_option("--dim", extract_args->x2.dim, "output dimension (0 = teacher dim)");
    x2_cmd->add_option("--window", extract_args->x2.window, "context half-width")->default_val(5);
    x2_cmd->add_option("--negatives", extract_args->x2.negatives, "negative samples")
        ->default_val(5);
    x2_cmd->add_option("--epochs", extract_args->x2.epochs, "training epochs")->default_val(5);
    x2_cmd->add_option("--lr0", extract_args->x2.lr0, "initial learning rate")
        ->default_val(0.05);
    x2_cmd->add_option("--neg-exponent", extract_args->x2.neg_exponent,
                       "unigram distribution power")
        ->default_val(0.75);
    x2_cmd->add_option("--min-count", extract_args->x2.min_count, "frequency floor")
        ->default_val(5);
    x2_cmd->callback([&, extract_args, extract_config, x2_cmd] {
        if (!extract_config->empty()) apply_config_file(*x2_cmd, *extract_config);
        extract_args->method = "x2";
        exit_code = run_extract(*extract_args);
    });

    // probe sweep
    auto* probe_cmd = app.add_subcommand("probe", "BiLSTM tagging probe");
    probe_cmd->require_subcommand(1);
    auto sweep_args = std::make_shared<ProbeSweepArgs>();
    auto* sweep_cmd = probe_cmd->add_subcommand(
        "sweep", "train one probe per hidden size and report the accuracy grid");
    sweep_cmd->add_option("--train", sweep_args->train, "training corpus (CoNLL TSV)")
        ->required();
    sweep_cmd->add_option("--dev", sweep_args->dev, "development corpus")->required();
    sweep_cmd->add_option("--test", sweep_args->test, "test corpus")->required();
    sweep_cmd->add_option("--embedding", sweep_args->embedding, "word2vec text file")->required();
    sweep_cmd->add_option("--hidden", sweep_args->hidden_sizes, "hidden sizes, e.g. 1,2,4,8")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--word-col", sweep_args->word_column, "word column")->default_val(0);
    sweep_cmd->add_option("--tag-col", sweep_args->tag_column, "tag column")->default_val(1);
    sweep_cmd->add_option("--epochs", sweep_args->epochs, "training epochs")->default_val(5);
    sweep_cmd->add_option("--batch", sweep_args->batch_size, "batch size")->default_val(32);
    sweep_cmd->add_option("--dropout", sweep_args->dropout, "dropout rate")->default_val(0.5);
    sweep_cmd->add_option("--max-len", sweep_args->max_len,
                          "split sentences longer than this")
        ->default_val(512);
    sweep_cmd->add_option("--chart-min-hidden", sweep_args->chart_min_hidden,
                          "exclude smaller hidden sizes from the chart only");
    sweep_cmd->add_option("--name", sweep_args->name, "row label (default: embedding stem)");
    sweep_cmd->add_option("--out", sweep_args->out_dir, "output directory")->required();
    sweep_cmd->add_option("--seed", sweep_args->seed, "master seed");
    auto sweep_config = std::make_shared<std::string>();
    sweep_cmd->add_option("--config", *sweep_config, "flat key=value config; flags override");
    sweep_cmd->callback([&, sweep_args, sweep_config, sweep_cmd] {
        if (!sweep_config->empty()) apply_config_file(*sweep_cmd, *sweep_config);
        exit_code = run_probe_sweep(*sweep_args);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}

}  // namespace embkit::cli
