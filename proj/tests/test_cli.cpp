#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "embkit/cli.hpp"
#include "embkit/dump.hpp"
#include "embkit/probe.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"

using embkit::cli::run;
namespace fs = std::filesystem;

namespace {

void write_tagged(const embkit::TaggedCorpus& corpus, const std::string& path) {
    std::string text;
    for (const auto& s : corpus.sentences) {
        for (std::size_t t = 0; t < s.words.size(); ++t) {
            text += s.words[t] + "\t" + corpus.tagset[s.tags[t]] + "\n";
        }
        text += "\n";
    }
    write_file(path, text);
}

int count_occurrences(const std::string& haystack, const std::string& needle) {
    int n = 0;
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

}  // namespace

TEST_CASE("vocab intersect writes the common words and a manifest") {
    TempDir dir;
    write_file(dir.file("a.vec"), "3 2\nalma 1 0\nfa 0 1\nkert 1 1\n");
    write_file(dir.file("b.vec"), "2 2\nfa 1 0\nalma 0 1\n");
    const auto out = dir.file("common.txt");

    CHECK(run({"vocab", "intersect", dir.file("a.vec"), dir.file("b.vec"), "--out", out}) == 0);
    CHECK(read_file(out) == "alma\nfa\n");
    const auto manifest = nlohmann::json::parse(read_file(out + ".manifest.json"));
    CHECK(manifest["command"] == "vocab intersect");
    CHECK(manifest["inputs"].size() == 2);

    // single input: identity
    const auto solo = dir.file("solo.txt");
    CHECK(run({"vocab", "intersect", dir.file("a.vec"), "--out", solo}) == 0);
    CHECK(read_file(solo) == "alma\nfa\nkert\n");
}

TEST_CASE("failing commands exit nonzero") {
    TempDir dir;
    CHECK(run({"vocab", "intersect", dir.file("missing.vec"), "--out", dir.file("o")}) != 0);
    CHECK(run({"analogy"}) != 0);
    CHECK(run({"definitely-not-a-command"}) != 0);
}

namespace {

void write_analogy_fixture(const TempDir& dir) {
    // planted so that g1 ranks first, g2 second, g3 third
    const double s = 1.0 / std::sqrt(3.0);
    write_file(dir.file("emb.vec"),
               "6 4\n"
               "a 1 0 0 0\n"
               "b 0 1 0 0\n"
               "c 0 0 1 0\n"
               "g1 " + std::to_string(-s) + " " + std::to_string(s) + " " + std::to_string(s) +
                   " 0\n"
               "g2 " + std::to_string(-0.5 * s) + " " + std::to_string(0.5 * s) + " " +
                   std::to_string(0.5 * s) + " 0.8660254\n"
               "g3 0 0 0 1\n");
    write_file(dir.file("questions.txt"),
               ": planted\na b c g1\na b c g2\na b c g3\n");
}

}  // namespace

TEST_CASE("analogy eval writes csv, json, and the filtering report") {
    TempDir dir;
    write_analogy_fixture(dir);
    const auto out = dir.file("report");

    CHECK(run({"analogy", "eval", "--embedding", dir.file("emb.vec"), "--dataset",
               dir.file("questions.txt"), "--k", "2", "--out", out}) == 0);

    const std::string csv = read_file((fs::path(out) / "results.csv").string());
    CHECK(csv.rfind("# manifest: manifest.json\n", 0) == 0);
    CHECK(count_occurrences(csv, "\n") == 6);  // manifest note + header + 1 category + 3 summary
    CHECK(csv.find("category,n,accuracy,mrr\n") != std::string::npos);
    CHECK(csv.find("planted,3,") != std::string::npos);

    const auto j = nlohmann::json::parse(read_file((fs::path(out) / "results.json").string()));
    CHECK(j["overall_accuracy"].get<double>() == doctest::Approx(1.0 / 3.0));
    CHECK(j["overall_mrr"].get<double>() == doctest::Approx(0.5));

    const std::string filter = read_file((fs::path(out) / "filter_report.csv").string());
    CHECK(filter.find("planted,3,3,1") != std::string::npos);
}

TEST_CASE("analogy eval with k=1 forces overall_mrr == overall_accuracy") {
    TempDir dir;
    write_analogy_fixture(dir);
    const auto out = dir.file("k1");
    CHECK(run({"analogy", "eval", "--embedding", dir.file("emb.vec"), "--dataset",
               dir.file("questions.txt"), "--k", "1", "--out", out}) == 0);
    const auto j = nlohmann::json::parse(read_file((fs::path(out) / "results.json").string()));
    CHECK(j["overall_mrr"].get<double>() == j["overall_accuracy"].get<double>());
}

TEST_CASE("analogy eval honors config files with flag precedence") {
    TempDir dir;
    write_analogy_fixture(dir);
    write_file(dir.file("run.cfg"), "# sweep config\nk = 5\nthreads = 1\n");

    const auto from_config = dir.file("cfgrun");
    CHECK(run({"analogy", "eval", "--embedding", dir.file("emb.vec"), "--dataset",
               dir.file("questions.txt"), "--config", dir.file("run.cfg"), "--out",
               from_config}) == 0);
    auto j = nlohmann::json::parse(read_file((fs::path(from_config) / "results.json").string()));
    CHECK(j["k"] == 5);

    const auto overridden = dir.file("flagrun");
    CHECK(run({"analogy", "eval", "--embedding", dir.file("emb.vec"), "--dataset",
               dir.file("questions.txt"), "--config", dir.file("run.cfg"), "--k", "3", "--out",
               overridden}) == 0);
    j = nlohmann::json::parse(read_file((fs::path(overridden) / "results.json").string()));
    CHECK(j["k"] == 3);
}

namespace {

void write_extract_fixture(const TempDir& dir) {
    embkit::DumpHeader header;
    header.dim = 2;
    header.teacher = "toy";
    {
        auto writer = embkit::DumpWriter::open_file(dir.file("single.dump"), header);
        for (const auto& [word, x, y] :
             std::vector<std::tuple<std::string, float, float>>{
                 {"alma", 1.0f, 0.0f}, {"fa", 0.0f, 2.0f}, {"kert", 3.0f, 3.0f}}) {
            embkit::SentenceRecord rec;
            rec.words = {word};
            rec.subword_vectors = {{x, y}};
            rec.alignment = {{0}};
            writer.write(rec);
        }
    }
    {
        auto writer = embkit::DumpWriter::open_file(dir.file("corpus.dump"), header);
        auto sentence = [&](std::vector<std::pair<std::string, std::pair<float, float>>> words) {
            embkit::SentenceRecord rec;
            std::uint32_t i = 0;
            for (auto& [w, v] : words) {
                rec.words.push_back(w);
                rec.subword_vectors.push_back({v.first, v.second});
                rec.alignment.push_back({i++});
            }
            writer.write(rec);
        };
        sentence({{"alma", {1, 0}}, {"fa", {0, 2}}});
        sentence({{"alma", {3, 0}}, {"kert", {5, 5}}});
        sentence({{"fa", {0, 4}}, {"alma", {5, 0}}});
    }
    write_file(dir.file("vocab.txt"), "alma\nfa\nkert\n");
}

}  // namespace

TEST_CASE("extract de writes the matrix, sidecar, and manifest") {
    TempDir dir;
    write_extract_fixture(dir);
    const auto out = dir.file("de.vec");
    CHECK(run({"extract", "de", "--dump", dir.file("single.dump"), "--vocab",
               dir.file("vocab.txt"), "--out", out}) == 0);
    CHECK(read_file(out) == "3 2\nalma 1 0\nfa 0 2\nkert 3 3\n");
    const auto meta = nlohmann::json::parse(read_file(out + ".meta.json"));
    CHECK(meta["method"] == "de");
    CHECK(meta["dump"]["dim"] == 2);
    CHECK(fs::exists(out + ".manifest.json"));
}

TEST_CASE("extract failures leave no partial outputs behind") {
    TempDir dir;
    write_extract_fixture(dir);
    write_file(dir.file("bigvocab.txt"), "alma\nfa\nkert\nhianyzik\n");
    const auto out = dir.file("de.vec");
    CHECK(run({"extract", "de", "--dump", dir.file("single.dump"), "--vocab",
               dir.file("bigvocab.txt"), "--out", out}) != 0);
    CHECK_FALSE(fs::exists(out));
    CHECK_FALSE(fs::exists(out + ".meta.json"));
    CHECK_FALSE(fs::exists(out + ".manifest.json"));
}

TEST_CASE("extract agg with cap=1 equals first-occurrence extraction") {
    TempDir dir;
    write_extract_fixture(dir);
    const auto capped = dir.file("agg1.vec");
    CHECK(run({"extract", "agg", "--dump", dir.file("corpus.dump"), "--vocab",
               dir.file("vocab.txt"), "--out", capped, "--cap", "1"}) == 0);
    CHECK(read_file(capped) == "3 2\nalma 1 0\nfa 0 2\nkert 5 5\n");

    const auto full = dir.file("agg.vec");
    CHECK(run({"extract", "agg", "--dump", dir.file("corpus.dump"), "--vocab",
               dir.file("vocab.txt"), "--out", full}) == 0);
    CHECK(read_file(full) == "3 2\nalma 3 0\nfa 0 3\nkert 5 5\n");
}

TEST_CASE("extract x2 is byte-reproducible for a fixed seed") {
    TempDir dir;
    write_extract_fixture(dir);
    const auto out = dir.file("x2.vec");
    const std::vector<std::string> args = {"extract",      "x2",
                                           "--dump",       dir.file("corpus.dump"),
                                           "--vocab",      dir.file("vocab.txt"),
                                           "--min-count",  "1",
                                           "--epochs",     "2",
                                           "--seed",       "77",
                                           "--out",        out};
    CHECK(run(args) == 0);
    const std::string first_vec = read_file(out);
    const std::string first_meta = read_file(out + ".meta.json");

    CHECK(run(args) == 0);
    CHECK(read_file(out) == first_vec);
    CHECK(read_file(out + ".meta.json") == first_meta);

    auto reseeded = args;
    reseeded[reseeded.size() - 3] = "78";  // --seed value
    CHECK(run(reseeded) == 0);
    CHECK(read_file(out) != first_vec);
}

TEST_CASE("probe sweep emits grid, metrics, summary, chart, and manifest") {
    TempDir dir;
    const auto fixture = synthetic::lookup_task(31);
    write_tagged(fixture.train, dir.file("train.tsv"));
    write_tagged(fixture.dev, dir.file("dev.tsv"));
    write_tagged(fixture.test, dir.file("test.tsv"));
    embkit::save_word2vec_text(fixture.embeddings, dir.file("emb.vec"));

    const auto out = dir.file("sweep");
    const std::vector<std::string> args = {
        "probe", "sweep", "--train", dir.file("train.tsv"), "--dev", dir.file("dev.tsv"),
        "--test", dir.file("test.tsv"), "--embedding", dir.file("emb.vec"), "--hidden", "2,1",
        "--epochs", "2", "--seed", "11", "--out", out};
    CHECK(run(args) == 0);

    const std::string grid = read_file((fs::path(out) / "grid.csv").string());
    CHECK(grid.find("embedding,2,1\n") != std::string::npos);
    CHECK(grid.find("emb,") != std::string::npos);

    const std::string metrics = read_file((fs::path(out) / "metrics_h2.csv").string());
    CHECK(metrics.rfind("# manifest: manifest.json\n", 0) == 0);
    CHECK(metrics.find("epoch,split,loss,accuracy\n") != std::string::npos);
    CHECK(metrics.find("1,train,") != std::string::npos);
    CHECK(metrics.find("2,dev,,") != std::string::npos);

    const auto summary =
        nlohmann::json::parse(read_file((fs::path(out) / "sweep.json").string()));
    CHECK(summary["cells"].size() == 2);
    CHECK(summary["cells"][0]["hidden"] == 2);
    CHECK(summary["cells"][1]["hidden"] == 1);
    CHECK(summary["cells"][0].contains("best_dev_test_accuracy"));

    // chart: well-formed XML shell referencing every sweep point
    const std::string chart = read_file((fs::path(out) / "chart.svg").string());
    CHECK(chart.rfind("<?xml", 0) == 0);
    CHECK(chart.find("<svg ") != std::string::npos);
    CHECK(chart.find("</svg>") != std::string::npos);
    CHECK(count_occurrences(chart, "<circle") == 2);
    CHECK(count_occurrences(chart, "<polyline") == 1);

    // byte-identical rerun
    const auto out2 = dir.file("sweep2");
    auto args2 = args;
    args2.back() = out2;
    CHECK(run(args2) == 0);
    for (const char* name : {"grid.csv", "metrics_h1.csv", "metrics_h2.csv", "sweep.json",
                             "chart.svg"}) {
        CHECK(read_file((fs::path(out) / name).string()) ==
              read_file((fs::path(out2) / name).string()));
    }
}

TEST_CASE("probe sweep respects the chart exclusion flag") {
    TempDir dir;
    const auto fixture = synthetic::lookup_task(32);
    write_tagged(fixture.train, dir.file("train.tsv"));
    write_tagged(fixture.dev, dir.file("dev.tsv"));
    write_tagged(fixture.test, dir.file("test.tsv"));
    embkit::save_word2vec_text(fixture.embeddings, dir.file("emb.vec"));

    const auto out = dir.file("sweep");
    CHECK(run({"probe", "sweep", "--train", dir.file("train.tsv"), "--dev", dir.file("dev.tsv"),
               "--test", dir.file("test.tsv"), "--embedding", dir.file("emb.vec"), "--hidden",
               "1,2,4", "--epochs", "1", "--chart-min-hidden", "4", "--seed", "3", "--out",
               out}) == 0);
    const std::string chart = read_file((fs::path(out) / "chart.svg").string());
    CHECK(count_occurrences(chart, "<circle") == 1);
    // the grid still carries every size
    const std::string grid = read_file((fs::path(out) / "grid.csv").string());
    CHECK(grid.find("embedding,1,2,4\n") != std::string::npos);
}
