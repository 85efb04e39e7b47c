#include "embkit/dump.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "embkit/base64.hpp"
#include "embkit/error.hpp"

namespace embkit {

using ordered_json = nlohmann::ordered_json;

void SentenceRecord::validate(std::uint32_t dim) const {
    if (words.size() != alignment.size()) {
        throw ValidationError("record has " + std::to_string(words.size()) + " words but " +
                              std::to_string(alignment.size()) + " alignment lists");
    }
    for (std::size_t i = 0; i < subword_vectors.size(); ++i) {
        if (subword_vectors[i].size() != dim) {
            throw ValidationError("subword vector " + std::to_string(i) + " has length " +
                                  std::to_string(subword_vectors[i].size()) + ", header dim is " +
                                  std::to_string(dim));
        }
    }
    std::vector<bool> used(subword_vectors.size(), false);
    for (std::size_t w = 0; w < alignment.size(); ++w) {
        const auto& idxs = alignment[w];
        if (idxs.empty()) {
            throw ValidationError("word " + std::to_string(w) + " has an empty alignment");
        }
        std::uint32_t prev = 0;
        bool first = true;
        for (std::uint32_t idx : idxs) {
            if (idx >= subword_vectors.size()) {
                throw ValidationError("alignment of word " + std::to_string(w) +
                                      " references subword " + std::to_string(idx) + " of " +
                                      std::to_string(subword_vectors.size()));
            }
            if (!first && idx <= prev) {
                throw ValidationError("alignment of word " + std::to_string(w) +
                                      " is not strictly increasing");
            }
            if (used[idx]) {
                throw ValidationError("subword " + std::to_string(idx) +
                                      " is claimed by more than one word");
            }
            used[idx] = true;
            prev = idx;
            first = false;
        }
    }
}

PoolMode pool_mode_from_string(const std::string& name) {
    if (name == "mean") return PoolMode::mean;
    if (name == "first") return PoolMode::first;
    if (name == "last") return PoolMode::last;
    throw ArgumentError("unknown pooling mode '" + name + "' (expected mean|first|last)");
}

std::vector<float> pool_subwords(const SentenceRecord& rec, std::size_t word_index,
                                 PoolMode mode) {
    if (word_index >= rec.words.size()) {
        throw ArgumentError("word index " + std::to_string(word_index) + " out of range (" +
                            std::to_string(rec.words.size()) + " words)");
    }
    const auto& idxs = rec.alignment[word_index];
    if (idxs.empty()) {
        throw ArgumentError("word " + std::to_string(word_index) + " has no aligned subwords");
    }
    if (mode == PoolMode::first) return rec.subword_vectors[idxs.front()];
    if (mode == PoolMode::last) return rec.subword_vectors[idxs.back()];
    const std::size_t dim = rec.subword_vectors[idxs.front()].size();
    std::vector<double> sum(dim, 0.0);
    for (std::uint32_t idx : idxs) {
        const auto& v = rec.subword_vectors[idx];
        for (std::size_t j = 0; j < dim; ++j) sum[j] += v[j];
    }
    std::vector<float> out(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        out[j] = static_cast<float>(sum[j] / static_cast<double>(idxs.size()));
    }
    return out;
}

namespace {

std::string encode_vectors(const std::vector<std::vector<float>>& vectors, std::uint32_t dim) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(vectors.size() * dim * 4);
    for (const auto& v : vectors) {
        for (float f : v) {
            std::uint32_t bits;
            std::memcpy(&bits, &f, 4);
            bytes.push_back(static_cast<std::uint8_t>(bits & 0xff));
            bytes.push_back(static_cast<std::uint8_t>((bits >> 8) & 0xff));
            bytes.push_back(static_cast<std::uint8_t>((bits >> 16) & 0xff));
            bytes.push_back(static_cast<std::uint8_t>((bits >> 24) & 0xff));
        }
    }
    return base64_encode(bytes.data(), bytes.size());
}

std::vector<std::vector<float>> decode_vectors(const std::string& b64, std::uint32_t dim) {
    std::vector<std::uint8_t> bytes = base64_decode(b64);
    const std::size_t stride = static_cast<std::size_t>(dim) * 4;
    if (stride == 0 || bytes.size() % stride != 0) {
        throw FormatError("vector payload of " + std::to_string(bytes.size()) +
                          " bytes is not a multiple of dim*4 = " + std::to_string(stride));
    }
    std::vector<std::vector<float>> out(bytes.size() / stride);
    std::size_t p = 0;
    for (auto& vec : out) {
        vec.resize(dim);
        for (std::uint32_t j = 0; j < dim; ++j) {
            std::uint32_t bits = std::uint32_t(bytes[p]) | (std::uint32_t(bytes[p + 1]) << 8) |
                                 (std::uint32_t(bytes[p + 2]) << 16) |
                                 (std::uint32_t(bytes[p + 3]) << 24);
            std::memcpy(&vec[j], &bits, 4);
            p += 4;
        }
    }
    return out;
}

ordered_json header_to_json(const DumpHeader& h) {
    ordered_json j;
    j["dim"] = h.dim;
    j["teacher"] = h.teacher;
    j["layer"] = h.layer;
    if (h.sentences) j["sentences"] = *h.sentences;
    return j;
}

DumpHeader header_from_json(const ordered_json& j) {
    DumpHeader h;
    if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_unsigned()) {
        throw FormatError("dump header must be an object with an unsigned 'dim'");
    }
    h.dim = j["dim"].get<std::uint32_t>();
    if (h.dim == 0) throw FormatError("dump header dim must be positive");
    if (j.contains("teacher")) h.teacher = j["teacher"].get<std::string>();
    if (j.contains("layer")) h.layer = j["layer"].get<std::string>();
    if (j.contains("sentences")) h.sentences = j["sentences"].get<std::uint64_t>();
    return h;
}

}  // namespace

DumpReader::DumpReader(std::unique_ptr<std::istream> in, std::string name)
    : in_(std::move(in)), name_(std::move(name)) {
    std::string line;
    if (!std::getline(*in_, line)) {
        throw FormatError("dump '" + name_ + "' is missing its header line");
    }
    try {
        header_ = header_from_json(ordered_json::parse(line));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("dump '" + name_ + "' header is not valid JSON: " + e.what());
    }
}

DumpReader DumpReader::open_file(const std::string& path) {
    auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*in) throw IoError("cannot open dump file '" + path + "'");
    return DumpReader(std::move(in), path);
}

DumpReader::~DumpReader() = default;
DumpReader::DumpReader(DumpReader&&) noexcept = default;
DumpReader& DumpReader::operator=(DumpReader&&) noexcept = default;

std::optional<SentenceRecord> DumpReader::next() {
    std::string line;
    if (!std::getline(*in_, line)) return std::nullopt;
    ++record_index_;
    const std::string where = "dump '" + name_ + "' record " + std::to_string(record_index_);
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(where + ": invalid JSON: " + e.what());
    }
    SentenceRecord rec;
    try {
        rec.words = j.at("words").get<std::vector<std::string>>();
        rec.alignment = j.at("alignment").get<std::vector<std::vector<std::uint32_t>>>();
        rec.subword_vectors = decode_vectors(j.at("vectors").get<std::string>(), header_.dim);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(where + ": " + e.what());
    } catch (const FormatError& e) {
        throw FormatError(where + ": " + e.what());
    }
    try {
        rec.validate(header_.dim);
    } catch (const ValidationError& e) {
        throw FormatError(where + ": " + e.what());
    }
    return rec;
}

DumpWriter::DumpWriter(std::unique_ptr<std::ostream> out, const DumpHeader& header,
                       std::string name)
    : out_(std::move(out)), name_(std::move(name)), header_(header) {
    if (header_.dim == 0) throw ValidationError("dump header dim must be positive");
    *out_ << header_to_json(header_).dump() << '\n';
    if (!*out_) throw IoError("write failed for dump '" + name_ + "'");
}

DumpWriter DumpWriter::open_file(const std::string& path, const DumpHeader& header) {
    auto out = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*out) throw IoError("cannot write dump file '" + path + "'");
    return DumpWriter(std::move(out), header, path);
}

DumpWriter::~DumpWriter() = default;
DumpWriter::DumpWriter(DumpWriter&&) noexcept = default;
DumpWriter& DumpWriter::operator=(DumpWriter&&) noexcept = default;

void DumpWriter::write(const SentenceRecord& rec) {
    rec.validate(header_.dim);  // nothing is emitted for an invalid record
    ordered_json j;
    j["words"] = rec.words;
    j["alignment"] = rec.alignment;
    j["vectors"] = encode_vectors(rec.subword_vectors, header_.dim);
    *out_ << j.dump() << '\n';
    if (!*out_) throw IoError("write failed for dump '" + name_ + "'");
    ++written_;
}

MemoryDumpSource::MemoryDumpSource(const DumpHeader& header,
                                   const std::vector<SentenceRecord>& records) {
    auto buffer = std::make_unique<std::ostringstream>();
    std::ostringstream& ref = *buffer;
    {
        DumpWriter writer(std::move(buffer), header, "<memory>");
        for (const auto& rec : records) writer.write(rec);
        content_ = ref.str();
    }
}

DumpReader MemoryDumpSource::open() const {
    return DumpReader(std::make_unique<std::istringstream>(content_), "<memory>");
}

}  // namespace embkit
