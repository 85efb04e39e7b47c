#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace embkit {

// First line of a dump file. `dim` binds every vector in the file;
// teacher/layer are metadata only (the toolkit never assumes a layer).
struct DumpHeader {
    std::uint32_t dim = 0;
    std::string teacher;
    std::string layer = "last";
    std::optional<std::uint64_t> sentences;
};

// One sentence of teacher output: the word strings, every subword vector
// the teacher produced (special tokens included), and for each word the
// strictly increasing list of subword indices that realize it. Subwords
// not referenced by any alignment are carried but never pooled.
struct SentenceRecord {
    std::vector<std::string> words;
    std::vector<std::vector<float>> subword_vectors;
    std::vector<std::vector<std::uint32_t>> alignment;

    // Throws ValidationError describing the first violated invariant.
    void validate(std::uint32_t dim) const;
};

enum class PoolMode { mean, first, last };
PoolMode pool_mode_from_string(const std::string& name);

// Combine the aligned subword vectors of one word into a single vector.
std::vector<float> pool_subwords(const SentenceRecord& rec, std::size_t word_index,
                                 PoolMode mode);

// Streaming reader: one record in memory at a time, file order preserved.
// See docs/dump-format.md for the byte-exact line format.
class DumpReader {
public:
    explicit DumpReader(std::unique_ptr<std::istream> in, std::string name = "<stream>");
    static DumpReader open_file(const std::string& path);
    ~DumpReader();
    DumpReader(DumpReader&&) noexcept;
    DumpReader& operator=(DumpReader&&) noexcept;

    const DumpHeader& header() const { return header_; }

    // std::nullopt at end of file. Throws FormatError with the 1-based
    // record index on malformed input.
    std::optional<SentenceRecord> next();

private:
    std::unique_ptr<std::istream> in_;
    std::string name_;
    DumpHeader header_;
    std::size_t record_index_ = 0;
};

class DumpWriter {
public:
    DumpWriter(std::unique_ptr<std::ostream> out, const DumpHeader& header,
               std::string name = "<stream>");
    static DumpWriter open_file(const std::string& path, const DumpHeader& header);
    ~DumpWriter();
    DumpWriter(DumpWriter&&) noexcept;
    DumpWriter& operator=(DumpWriter&&) noexcept;

    // Validates the record against the header before emitting any bytes.
    void write(const SentenceRecord& rec);
    std::size_t written() const { return written_; }

private:
    std::unique_ptr<std::ostream> out_;
    std::string name_;
    DumpHeader header_;
    std::size_t written_ = 0;
};

// Re-openable record source; extraction passes over a dump more than once.
class DumpSource {
public:
    virtual ~DumpSource() = default;
    virtual DumpReader open() const = 0;
};

class FileDumpSource : public DumpSource {
public:
    explicit FileDumpSource(std::string path) : path_(std::move(path)) {}
    DumpReader open() const override { return DumpReader::open_file(path_); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// Whole dump kept as text in memory; test and toy-scale use.
class MemoryDumpSource : public DumpSource {
public:
    explicit MemoryDumpSource(std::string content) : content_(std::move(content)) {}
    MemoryDumpSource(const DumpHeader& header, const std::vector<SentenceRecord>& records);
    DumpReader open() const override;

private:
    std::string content_;
};

}  // namespace embkit
