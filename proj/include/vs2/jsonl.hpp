#pragma once

// JSON Lines I/O plus atomic file writing.  All pipeline stages exchange data
// as JSONL: one JSON object per line, UTF-8, no enclosing array.  Writers go
// through AtomicWriter so a crash mid-run never leaves a truncated file at the
// destination path: content accumulates in "<path>.tmp" and is renamed into
// place on commit.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace vs2 {

struct JsonlError {
    std::size_t line_no = 0;  // 1-based
    std::string message;
};

// Strict reader: throws on the first malformed line, naming the line number.
inline std::vector<nlohmann::json> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<nlohmann::json> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        nlohmann::json row = nlohmann::json::parse(line, nullptr, false);
        if (row.is_discarded()) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed JSON line");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// Lenient reader: skips malformed lines, reporting each one.
inline std::vector<nlohmann::json> read_jsonl_lenient(const std::string& path,
                                                     std::vector<JsonlError>* errors = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<nlohmann::json> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        nlohmann::json row = nlohmann::json::parse(line, nullptr, false);
        if (row.is_discarded()) {
            if (errors) errors->push_back({line_no, "malformed JSON line"});
            continue;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// Serialize one object per line.  Keys come out sorted (nlohmann::json's
// default object order), which keeps byte-identical output across runs.
inline std::string to_jsonl(const std::vector<nlohmann::json>& rows) {
    std::string out;
    for (const auto& row : rows) {
        out += row.dump();
        out += '\n';
    }
    return out;
}

// Writes to "<path>.tmp", then renames onto <path> at commit().  If the
// writer is destroyed without commit() the temporary is removed and the
// destination is left untouched.
class AtomicWriter {
public:
    explicit AtomicWriter(std::string path)
        : path_(std::move(path)), tmp_path_(path_ + ".tmp"), out_(tmp_path_, std::ios::binary | std::ios::trunc) {
        if (!out_) throw std::runtime_error("cannot open " + tmp_path_);
    }

    AtomicWriter(const AtomicWriter&) = delete;
    AtomicWriter& operator=(const AtomicWriter&) = delete;

    ~AtomicWriter() {
        if (!committed_) {
            out_.close();
            std::error_code ec;
            std::filesystem::remove(tmp_path_, ec);
        }
    }

    void write(std::string_view data) { out_ << data; }

    void write_line(const nlohmann::json& row) {
        out_ << row.dump() << '\n';
    }

    void commit() {
        out_.flush();
        if (!out_) throw std::runtime_error("write failed for " + tmp_path_);
        out_.close();
        std::filesystem::rename(tmp_path_, path_);
        committed_ = true;
    }

    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::string tmp_path_;
    std::ofstream out_;
    bool committed_ = false;
};

// Convenience: atomically replace <path> with <content>.
inline void write_file_atomic(const std::string& path, std::string_view content) {
    AtomicWriter w(path);
    w.write(content);
    w.commit();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace vs2
