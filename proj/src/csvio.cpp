#include "sieve/csvio.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace sieve {

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_int(long long v) {
    char buf[24];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header) {
    out_.open(path, std::ios::binary); // binary: keep LF endings everywhere
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

CsvWriter::~CsvWriter() { close(); }

void CsvWriter::begin_row() { first_in_row_ = true; }

void CsvWriter::col(double v) {
    if (!first_in_row_) out_ << ',';
    first_in_row_ = false;
    out_ << format_double(v);
}

void CsvWriter::col(long long v) {
    if (!first_in_row_) out_ << ',';
    first_in_row_ = false;
    out_ << format_int(v);
}

void CsvWriter::col(const std::string& s) {
    if (!first_in_row_) out_ << ',';
    first_in_row_ = false;
    out_ << s;
}

void CsvWriter::end_row() { out_ << '\n'; }

void CsvWriter::close() {
    if (out_.is_open()) out_.close();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace sieve
