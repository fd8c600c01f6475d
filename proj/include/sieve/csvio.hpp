#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace sieve {

// Shortest round-trip decimal representation ('.' decimal point, no locale).
// Identical input bits always produce identical text, which is what makes
// rerun outputs byte-comparable.
std::string format_double(double v);
std::string format_int(long long v);

// Minimal CSV emitter: header row, LF line endings, values joined by ','.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    ~CsvWriter();

    void begin_row();
    void col(double v);
    void col(long long v);
    void col(int v) { col(static_cast<long long>(v)); }
    void col(const std::string& s);
    void end_row();
    void close();

private:
    std::ofstream out_;
    bool first_in_row_ = true;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace sieve
