#pragma once

#include <string>
#include <vector>

namespace v2g {

// Numeric cell format shared by every emitted table: %.12g keeps full
// precision while staying byte-stable across runs.
std::string csv_num(double x);

class CsvBuilder {
public:
    // "# text" line; only valid before the header
    CsvBuilder& comment(const std::string& text);
    CsvBuilder& header(const std::vector<std::string>& cols);
    CsvBuilder& row(const std::vector<std::string>& cells);

    const std::string& text() const { return out_; }

private:
    std::string out_;
    std::size_t n_cols_ = 0;
    bool header_done_ = false;
};

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace v2g
