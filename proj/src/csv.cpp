#include "v2g/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace v2g {

std::string csv_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

CsvBuilder& CsvBuilder::comment(const std::string& text) {
    if (header_done_)
        throw std::logic_error("CsvBuilder: comments must precede the header");
    out_ += "# ";
    out_ += text;
    out_ += '\n';
    return *this;
}

CsvBuilder& CsvBuilder::header(const std::vector<std::string>& cols) {
    if (header_done_) throw std::logic_error("CsvBuilder: header already written");
    if (cols.empty()) throw std::logic_error("CsvBuilder: empty header");
    n_cols_ = cols.size();
    header_done_ = true;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out_ += ',';
        out_ += cols[i];
    }
    out_ += '\n';
    return *this;
}

CsvBuilder& CsvBuilder::row(const std::vector<std::string>& cells) {
    if (!header_done_) throw std::logic_error("CsvBuilder: header missing");
    if (cells.size() != n_cols_)
        throw std::logic_error("CsvBuilder: row width " + std::to_string(cells.size()) +
                               " does not match header width " + std::to_string(n_cols_));
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ += ',';
        out_ += cells[i];
    }
    out_ += '\n';
    return *this;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace v2g
