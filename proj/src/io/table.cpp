#include "nwlab/io/table.hpp"

#include <cstdio>
#include <stdexcept>

namespace nwlab::io {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

TableWriter::TableWriter(const std::filesystem::path& path) : path_(path) {
    out_.open(path);
    if (!out_) throw std::runtime_error("TableWriter: cannot open " + path.string());
}

void TableWriter::meta(const std::string& key, const std::string& value) {
    if (header_done_)
        throw std::logic_error("TableWriter: metadata must precede data rows");
    out_ << "# " << key << ": " << value << "\n";
}

void TableWriter::columns(const std::vector<std::string>& names) {
    if (header_done_)
        throw std::logic_error("TableWriter: columns already written");
    out_ << "# columns:";
    for (const auto& n : names) out_ << ' ' << n;
    out_ << "\n";
    header_done_ = true;
}

void TableWriter::row(const std::vector<double>& values) {
    if (!header_done_) throw std::logic_error("TableWriter: write columns first");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << '\t';
        out_ << format_double(values[i]);
    }
    out_ << "\n";
}

void TableWriter::close() {
    out_.flush();
    if (!out_) throw std::runtime_error("TableWriter: write failure on " + path_.string());
    out_.close();
}

}  // namespace nwlab::io
