#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace nwlab::io {

/// Tab-separated data tables: '#'-prefixed metadata lines (units, config
/// hash, column names), then one numeric record per line. Doubles print
/// as %.17g so identical runs produce byte-identical files.
class TableWriter {
public:
    explicit TableWriter(const std::filesystem::path& path);

    void meta(const std::string& key, const std::string& value);
    void columns(const std::vector<std::string>& names);
    void row(const std::vector<double>& values);
    void close();

private:
    std::ofstream out_;
    std::filesystem::path path_;
    bool header_done_ = false;
};

std::string format_double(double v);

}  // namespace nwlab::io
