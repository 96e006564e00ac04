#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace landscape::csv {

/// Shortest-safe round-trip text for a double ("%.17g").
std::string format_exact(double value);
/// Fixed significant-digit text ("%.<digits>g").
std::string format_sig(double value, int digits);

/// Writes UTF-8, LF-terminated, comma-separated rows after a mandatory header.
class Writer {
public:
    Writer(const std::filesystem::path& path, std::initializer_list<std::string_view> header);

    void row(const std::vector<std::string>& fields);
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws IoError when absent.
    std::size_t column(std::string_view name) const;
};

/// Reads a comma-separated file with a header row. Blank lines are skipped.
Table read(const std::filesystem::path& path);

double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

} // namespace landscape::csv
