#include "landscape/csv.hpp"

#include "landscape/errors.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <fmt/format.h>

namespace landscape::csv {

std::string format_exact(double value) { return format_sig(value, 17); }

std::string format_sig(double value, int digits) {
    char buffer[64];
    const int n = std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
    return std::string(buffer, static_cast<std::size_t>(n));
}

Writer::Writer(const std::filesystem::path& path, std::initializer_list<std::string_view> header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
    if (!out_) {
        throw IoError(fmt::format("cannot open '{}' for writing", path_.string()));
    }
    bool first = true;
    for (auto name : header) {
        if (!first) out_ << ',';
        out_ << name;
        first = false;
    }
    out_ << '\n';
}

void Writer::row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) {
        throw IoError(fmt::format("'{}': row has {} fields, header has {}", path_.string(),
                                  fields.size(), columns_));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << fields[i];
    }
    out_ << '\n';
    if (!out_) throw IoError(fmt::format("write to '{}' failed", path_.string()));
}

void Writer::close() {
    out_.close();
    if (out_.fail()) throw IoError(fmt::format("closing '{}' failed", path_.string()));
}

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw IoError(fmt::format("missing column '{}'", name));
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

Table read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));

    Table table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!have_header) {
            table.header = split(line);
            have_header = true;
            continue;
        }
        auto fields = split(line);
        if (fields.size() != table.header.size()) {
            throw IoError(fmt::format("'{}': row {} has {} fields, header has {}", path.string(),
                                      table.rows.size() + 1, fields.size(), table.header.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (!have_header) throw IoError(fmt::format("'{}': missing header row", path.string()));
    return table;
}

double parse_double(std::string_view text) {
    // strtod rather than from_chars: libstdc++ 11 lacks floating from_chars
    const std::string owned(text);
    char* end = nullptr;
    const double value = std::strtod(owned.c_str(), &end);
    if (owned.empty() || end != owned.c_str() + owned.size()) {
        throw IoError(fmt::format("not a number: '{}'", text));
    }
    return value;
}

long long parse_integer(std::string_view text) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw IoError(fmt::format("not an integer: '{}'", text));
    }
    return value;
}

} // namespace landscape::csv
