#include "cholcov/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace cholcov {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\"");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\"");
    return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::string where(std::size_t line, std::size_t column) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

DataSample ingest_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");

    std::vector<std::vector<double>> rows;
    std::vector<std::string> raw_labels;
    std::size_t width = 0;
    std::size_t label_at = 0;
    std::size_t line_no = 0;
    bool header_pending = options.has_header;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        const std::vector<std::string> fields = split_fields(line);
        if (width == 0) {
            width = fields.size();
            if (options.label_column) {
                const int lc = *options.label_column;
                const long resolved = lc < 0 ? static_cast<long>(width) + lc : lc;
                if (resolved < 0 || resolved >= static_cast<long>(width)) {
                    throw Error(ErrorCode::ConfigError, "label column " + std::to_string(lc) + " is outside the " +
                                                            std::to_string(width) + " columns of '" + path + "'");
                }
                label_at = static_cast<std::size_t>(resolved);
            }
        } else if (fields.size() != width) {
            throw Error(ErrorCode::RaggedRows, "line " + std::to_string(line_no) + " has " +
                                                   std::to_string(fields.size()) + " fields, expected " +
                                                   std::to_string(width));
        }
        std::vector<double> row;
        row.reserve(width);
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const std::string field = trim(fields[c]);
            if (options.label_column && c == label_at) {
                raw_labels.push_back(field);
                continue;
            }
            double v = 0.0;
            if (!parse_double(field, v)) {
                throw Error(ErrorCode::ParseError, where(line_no, c + 1) + ": '" + field + "' is not a number");
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorCode::EmptySample, "'" + path + "' has no data rows");
    const std::size_t p = rows.front().size();
    if (p == 0) throw Error(ErrorCode::ParseError, "'" + path + "' has no numeric columns");

    DataSample out;
    out.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(p));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < p; ++c) out.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
    if (options.label_column) {
        out.class_names = raw_labels;
        std::sort(out.class_names.begin(), out.class_names.end());
        out.class_names.erase(std::unique(out.class_names.begin(), out.class_names.end()), out.class_names.end());
        out.labels.reserve(raw_labels.size());
        for (const std::string& name : raw_labels) {
            const auto it = std::lower_bound(out.class_names.begin(), out.class_names.end(), name);
            out.labels.push_back(static_cast<int>(it - out.class_names.begin()));
        }
    }
    return out;
}

void emit_matrix(const Matrix& m, const MatrixHeader& header, const std::string& path) {
    const std::filesystem::path target(path);
    const auto dir = target.parent_path();
    if (!dir.empty() && !std::filesystem::is_directory(dir)) {
        throw Error(ErrorCode::IoError, "directory '" + dir.string() + "' does not exist");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    out << "p=" << m.rows() << ",kind=" << header.kind << ",method=" << header.method << ",class=" << header.label
        << '\n';
    char buf[32];
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            if (j > 0) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

MatrixFile read_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "'" + path + "' is empty");

    MatrixFile out;
    std::map<std::string, std::string> kv;
    for (const std::string& part : split_fields(trim(line))) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "line 1: malformed header entry '" + part + "'");
        kv[part.substr(0, eq)] = part.substr(eq + 1);
    }
    for (const char* key : {"p", "kind", "method", "class"}) {
        if (!kv.count(key)) throw Error(ErrorCode::ParseError, std::string("line 1: header lacks '") + key + "'");
    }
    double p_value = 0.0;
    if (!parse_double(kv["p"], p_value) || p_value < 1) throw Error(ErrorCode::ParseError, "line 1: bad p");
    out.header = {static_cast<Index>(p_value), kv["kind"], kv["method"], kv["class"]};

    const Index p = out.header.p;
    out.values.resize(p, p);
    std::size_t line_no = 1;
    Index row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (row >= p) throw Error(ErrorCode::RaggedRows, "line " + std::to_string(line_no) + ": more than p rows");
        const auto fields = split_fields(line);
        if (fields.size() != static_cast<std::size_t>(p)) {
            throw Error(ErrorCode::RaggedRows, "line " + std::to_string(line_no) + " has " +
                                                   std::to_string(fields.size()) + " fields, expected " +
                                                   std::to_string(p));
        }
        for (Index c = 0; c < p; ++c) {
            double v = 0.0;
            const std::string field = trim(fields[static_cast<std::size_t>(c)]);
            if (!parse_double(field, v)) {
                throw Error(ErrorCode::ParseError, where(line_no, static_cast<std::size_t>(c) + 1) + ": '" + field +
                                                       "' is not a number");
            }
            out.values(row, c) = v;
        }
        ++row;
    }
    if (row != p) throw Error(ErrorCode::RaggedRows, "'" + path + "' has " + std::to_string(row) + " rows, expected p");
    return out;
}

}  // namespace cholcov
