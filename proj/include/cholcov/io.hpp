#pragma once

#include <optional>
#include <string>

#include "cholcov/linalg.hpp"

namespace cholcov {

struct CsvOptions {
    bool has_header = false;
    /// Column holding class labels; negative values count from the end
    /// (-1 is the last column). Unset means every column is numeric.
    std::optional<int> label_column;
};

/// Reads comma-separated numeric rows. Labels are arbitrary strings, mapped
/// to indices into the sorted list of distinct names. Blank lines are
/// skipped. Throws IoError, ParseError (with line and column) or RaggedRows.
DataSample ingest_csv(const std::string& path, const CsvOptions& options = {});

struct MatrixHeader {
    Index p = 0;
    std::string kind;    // e.g. "T" or "Sigma"
    std::string method;  // estimator name or "truth"
    std::string label;   // class label, "all" when unconditional
};

/// Header line "p=<p>,kind=<kind>,method=<method>,class=<label>" followed by
/// one line per row, entries printed with 17 significant digits.
void emit_matrix(const Matrix& m, const MatrixHeader& header, const std::string& path);

struct MatrixFile {
    MatrixHeader header;
    Matrix values;
};

MatrixFile read_matrix(const std::string& path);

}  // namespace cholcov
