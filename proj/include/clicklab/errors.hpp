#pragma once

#include <stdexcept>
#include <string>

namespace clicklab {

// Base for all toolkit errors. Specific subtypes exist where callers are
// expected to branch on the failure kind.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class MissingColumnError : public Error {
public:
    explicit MissingColumnError(const std::string& column)
        : Error("missing required column: " + column), column_(column) {}
    const std::string& column() const { return column_; }

private:
    std::string column_;
};

class DuplicateColumnError : public Error {
public:
    explicit DuplicateColumnError(const std::string& column)
        : Error("duplicate column: " + column), column_(column) {}
    const std::string& column() const { return column_; }

private:
    std::string column_;
};

class EmptyTableError : public Error {
public:
    EmptyTableError() : Error("table has no rows") {}
};

class EmptyInputError : public Error {
public:
    explicit EmptyInputError(const std::string& what) : Error(what) {}
};

class EmptyMatrixError : public Error {
public:
    EmptyMatrixError() : Error("confusion matrix is empty") {}
};

class AllMissingError : public Error {
public:
    AllMissingError() : Error("column has no non-missing values") {}
};

class TooFewRowsError : public Error {
public:
    TooFewRowsError(std::size_t rows, std::size_t folds)
        : Error("cannot split " + std::to_string(rows) + " rows into " +
                std::to_string(folds) + " folds") {}
};

class SingleClassError : public Error {
public:
    SingleClassError() : Error("labels contain a single class") {}
};

class UnknownLabelError : public Error {
public:
    explicit UnknownLabelError(const std::string& label)
        : Error("unknown class label: " + label) {}
};

class SchemaMismatchError : public Error {
public:
    explicit SchemaMismatchError(const std::string& what) : Error(what) {}
};

class InvalidConfigError : public Error {
public:
    explicit InvalidConfigError(const std::string& what) : Error(what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace clicklab
