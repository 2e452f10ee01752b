#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>

namespace achieve {

struct SourceSpan {
    std::string file;
    int line = 0;
    int column = 0;

    std::string str() const {
        std::ostringstream os;
        os << (file.empty() ? "<input>" : file) << ":" << line << ":" << column;
        return os.str();
    }
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, SourceSpan span)
        : Error(span.str() + ": " + msg), span_(std::move(span)) {}
    const SourceSpan& span() const { return span_; }

private:
    SourceSpan span_;
};

// Prefix index out of range, invalid bounds, and similar contract breaches.
class RangeError : public Error {
public:
    using Error::Error;
};

// Structural problems with instance files and input specs.
class InputError : public Error {
public:
    using Error::Error;
};

class GroundingError : public Error {
public:
    using Error::Error;
};

class UnsupportedAggregateError : public GroundingError {
public:
    using GroundingError::GroundingError;
};

// Assertion evaluation hit a type mismatch or an undefined operation.
class EvalError : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    BudgetExceeded(const std::string& msg, std::size_t candidates, std::size_t models)
        : Error(msg), candidates(candidates), models(models) {}
    std::size_t candidates = 0;
    std::size_t models = 0;
};

} // namespace achieve
