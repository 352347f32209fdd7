#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pathred
{

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Line and column are 1-based.
class ParseError : public Error
{
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what);

    std::size_t line() const noexcept { return m_line; }
    std::size_t column() const noexcept { return m_column; }

private:
    std::size_t m_line;
    std::size_t m_column;
};

/// A brute-force oracle refused an instance above its configured size cap.
class OracleCapExceeded : public Error
{
public:
    using Error::Error;
};

/// The path search ran out of node expansions (or the grid is too large to materialize).
class SearchBudgetExceeded : public Error
{
public:
    using Error::Error;
};

/// A reduction or solution map refused its input because a precondition does not hold.
class PreconditionError : public Error
{
public:
    using Error::Error;
};

/// Raised by normalize_nkdm when some element is >= t: the instance has no solutions.
class TriviallyUnsolvable : public PreconditionError
{
public:
    using PreconditionError::PreconditionError;
};

/// A constructed object failed its own consistency check.
class ConsistencyError : public Error
{
public:
    using Error::Error;
};

}  // namespace pathred
