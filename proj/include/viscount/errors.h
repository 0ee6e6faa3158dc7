#ifndef VISCOUNT_ERRORS_H
#define VISCOUNT_ERRORS_H

#include <stdexcept>
#include <string>

namespace viscount {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& msg, int line_, int column_)
        : Error(msg + " (line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ")"),
          line(line_), column(column_) {}
};

struct DisjointnessViolation : Error {
    int id_a = -1;
    int id_b = -1;
    DisjointnessViolation(int a, int b)
        : Error("segments " + std::to_string(a) + " and " + std::to_string(b) +
                " are not disjoint"),
          id_a(a), id_b(b) {}
};

struct OutOfBounds : Error {
    explicit OutOfBounds(const std::string& what) : Error(what) {}
};

struct DegenerateSegment : Error {
    int id = -1;
    explicit DegenerateSegment(int id_)
        : Error("segment " + std::to_string(id_) + " has zero length"), id(id_) {}
};

struct GenerationExhausted : Error {
    explicit GenerationExhausted(const std::string& msg) : Error(msg) {}
};

struct PointOnObstacle : Error {
    explicit PointOnObstacle(const std::string& msg) : Error(msg) {}
};

struct OverlapError : Error {
    explicit OverlapError(const std::string& msg) : Error(msg) {}
};

struct OnBoundary : Error {
    explicit OnBoundary(const std::string& msg) : Error(msg) {}
};

struct RetryExhausted : Error {
    explicit RetryExhausted(const std::string& msg) : Error(msg) {}
};

struct DegeneratePath : Error {
    explicit DegeneratePath(const std::string& msg) : Error(msg) {}
};

struct VerificationMismatch : Error {
    explicit VerificationMismatch(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

struct IndexFormatError : Error {
    explicit IndexFormatError(const std::string& msg) : Error(msg) {}
};

} // namespace viscount

#endif
