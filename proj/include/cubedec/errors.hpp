#pragma once

#include <stdexcept>
#include <string>

namespace cubedec {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateSimplex : Error {
    explicit DegenerateSimplex(const std::string& what) : Error(what) {}
};

struct NotIndependent : Error {
    explicit NotIndependent(const std::string& what) : Error(what) {}
};

struct InvalidCube : Error {
    explicit InvalidCube(const std::string& what) : Error(what) {}
};

struct InvalidDimension : Error {
    explicit InvalidDimension(const std::string& what) : Error(what) {}
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& what) : Error(what) {}
};

struct NeedsEmbedding : Error {
    explicit NeedsEmbedding(const std::string& what) : Error(what) {}
};

struct NotManifold : Error {
    explicit NotManifold(const std::string& what) : Error(what) {}
};

struct NoDual : Error {
    explicit NoDual(const std::string& what) : Error(what) {}
};

struct TooSmall : Error {
    explicit TooSmall(const std::string& what) : Error(what) {}
};

struct Unsupported : Error {
    explicit Unsupported(const std::string& what) : Error(what) {}
};

struct SolverError : Error {
    SolverError(const std::string& what, double residual) : Error(what), residual(residual) {}
    double residual;
};

struct ParseError : Error {
    ParseError(const std::string& what, int line) : Error(what + " (line " + std::to_string(line) + ")"), line(line) {}
    int line;
};

}  // namespace cubedec
