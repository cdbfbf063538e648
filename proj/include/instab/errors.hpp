#pragma once

#include <stdexcept>
#include <string>

namespace instab {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A sequence operation tried to write past the truncation length.
class OverflowError : public Error {
public:
    explicit OverflowError(const std::string& msg) : Error(msg) {}
};

// Compactly supported mass reached the grid window boundary, so the
// extension-by-zero truncation is no longer provably inactive.
class SupportError : public Error {
public:
    explicit SupportError(const std::string& msg) : Error(msg) {}
};

// spectral_split found no weight at or above the requested threshold.
class EmptyUnstableError : public Error {
public:
    explicit EmptyUnstableError(const std::string& msg) : Error(msg) {}
};

// No invariant-cone boundary function exists (divergent alpha integral).
class NoSolutionError : public Error {
public:
    explicit NoSolutionError(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace instab
