// Error types thrown across the library.  Each maps to one failure mode of a
// public operation; all derive from std::runtime_error so callers can catch
// coarsely or precisely.
#pragma once

#include <stdexcept>
#include <string>

namespace spikeform {

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// lambda falls inside the spectral support where the integrand is singular
struct SupportError : std::runtime_error {
    explicit SupportError(const std::string& msg) : std::runtime_error(msg) {}
};

// spike sits inside (or too close to) the bulk interval [1-sqrt(y), 1+sqrt(y)]
struct PhaseError : std::runtime_error {
    explicit PhaseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SymmetryError : std::runtime_error {
    explicit SymmetryError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IndexError : std::runtime_error {
    explicit IndexError(const std::string& msg) : std::runtime_error(msg) {}
};

// two spikes are numerically equal, so cross-spike partial fractions degenerate
struct DegenerateSpikesError : std::runtime_error {
    explicit DegenerateSpikesError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spikeform
