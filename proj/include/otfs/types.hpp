#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace otfs {

using cplx = std::complex<double>;

/// Input vector/matrix has the wrong shape for the requested operation.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Configuration is internally inconsistent (grid too small, bad CP length, ...).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A pivot fell below the numerical tolerance during factorization.
class SingularError : public std::runtime_error {
public:
    explicit SingularError(const std::string& what) : std::runtime_error(what) {}
};

/// A dense reference routine was asked to exceed its size guard.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace otfs
