#pragma once

#include <stdexcept>
#include <string>

namespace ventcel {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the admissible set (parameter range, radii, arc length).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Quadrature or iteration failed to reach its tolerance.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class DegenerateParametrization : public Error {
public:
    using Error::Error;
};

class MeshError : public Error {
public:
    using Error::Error;
};

/// a2 <= 0 (or a0 < 0) where the well-posedness hypotheses require otherwise.
class EllipticityViolation : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

/// Caller broke a documented precondition (e.g. non-zero Dirichlet entries).
class ContractViolation : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& message)
        : Error("config key '" + key + "': " + message), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace ventcel
