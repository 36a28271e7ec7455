#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fimcrb {

// Base of every error thrown by the library. The CLI maps subclasses onto
// exit codes, so keep the hierarchy shallow.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameter outside the domain of a map or family (e.g. sigma2 <= 0, s <= 0).
class DomainError : public Error {
public:
    DomainError(std::string parameter, const std::string& what)
        : Error(what), parameter_(std::move(parameter)) {}

    const std::string& parameter() const noexcept { return parameter_; }

private:
    std::string parameter_;
};

// Structural inconsistency: dimension mismatch, non-PD covariance, ...
class ModelError : public Error {
public:
    using Error::Error;
};

// Observation outside the support of the density.
class SupportError : public Error {
public:
    using Error::Error;
};

// A generator or texture violates a normalization/moment constraint.
class ConstraintError : public Error {
public:
    using Error::Error;
};

// Quadrature failed to reach tolerance, or an expectation diverged.
class NumericError : public Error {
public:
    NumericError(const std::string& what, double achieved_error = 0.0)
        : Error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

// Requested parameter lies outside the documented working range.
class RangeError : public Error {
public:
    using Error::Error;
};

// A block to be inverted is numerically singular. Carries an orthonormal
// basis of the (numerical) null space.
class RankDeficiencyError : public Error {
public:
    RankDeficiencyError(const std::string& what, Eigen::MatrixXd null_space)
        : Error(what), null_space_(std::move(null_space)) {}

    const Eigen::MatrixXd& null_space() const noexcept { return null_space_; }

private:
    Eigen::MatrixXd null_space_;
};

}  // namespace fimcrb
