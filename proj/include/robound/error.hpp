#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace robound {

enum class ErrorCode {
    InvalidArgument,
    NonFiniteDensity,
    EmptyClass,
    DomainTooSmall,
    ResolutionTooCoarse,
    KappaOutOfRange,
    UnsupportedNorm,
    MonotonicityViolation,
    ModeUnsupported,
    DimUnsupported,
    Io,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code lets
/// front ends map errors onto exit statuses without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class DomainTooSmallError : public Error {
public:
    DomainTooSmallError(double clipped_fraction, const std::string& what)
        : Error(ErrorCode::DomainTooSmall, what), clipped_fraction_(clipped_fraction) {}

    /// Fraction of analytic mass that fell outside the domain.
    double clipped_fraction() const noexcept { return clipped_fraction_; }

private:
    double clipped_fraction_;
};

class MonotonicityViolationError : public Error {
public:
    MonotonicityViolationError(double kappa_lo, double kappa_hi, const std::string& what)
        : Error(ErrorCode::MonotonicityViolation, what), kappa_lo_(kappa_lo), kappa_hi_(kappa_hi) {}

    double kappa_lo() const noexcept { return kappa_lo_; }
    double kappa_hi() const noexcept { return kappa_hi_; }

private:
    double kappa_lo_;
    double kappa_hi_;
};

void check_kappa(double kappa);

}  // namespace robound
