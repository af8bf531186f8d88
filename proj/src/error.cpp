#include "robound/error.hpp"

#include <cmath>
#include <sstream>

namespace robound {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NonFiniteDensity: return "NonFiniteDensity";
        case ErrorCode::EmptyClass: return "EmptyClass";
        case ErrorCode::DomainTooSmall: return "DomainTooSmall";
        case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
        case ErrorCode::KappaOutOfRange: return "KappaOutOfRange";
        case ErrorCode::UnsupportedNorm: return "UnsupportedNorm";
        case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
        case ErrorCode::ModeUnsupported: return "ModeUnsupported";
        case ErrorCode::DimUnsupported: return "DimUnsupported";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

void check_kappa(double kappa) {
    if (!(kappa >= 0.0 && kappa < 0.5)) {
        std::ostringstream os;
        os << "kappa must lie in [0, 0.5), got " << kappa;
        throw Error(ErrorCode::KappaOutOfRange, os.str());
    }
}

}  // namespace robound
