#pragma once

#include <stdexcept>
#include <string>

namespace psh {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation (boundary points, bad eps, r >= 0).
struct DomainError : Error { using Error::Error; };
struct PoleError : Error { using Error::Error; };
// Integral (or mass, or norm) is infinite; the divergence evidence is in the message.
struct NonIntegrable : Error { using Error::Error; };
struct StencilNearZero : Error { using Error::Error; };
struct ZeroFunction : Error { using Error::Error; };
struct ResidualNotInner : Error { using Error::Error; };
struct BranchError : Error { using Error::Error; };
struct CriticalValue : Error { using Error::Error; };
struct UnknownCase : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace psh
