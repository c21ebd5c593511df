#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fblkit {

// Base class for everything the toolkit throws. kind() is a stable,
// machine-readable tag; what() carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define FBLKIT_DEFINE_ERROR(NAME)                                         \
    class NAME : public Error {                                           \
    public:                                                               \
        explicit NAME(const std::string& message) : Error(#NAME, message) {} \
    }

// Channel construction.
FBLKIT_DEFINE_ERROR(RowSumError);
FBLKIT_DEFINE_ERROR(NegativeEntryError);
FBLKIT_DEFINE_ERROR(DegenerateAlphabetError);

// Word and distribution plumbing.
FBLKIT_DEFINE_ERROR(LengthMismatchError);
FBLKIT_DEFINE_ERROR(SymbolOutOfRangeError);
FBLKIT_DEFINE_ERROR(DimensionMismatchError);

// Information measures and bounds.
FBLKIT_DEFINE_ERROR(UndefinedDensityError);
FBLKIT_DEFINE_ERROR(InfiniteBoundError);
FBLKIT_DEFINE_ERROR(InfeasibleSlackError);
FBLKIT_DEFINE_ERROR(DomainError);
FBLKIT_DEFINE_ERROR(ZeroDispersionError);

// Exact enumeration guards.
FBLKIT_DEFINE_ERROR(InstanceTooLargeError);

#undef FBLKIT_DEFINE_ERROR

}  // namespace fblkit
