#pragma once

#include <stdexcept>
#include <string>

namespace fairvote {

/// Raised when an input violates a documented precondition (bad q, J <= 1 in
/// the fixed-point solver, N beyond an enumeration cap, malformed belief).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Distinct subclass so callers can tell J <= 1 apart from other bad input.
class SubcriticalCoupling : public DomainError {
public:
    explicit SubcriticalCoupling(const std::string& what) : DomainError(what) {}
};

}  // namespace fairvote
