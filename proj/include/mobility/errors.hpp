#pragma once

#include <stdexcept>
#include <string>

namespace mobility {

// Input that fails a structural precondition (mismatched index sets,
// unknown identifiers, malformed instances).
struct StructuralError : std::runtime_error {
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// Domain-invariant violations found while validating models or scenarios.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Assignment fed to an evaluator violates a feasibility constraint.
struct ConstraintError : std::runtime_error {
  explicit ConstraintError(const std::string& what) : std::runtime_error(what) {}
};

// Service load outside [0, capacity].
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Instance too large for the exhaustive oracle.
struct SizeError : std::runtime_error {
  explicit SizeError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed scenario or outcome document.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Requested scenario sizes cannot produce a valid instance.
struct GenerationError : std::runtime_error {
  explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mobility
