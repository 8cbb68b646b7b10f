#pragma once

#include <stdexcept>
#include <string>

namespace msturm {

/// Malformed input data: unreadable files, bad JSON, schema violations.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// The problem does not satisfy the hypotheses required by the requested
/// computation (e.g. Y neither admissible nor singular with Y(0) orthogonal
/// to P).
struct RegimeError : std::runtime_error {
  explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical procedure failed its own quality check (step count too
/// small, search exhausted, inconsistent discretization).
struct NumericsError : std::runtime_error {
  explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace msturm
