#pragma once

#include <stdexcept>
#include <string>

namespace morsim {

/// Bad input: out-of-range parameters, incompatible source/observable, malformed grids.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// The Fock truncation cannot reach the requested accuracy under the photon-pair cap.
class TruncationError : public std::runtime_error {
public:
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

/// ΔN_d never reaches the unit noise floor, so no minimum detectable angle exists.
class NoSolutionError : public std::runtime_error {
public:
    explicit NoSolutionError(const std::string& what) : std::runtime_error(what) {}
};

/// Visibility of a fringe whose max + min is zero.
class UndefinedVisibilityError : public std::runtime_error {
public:
    explicit UndefinedVisibilityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace morsim
