#pragma once

#include <stdexcept>
#include <string>

namespace lcatile {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input or a violated precondition (wrong arity, bad signature,
/// element outside its lattice, ...). The CLI maps these to exit code 1.
class InputError : public Error {
public:
    using Error::Error;
};

class SignatureMismatch : public InputError {
public:
    using InputError::InputError;
};

class ArityMismatch : public InputError {
public:
    using InputError::InputError;
};

/// A region that was required to multi-tile does not. This is a
/// mathematical verdict rather than an operational failure (exit code 2).
class NotKTiling : public Error {
public:
    using Error::Error;
};

/// Randomized search ran out of attempts (exit code 3).
class TriesExhausted : public Error {
public:
    TriesExhausted(const std::string& what, double best_sigma_min_sq)
        : Error(what), best_sigma_min_sq_(best_sigma_min_sq) {}
    double best_sigma_min_sq() const { return best_sigma_min_sq_; }

private:
    double best_sigma_min_sq_;
};

}  // namespace lcatile
