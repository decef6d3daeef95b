#pragma once

#include <stdexcept>
#include <string>

namespace hapaxcore {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Manifest, document or wordlist could not be read or parsed.
class InputError : public Error {
public:
    using Error::Error;
};

/// A function was called outside its domain (too few points, unsorted input, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace hapaxcore
