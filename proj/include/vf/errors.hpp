#pragma once

#include <stdexcept>
#include <string>

namespace vf {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file or word syntax.
struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

/// A letter not present in the alphabet / generator map.
struct UnknownLetterError : Error {
    explicit UnknownLetterError(const std::string& what) : Error(what) {}
};

/// A transducer handed to an operation requiring the inverse-edge property
/// does not satisfy it.
struct NotInverseError : Error {
    explicit NotInverseError(const std::string& what) : Error(what) {}
};

/// An element or word falls outside the precomputed ball radius.
struct OutOfBallError : Error {
    explicit OutOfBallError(const std::string& what) : Error(what) {}
};

/// A language query was made beyond the horizon up to which the automaton
/// construction is guaranteed complete.
struct PartialAutomatonError : Error {
    explicit PartialAutomatonError(const std::string& what) : Error(what) {}
};

/// Classification was requested for a map that is not (certified as) an
/// automorphism.
struct NotAutomorphismError : Error {
    explicit NotAutomorphismError(const std::string& what) : Error(what) {}
};

/// A limit computation failed to detect an eventually periodic tail.
struct NoPeriodError : Error {
    explicit NoPeriodError(const std::string& what) : Error(what) {}
};

} // namespace vf
