#pragma once

#include <stdexcept>
#include <string>

namespace davenport {

// Every failure mode raised by the library carries one of these codes so
// callers (and tests) can dispatch on the reason without parsing messages.
enum class ErrorCode {
  NotClosed,           // Cayley table entry out of range / table not square
  NotAssociative,      // Cayley table fails the associativity scan
  NoIdentity,          // Cayley table has no two-sided identity
  NoInverse,           // some element has no two-sided inverse
  TrivialGroup,        // operation undefined on the order-1 group
  CyclicGroup,         // operation defined only for non-cyclic groups
  EmptySequence,       // pi of the empty sequence is undefined
  OrderCapExceeded,    // group order exceeds the configured search cap
  ClosureCapExceeded,  // permutation closure grew past the configured cap
  CatalogEmpty,        // no catalog groups match the requested filter
  NoExactValues,       // check_bounds called with neither d nor D exact
  UnknownGroup,        // catalog lookup failed
  ParseError,          // malformed literal, table file, or argument
  IoError,             // file read/write failure
  StoreLocked,         // result store lock held by another invocation
  InternalError,       // broken invariant (e.g. witness failed revalidation)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace davenport
