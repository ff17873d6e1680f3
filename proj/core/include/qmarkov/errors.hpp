#ifndef QMARKOV_ERRORS_HPP
#define QMARKOV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qmarkov {

// Common base so callers (and the CLI report writer) can recover the
// error category by name without a chain of catch clauses.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define QMARKOV_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                        \
  public:                                                            \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

QMARKOV_DEFINE_ERROR(LayoutError);      // bad labels, dims, index sets
QMARKOV_DEFINE_ERROR(NumericError);     // solver failure, non-Hermitian input
QMARKOV_DEFINE_ERROR(ValidationError);  // density-operator invariant violated
QMARKOV_DEFINE_ERROR(ParseError);       // malformed file input
QMARKOV_DEFINE_ERROR(NotMarkovError);   // a required Markov chain does not hold
QMARKOV_DEFINE_ERROR(StructureError);   // decomposition internals inconsistent
QMARKOV_DEFINE_ERROR(DegeneracyError);  // random splitting could not separate
QMARKOV_DEFINE_ERROR(MatchError);       // block matching has no bijection
QMARKOV_DEFINE_ERROR(CertificateError); // assembled certificate fails its check
QMARKOV_DEFINE_ERROR(FullSupportError); // strict positivity required but absent
QMARKOV_DEFINE_ERROR(GenError);         // instance generator budget exhausted

#undef QMARKOV_DEFINE_ERROR

}  // namespace qmarkov

#endif
