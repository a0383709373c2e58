#pragma once

#include <stdexcept>
#include <string>

namespace lefschetz {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LEFSCHETZ_ERROR(Name)                  \
  class Name : public Error {                  \
   public:                                     \
    explicit Name(const std::string& what)     \
        : Error(std::string(#Name ": ") + what) {} \
  };

LEFSCHETZ_ERROR(CutLocusViolation)
LEFSCHETZ_ERROR(BaseMismatch)
LEFSCHETZ_ERROR(ConjugatePoint)
LEFSCHETZ_ERROR(NotAntisymmetric)
LEFSCHETZ_ERROR(UnsupportedManifold)
LEFSCHETZ_ERROR(DegenerateChart)
LEFSCHETZ_ERROR(DegenerateFixedSet)
LEFSCHETZ_ERROR(DegenerateRecord)
LEFSCHETZ_ERROR(CleanIntersectionViolation)
LEFSCHETZ_ERROR(EmptyFixedSet)
LEFSCHETZ_ERROR(ZeroOnCircle)
LEFSCHETZ_ERROR(NonFiniteCutSet)
LEFSCHETZ_ERROR(ParseError)

#undef LEFSCHETZ_ERROR

// Carries the offending node so callers can report where the integrand blew up.
class NonFiniteDensity : public Error {
 public:
  NonFiniteDensity(std::size_t node, const std::string& where)
      : Error("NonFiniteDensity: node " + std::to_string(node) + " at " + where), node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

}  // namespace lefschetz
