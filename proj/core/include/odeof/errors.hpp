#pragma once

#include <stdexcept>
#include <string>

namespace odeof {

/// Root of every error raised by the library. `kind()` is a stable short tag
/// used by the command-line front end in its diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + " error: " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define ODEOF_DEFINE_ERROR(Name, tag) \
  class Name : public Error {         \
   public:                            \
    explicit Name(const std::string& what) : Error(tag, what) {} \
  };

ODEOF_DEFINE_ERROR(ShapeError, "shape")
ODEOF_DEFINE_ERROR(HermiticityError, "hermiticity")
ODEOF_DEFINE_ERROR(NormalizationError, "normalization")
ODEOF_DEFINE_ERROR(PsdError, "psd")
ODEOF_DEFINE_ERROR(ParameterError, "parameter")
ODEOF_DEFINE_ERROR(DegenerateParameterError, "degenerate-parameter")
ODEOF_DEFINE_ERROR(DomainError, "domain")
ODEOF_DEFINE_ERROR(PatternError, "pattern")
ODEOF_DEFINE_ERROR(HypothesisError, "hypothesis")
ODEOF_DEFINE_ERROR(ConstructionError, "construction")
ODEOF_DEFINE_ERROR(UnsupportedDimensionError, "unsupported-dimension")

// Raised by the oracle when a problem exceeds the desk-scale guard.
ODEOF_DEFINE_ERROR(ScaleError, "scale")

#undef ODEOF_DEFINE_ERROR

}  // namespace odeof
