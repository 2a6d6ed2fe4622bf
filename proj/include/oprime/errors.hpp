#pragma once

#include <stdexcept>
#include <string>

namespace oprime {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define OPRIME_DEFINE_ERROR(Name)        \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

/// Malformed caller input (bad rational text, wrong vector length, ...).
OPRIME_DEFINE_ERROR(InputError);
OPRIME_DEFINE_ERROR(DimensionError);
OPRIME_DEFINE_ERROR(FiniteTypeError);
OPRIME_DEFINE_ERROR(InvalidRootError);
OPRIME_DEFINE_ERROR(NonIntegralError);
OPRIME_DEFINE_ERROR(InternalConsistencyError);
OPRIME_DEFINE_ERROR(InvalidRadicalError);
OPRIME_DEFINE_ERROR(InvalidFunctional);
/// A computation needed a weight space that lies below the truncation depth.
OPRIME_DEFINE_ERROR(TruncationError);
OPRIME_DEFINE_ERROR(InconsistentAction);
OPRIME_DEFINE_ERROR(UnsupportedTensor);
OPRIME_DEFINE_ERROR(NotApplicable);
OPRIME_DEFINE_ERROR(UnsupportedRank);
OPRIME_DEFINE_ERROR(NotNilpotentWithinBound);
OPRIME_DEFINE_ERROR(SingularBlockUnsupported);
OPRIME_DEFINE_ERROR(NoStandardFiltration);

#undef OPRIME_DEFINE_ERROR

}  // namespace oprime
