#pragma once

#include <stdexcept>
#include <string>

namespace cheeger {

// Base class for every error raised by the library. The CLI maps these to
// exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CHEEGER_DEFINE_ERROR(Name)              \
  class Name : public Error {                   \
   public:                                      \
    using Error::Error;                         \
  }

CHEEGER_DEFINE_ERROR(InvalidGrid);
CHEEGER_DEFINE_ERROR(EmptyDomain);
CHEEGER_DEFINE_ERROR(OverlapError);
CHEEGER_DEFINE_ERROR(InvalidArgument);
CHEEGER_DEFINE_ERROR(MaxIterExceeded);
CHEEGER_DEFINE_ERROR(NotConvex);
CHEEGER_DEFINE_ERROR(TooFewPixels);
CHEEGER_DEFINE_ERROR(ChamberVanished);
CHEEGER_DEFINE_ERROR(NonMonotoneInput);
CHEEGER_DEFINE_ERROR(TooShort);
CHEEGER_DEFINE_ERROR(NonConvergence);
CHEEGER_DEFINE_ERROR(ParseError);

#undef CHEEGER_DEFINE_ERROR

}  // namespace cheeger
