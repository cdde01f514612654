#pragma once

#include <stdexcept>
#include <string>

namespace magweyl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MAGWEYL_DEFINE_ERROR(Name)        \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  };

MAGWEYL_DEFINE_ERROR(ShapeError)
MAGWEYL_DEFINE_ERROR(JacobiViolation)
MAGWEYL_DEFINE_ERROR(NotNilpotent)
MAGWEYL_DEFINE_ERROR(ClassTooLarge)
MAGWEYL_DEFINE_ERROR(AbelianHasNoQuotient)
MAGWEYL_DEFINE_ERROR(BadGridSpec)
MAGWEYL_DEFINE_ERROR(DegreeTooHigh)
MAGWEYL_DEFINE_ERROR(FieldsDiffer)
MAGWEYL_DEFINE_ERROR(WrongClass)
MAGWEYL_DEFINE_ERROR(ConfigError)

#undef MAGWEYL_DEFINE_ERROR

}  // namespace magweyl
