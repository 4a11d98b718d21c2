#pragma once

#include <stdexcept>
#include <string>

namespace toruskit {

/// Base class for every failure raised by the library. The CLI maps these
/// onto exit codes through `kind()`.
class Error : public std::runtime_error {
 public:
  enum class Kind {
    InvalidInput,
    DegenerateLattice,
    IllConditioned,
    NotCompatible,
    BackendRequired,
    DimensionTooSmall,
    NotTransversal,
    NotSkew,
    NotPaired,
    FactorizationFailed,
    ChainNotFound,
    IndexOrder,
    NotClosed,
    Obstructed,
    Diverged,
  };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

#define TORUSKIT_DEFINE_ERROR(Name)                                              \
  class Name : public Error {                                                    \
   public:                                                                       \
    explicit Name(const std::string& what) : Error(Kind::Name, #Name ": " + what) {} \
  };

TORUSKIT_DEFINE_ERROR(InvalidInput)
TORUSKIT_DEFINE_ERROR(DegenerateLattice)
TORUSKIT_DEFINE_ERROR(IllConditioned)
TORUSKIT_DEFINE_ERROR(NotCompatible)
TORUSKIT_DEFINE_ERROR(BackendRequired)
TORUSKIT_DEFINE_ERROR(DimensionTooSmall)
TORUSKIT_DEFINE_ERROR(NotTransversal)
TORUSKIT_DEFINE_ERROR(NotSkew)
TORUSKIT_DEFINE_ERROR(NotPaired)
TORUSKIT_DEFINE_ERROR(ChainNotFound)
TORUSKIT_DEFINE_ERROR(IndexOrder)
TORUSKIT_DEFINE_ERROR(NotClosed)
TORUSKIT_DEFINE_ERROR(Obstructed)
TORUSKIT_DEFINE_ERROR(Diverged)

#undef TORUSKIT_DEFINE_ERROR

}  // namespace toruskit
