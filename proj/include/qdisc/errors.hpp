#pragma once

#include <stdexcept>
#include <string>

namespace qdisc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QDISC_DEFINE_ERROR(Name)              \
  class Name : public Error {                 \
   public:                                    \
    explicit Name(const std::string& what)    \
        : Error(#Name ": " + what) {}         \
  };

QDISC_DEFINE_ERROR(InvertNonUnit)
QDISC_DEFINE_ERROR(OrderMismatch)
QDISC_DEFINE_ERROR(DivByZero)
QDISC_DEFINE_ERROR(IndexOutOfRange)
QDISC_DEFINE_ERROR(TruncationTooSmall)
QDISC_DEFINE_ERROR(NotBanded)
QDISC_DEFINE_ERROR(NotFinite)
QDISC_DEFINE_ERROR(OrderIncompatible)
QDISC_DEFINE_ERROR(SolveInconsistent)
QDISC_DEFINE_ERROR(CrossCheckFailed)
QDISC_DEFINE_ERROR(MismatchWithGram)
QDISC_DEFINE_ERROR(FactorizationMismatch)
QDISC_DEFINE_ERROR(NoConventionMatches)
QDISC_DEFINE_ERROR(AmbiguousConvention)
QDISC_DEFINE_ERROR(ConfigInvalid)

#undef QDISC_DEFINE_ERROR

}  // namespace qdisc
