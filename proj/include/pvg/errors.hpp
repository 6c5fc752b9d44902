#pragma once

#include <stdexcept>
#include <string>

namespace pvg {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define PVG_DEFINE_ERROR(Name)                                     \
  class Name : public Error {                                      \
  public:                                                          \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

PVG_DEFINE_ERROR(NotAUnit);
PVG_DEFINE_ERROR(InsufficientPrecision);
PVG_DEFINE_ERROR(SpecMismatch);
PVG_DEFINE_ERROR(SpecInvalid);
PVG_DEFINE_ERROR(RelationViolation);
PVG_DEFINE_ERROR(NotBijective);
PVG_DEFINE_ERROR(SubgroupNotPreserved);
PVG_DEFINE_ERROR(NoCertificate);
PVG_DEFINE_ERROR(InvalidT);
PVG_DEFINE_ERROR(NotAbelian);
PVG_DEFINE_ERROR(NonAbelianQuotient);
PVG_DEFINE_ERROR(IdentityElement);
PVG_DEFINE_ERROR(ValueBeyondCutoff);
PVG_DEFINE_ERROR(UnknownScenario);
PVG_DEFINE_ERROR(UnknownSuite);
PVG_DEFINE_ERROR(ConfigInvalid);
PVG_DEFINE_ERROR(OrderMismatch);

#undef PVG_DEFINE_ERROR

}  // namespace pvg
