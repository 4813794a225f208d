#pragma once

#include <stdexcept>
#include <string>

namespace gem {

// Every failure raised by the library derives from Error so callers can
// catch at one level and still report the specific category.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

#define GEM_DEFINE_ERROR(Name)                   \
    class Name : public Error {                  \
      public:                                    \
        using Error::Error;                      \
    }

GEM_DEFINE_ERROR(DomainError);        // argument outside the admissible range
GEM_DEFINE_ERROR(ConvergenceError);   // root bracket could not be established
GEM_DEFINE_ERROR(SizeError);          // too few nodes for the requested stencil
GEM_DEFINE_ERROR(ConditioningError);  // rank-deficient local system
GEM_DEFINE_ERROR(AlignmentError);     // field / weights bound to another node set
GEM_DEFINE_ERROR(CoverageError);      // point outside every PU patch
GEM_DEFINE_ERROR(GeometryError);      // degenerate or self-intersecting curve
GEM_DEFINE_ERROR(TopologyError);      // envelope loop could not be repaired
GEM_DEFINE_ERROR(FillError);          // interior fill failed to cover the domain
GEM_DEFINE_ERROR(StabilityError);     // explicit time step above its bound
GEM_DEFINE_ERROR(ConfigError);        // malformed or unknown configuration entry
GEM_DEFINE_ERROR(IoError);            // output could not be written

#undef GEM_DEFINE_ERROR

}  // namespace gem
