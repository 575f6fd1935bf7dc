// errors.hpp: exception types shared by every boundsim module.
//
// Two families: ValidationError for inputs that violate a precondition
// (bad dimension, index out of range, negative weights) and NumericalError
// for failures detected while computing (non-Hermitian input, singular
// tomography system). The CLI maps them to exit codes 2 and 3.

#pragma once

#include <stdexcept>
#include <string>

namespace boundsim {

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define BOUNDSIM_DEFINE_ERROR(Name, Base)                                    \
    class Name : public Base {                                               \
    public:                                                                  \
        explicit Name(const std::string& what) : Base(#Name ": " + what) {} \
    }

BOUNDSIM_DEFINE_ERROR(DimensionMismatch, ValidationError);
BOUNDSIM_DEFINE_ERROR(IndexOutOfRange, ValidationError);
BOUNDSIM_DEFINE_ERROR(OutOfRange, ValidationError);
BOUNDSIM_DEFINE_ERROR(UnsupportedDimension, ValidationError);
BOUNDSIM_DEFINE_ERROR(UnsupportedLabeling, ValidationError);
BOUNDSIM_DEFINE_ERROR(NotPrime, ValidationError);
BOUNDSIM_DEFINE_ERROR(TooLarge, ValidationError);
BOUNDSIM_DEFINE_ERROR(BadNormalization, ValidationError);
BOUNDSIM_DEFINE_ERROR(NegativeWeight, ValidationError);
BOUNDSIM_DEFINE_ERROR(InvalidConfig, ValidationError);

BOUNDSIM_DEFINE_ERROR(NotHermitian, NumericalError);
BOUNDSIM_DEFINE_ERROR(NotAState, NumericalError);
BOUNDSIM_DEFINE_ERROR(EmptyCounts, NumericalError);
BOUNDSIM_DEFINE_ERROR(SingularSystem, NumericalError);

#undef BOUNDSIM_DEFINE_ERROR

}  // namespace boundsim
