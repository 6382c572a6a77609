#pragma once
#include <stdexcept>
#include <string>

namespace eisen {

// Every failure mode gets its own type so callers can catch precisely.
// All derive from std::runtime_error; the what() string carries context.

#define EISEN_ERROR(Name)                                        \
  struct Name : std::runtime_error {                             \
    explicit Name(const std::string& m = #Name)                  \
        : std::runtime_error(m) {}                               \
  }

EISEN_ERROR(OverflowError);             // 64-bit coordinate arithmetic overflowed
EISEN_ERROR(NotCoprimeToThree);         // element has norm divisible by 3
EISEN_ERROR(BothZero);                  // gcd(0, 0)
EISEN_ERROR(ZeroModulus);               // reduction mod 0
EISEN_ERROR(ZeroInput);                 // factoring 0
EISEN_ERROR(BoundTooSmall);             // sieve bound below 2
EISEN_ERROR(ModulusNotCoprimeToThree);  // cubic symbol modulus divisible by (1-w)
EISEN_ERROR(CapExceeded);               // direct summation above the configured cap
EISEN_ERROR(NotPrimitive);              // root number of an imprimitive character
EISEN_ERROR(QuadratureFailure);         // requested quadrature tolerance unattainable
EISEN_ERROR(NotHecke);                  // L-function of a non-Hecke character
EISEN_ERROR(InsufficientTruncation);    // AFE coefficient supply too short
EISEN_ERROR(CountMismatch);             // argument-principle count disagrees with zero list
EISEN_ERROR(SupportExceeded);           // test function leaks outside (-v, v)
EISEN_ERROR(UnsupportedRange);          // parameter outside the supported range
EISEN_ERROR(IdentityViolation);         // an exact identity failed numerically
EISEN_ERROR(InvalidRange);              // malformed interval endpoints

#undef EISEN_ERROR

}  // namespace eisen
