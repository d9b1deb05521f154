#ifndef NEUTRAL_ERRORS_HPP
#define NEUTRAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace neutral {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyInput : Error { using Error::Error; };
struct NegativeElement : Error { using Error::Error; };
struct ZeroSum : Error { using Error::Error; };
struct DimTooSmall : Error { using Error::Error; };
struct DegenerateTail : Error { using Error::Error; };
struct DegeneratePair : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct TooFewSamples : Error { using Error::Error; };
struct InvalidAlpha : Error { using Error::Error; };
struct InvalidWeights : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct ConfigMismatch : Error { using Error::Error; };

}  // namespace neutral

#endif
