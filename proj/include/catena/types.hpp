#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace catena {

using cx = std::complex<double>;

inline constexpr cx I{0.0, 1.0};
inline constexpr double PI = 3.141592653589793238462643383279502884;

// Relative pairwise-distance guard below which a configuration is rejected.
inline constexpr double kDistinctRelTol = 1e-9;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateConfiguration : Error {
    using Error::Error;
};

struct FormatError : Error {
    using Error::Error;
};

struct CoverageError : Error {
    using Error::Error;
};

struct QuadratureError : Error {
    using Error::Error;
};

struct ConstantSelectionError : Error {
    using Error::Error;
};

struct SolveError : Error {
    std::vector<double> residual_history;
    SolveError(const std::string& what, std::vector<double> history = {})
        : Error(what), residual_history(std::move(history)) {}
};

// conj^k: identity for even k, complex conjugation for odd k.
inline cx cjk(int k, cx z) { return (k % 2 == 0) ? z : std::conj(z); }

// (-1)^k
inline double neg1k(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

inline bool parity_even(int k) { return k % 2 == 0; }

}  // namespace catena
