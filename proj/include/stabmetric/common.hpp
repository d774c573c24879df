#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stabmetric {

using Complex = std::complex<double>;
using R4 = std::array<double, 4>;

inline constexpr double pi = std::numbers::pi;

/// Base for all library errors. `code()` is the stable machine-readable name
/// used in CLI error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define STABMETRIC_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                         \
    public:                                                             \
        explicit Name(const std::string& what) : Error(#Name, what) {}  \
    };

STABMETRIC_DEFINE_ERROR(OutsideRegion)
STABMETRIC_DEFINE_ERROR(InvalidClass)
STABMETRIC_DEFINE_ERROR(NotHyperbolic)
STABMETRIC_DEFINE_ERROR(NonPositiveDeterminant)
STABMETRIC_DEFINE_ERROR(SolverDiverged)
STABMETRIC_DEFINE_ERROR(BadSideLengths)
STABMETRIC_DEFINE_ERROR(DegenerateBase)
STABMETRIC_DEFINE_ERROR(NotUnimodular)
STABMETRIC_DEFINE_ERROR(NotPseudoAnosov)
STABMETRIC_DEFINE_ERROR(MissingMatrix)
STABMETRIC_DEFINE_ERROR(UnknownKind)
STABMETRIC_DEFINE_ERROR(InvalidInput)

#undef STABMETRIC_DEFINE_ERROR

/// splitmix64-seeded xoshiro256** generator. Used instead of <random>
/// distributions so that sampled fixtures are identical across standard
/// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t z = seed;
        for (auto& s : state_) {
            z += 0x9e3779b97f4a7c15ULL;
            std::uint64_t x = z;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            s = x ^ (x >> 31);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on the open interval (0, 1).
    double uniform_open() {
        double u = 0.0;
        while (u == 0.0) u = uniform();
        return u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace stabmetric
