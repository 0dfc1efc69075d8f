#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bellorder {

//---------------------------------------------------------------------------//
// Errors
//---------------------------------------------------------------------------//

enum class ErrorCode {
    InvalidArgument,
    InsufficientSamples,
    NormalOrderDirectSampling,
    DegenerateDenominator,
    NoCrossing,
    ZeroLO,
    HomodyneRequiresSymmetric,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::NormalOrderDirectSampling: return "NormalOrderDirectSampling";
        case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorCode::NoCrossing: return "NoCrossing";
        case ErrorCode::ZeroLO: return "ZeroLO";
        case ErrorCode::HomodyneRequiresSymmetric: return "HomodyneRequiresSymmetric";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

//---------------------------------------------------------------------------//
// Operator ordering
//---------------------------------------------------------------------------//

/// Normal (Glauber P) or symmetric (Wigner) ordering. The only place the
/// ordering enters the phase-space model is the input vacuum variance.
enum class Ordering { Normal, Symmetric };

/// Vacuum weight: 0 for normal ordering, 1 for symmetric ordering.
template <typename Scalar = double>
constexpr Scalar epsilon(Ordering ordering) {
    return ordering == Ordering::Symmetric ? Scalar(1) : Scalar(0);
}

inline const char* to_string(Ordering ordering) {
    return ordering == Ordering::Normal ? "normal" : "symmetric";
}

//---------------------------------------------------------------------------//
// Coupling
//---------------------------------------------------------------------------//

/// Dimensionless parametric gain g*tau, shared by both crystals.
template <typename Scalar = double>
class Coupling {
public:
    explicit Coupling(Scalar g_tau) : g_tau_(g_tau) {
        if (!std::isfinite(static_cast<double>(g_tau)) || g_tau < Scalar(0)) {
            throw Error(ErrorCode::InvalidArgument, "g_tau must be finite and >= 0");
        }
    }

    Scalar g_tau() const { return g_tau_; }
    Scalar cosh() const { return std::cosh(g_tau_); }
    Scalar sinh() const { return std::sinh(g_tau_); }

private:
    Scalar g_tau_;
};

//---------------------------------------------------------------------------//
// Mode amplitudes
//---------------------------------------------------------------------------//

/// Index of each mode in the amplitude vector (signal/idler x H/V).
enum Mode : Eigen::Index { SignalH = 0, SignalV = 1, IdlerH = 2, IdlerV = 3 };

template <typename Scalar>
using ModeVector = Eigen::Matrix<std::complex<Scalar>, 4, 1>;

/// One stochastic trajectory of the four down-converted mode amplitudes.
template <typename Scalar = double>
struct ModeAmplitudes {
    ModeVector<Scalar> a = ModeVector<Scalar>::Zero();

    ModeAmplitudes() = default;
    explicit ModeAmplitudes(const ModeVector<Scalar>& v) : a(v) {}
    ModeAmplitudes(std::complex<Scalar> s_h, std::complex<Scalar> s_v,
                   std::complex<Scalar> i_h, std::complex<Scalar> i_v) {
        a << s_h, s_v, i_h, i_v;
    }

    std::complex<Scalar> s_h() const { return a(SignalH); }
    std::complex<Scalar> s_v() const { return a(SignalV); }
    std::complex<Scalar> i_h() const { return a(IdlerH); }
    std::complex<Scalar> i_v() const { return a(IdlerV); }

    bool is_finite() const { return a.allFinite(); }
};

//---------------------------------------------------------------------------//
// Analyzer settings
//---------------------------------------------------------------------------//

template <typename Scalar = double>
struct MeasurementSetting {
    Scalar theta{0};  ///< signal analyzer angle [rad]
    Scalar phi{0};    ///< idler analyzer angle [rad]
};

/// Four analyzer angles entering the CHSH combination.
template <typename Scalar = double>
struct ChshSetting {
    Scalar theta{0};
    Scalar theta_prime{std::numbers::pi_v<Scalar> / 4};
    Scalar phi{std::numbers::pi_v<Scalar> / 8};
    Scalar phi_prime{3 * std::numbers::pi_v<Scalar> / 8};

    /// (theta, phi), (theta', phi), (theta, phi'), (theta', phi')
    std::array<MeasurementSetting<Scalar>, 4> pairs() const {
        return {{{theta, phi}, {theta_prime, phi}, {theta, phi_prime}, {theta_prime, phi_prime}}};
    }

    /// Sign of each pair in S = M1 + M2 - M3 + M4.
    static constexpr std::array<int, 4> signs() { return {1, 1, -1, 1}; }
};

//---------------------------------------------------------------------------//
// Monte Carlo configuration
//---------------------------------------------------------------------------//

struct SampleConfig {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 0x5eed;
    std::uint32_t n_chunks = 8;

    void validate() const {
        if (n_samples == 0) throw Error(ErrorCode::InvalidArgument, "n_samples must be positive");
        if (n_chunks == 0) throw Error(ErrorCode::InvalidArgument, "n_chunks must be positive");
    }
};

}  // namespace bellorder
