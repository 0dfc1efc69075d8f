#pragma once

#include <complex>

#include "types.hpp"

namespace bellorder {

//---------------------------------------------------------------------------//
/*!
 * Closed set of nonzero pair correlations after both crystals.
 *
 * Every mode carries the same occupation <a* a> = epsilon/2 + sinh^2(g tau),
 * and each signal/idler pair of equal polarization carries the anomalous
 * correlation <a^s a^i> = cosh(g tau) sinh(g tau). Everything else vanishes.
 */
template <typename Scalar = double>
struct SecondMoments {
    Scalar n_mode{0};
    Scalar c_pair{0};
    Scalar epsilon{0};

    /// Occupation without the vacuum contribution.
    Scalar normal_occupation() const { return n_mode - epsilon / 2; }
};

/// Swap signal and idler of equal polarization.
template <typename Scalar>
ModeVector<Scalar> partner_modes(const ModeVector<Scalar>& a) {
    ModeVector<Scalar> out;
    out << a(IdlerH), a(IdlerV), a(SignalH), a(SignalV);
    return out;
}

/// Bogoliubov transform of both crystals: each amplitude mixes with the
/// conjugate of its partner, a(tau) = a0 cosh(g tau) + partner0* sinh(g tau).
/// The H pair (crystal 1) and the V pair (crystal 2) never mix.
template <typename Scalar = double>
ModeAmplitudes<Scalar> propagate(const ModeAmplitudes<Scalar>& input, const Coupling<Scalar>& coupling) {
    const Scalar c = coupling.cosh();
    const Scalar s = coupling.sinh();
    return ModeAmplitudes<Scalar>(c * input.a + s * partner_modes<Scalar>(input.a).conjugate());
}

/// Transform of a single polarization pair only; used to check that the two
/// crystals commute and compose into propagate().
template <typename Scalar = double>
ModeAmplitudes<Scalar> propagate_polarization(const ModeAmplitudes<Scalar>& input,
                                              const Coupling<Scalar>& coupling, Mode signal_mode) {
    const Mode idler_mode = signal_mode == SignalH ? IdlerH : IdlerV;
    const Scalar c = coupling.cosh();
    const Scalar s = coupling.sinh();
    ModeAmplitudes<Scalar> out = input;
    out.a(signal_mode) = c * input.a(signal_mode) + s * std::conj(input.a(idler_mode));
    out.a(idler_mode) = c * input.a(idler_mode) + s * std::conj(input.a(signal_mode));
    return out;
}

template <typename Scalar = double>
SecondMoments<Scalar> analytic_second_moments(const Coupling<Scalar>& coupling, Ordering ordering) {
    const Scalar s = coupling.sinh();
    const Scalar c = coupling.cosh();
    const Scalar eps = epsilon<Scalar>(ordering);
    return {eps / 2 + s * s, c * s, eps};
}

}  // namespace bellorder
