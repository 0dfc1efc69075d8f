#pragma once

#include <complex>

#include "analyzer.hpp"
#include "propagator.hpp"
#include "types.hpp"

namespace bellorder {

template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

//---------------------------------------------------------------------------//
/*!
 * Full second-order statistics of a zero-mean complex Gaussian 4-vector.
 *
 * normal(j, k) = <a_j* a_k> (Hermitian), anomalous(j, k) = <a_j a_k>
 * (symmetric). Valid for either the mode vector or the port vector.
 */
template <typename Scalar = double>
struct PairMoments {
    Matrix4c<Scalar> normal = Matrix4c<Scalar>::Zero();
    Matrix4c<Scalar> anomalous = Matrix4c<Scalar>::Zero();

    /// Mode-basis moments of the post-crystal field.
    static PairMoments from_second_moments(const SecondMoments<Scalar>& m) {
        PairMoments out;
        out.normal.diagonal().setConstant(m.n_mode);
        out.anomalous(SignalH, IdlerH) = out.anomalous(IdlerH, SignalH) = m.c_pair;
        out.anomalous(SignalV, IdlerV) = out.anomalous(IdlerV, SignalV) = m.c_pair;
        return out;
    }

    /// Moments of b = R a for a real linear map R.
    PairMoments transformed(const Eigen::Matrix<Scalar, 4, 4>& r) const {
        const Matrix4c<Scalar> rc = r.template cast<std::complex<Scalar>>();
        PairMoments out;
        out.normal = rc * normal * rc.transpose();
        out.anomalous = rc * anomalous * rc.transpose();
        return out;
    }

    /// Shift <a_j* a_j> by delta on every mode. delta = -1/2 converts
    /// symmetric-ordered moments to normal-ordered ones; anomalous moments
    /// are ordering independent.
    PairMoments with_vacuum_shift(Scalar delta) const {
        PairMoments out = *this;
        out.normal.diagonal().array() += delta;
        return out;
    }
};

/// Second moments <z_i z_j> of four zero-mean jointly Gaussian variables,
/// stored as a symmetric matrix. Only the off-diagonal entries enter the
/// fourth moment.
template <typename Scalar>
using PairingTable = Matrix4c<Scalar>;

/// <z1 z2 z3 z4> = <z1 z2><z3 z4> + <z1 z3><z2 z4> + <z1 z4><z2 z3>.
template <typename Scalar = double>
std::complex<Scalar> isserlis_fourth_moment(const PairingTable<Scalar>& t) {
    return t(0, 1) * t(2, 3) + t(0, 2) * t(1, 3) + t(0, 3) * t(1, 2);
}

/// Pairing table of (b_j*, b_j, b_k*, b_k) for components j, k of a field
/// with the given pair moments.
template <typename Scalar = double>
PairingTable<Scalar> intensity_pairing_table(const PairMoments<Scalar>& m, Eigen::Index j, Eigen::Index k) {
    using std::conj;
    PairingTable<Scalar> t;
    const auto njj = m.normal(j, j);
    const auto nkk = m.normal(k, k);
    const auto njk = m.normal(j, k);  // <b_j* b_k>
    const auto mjk = m.anomalous(j, k);  // <b_j b_k>
    // z = (b_j*, b_j, b_k*, b_k)
    t(0, 1) = njj;
    t(0, 2) = conj(mjk);
    t(0, 3) = njk;
    t(1, 2) = conj(njk);
    t(1, 3) = mjk;
    t(2, 3) = nkk;
    t.diagonal().setZero();
    t(1, 0) = t(0, 1);
    t(2, 0) = t(0, 2);
    t(3, 0) = t(0, 3);
    t(2, 1) = t(1, 2);
    t(3, 1) = t(1, 3);
    t(3, 2) = t(2, 3);
    return t;
}

/// <|b_j|^2 |b_k|^2> of a Gaussian field by three-pairing factorization.
template <typename Scalar = double>
Scalar intensity_correlation(const PairMoments<Scalar>& m, Eigen::Index j, Eigen::Index k) {
    return isserlis_fourth_moment(intensity_pairing_table(m, j, k)).real();
}

}  // namespace bellorder
