#pragma once

#include <cmath>
#include <complex>

#include "types.hpp"

namespace bellorder {

/// Index of each detector port in the port vector.
enum Port : Eigen::Index { SignalPlus = 0, SignalMinus = 1, IdlerPlus = 2, IdlerMinus = 3 };

/// Amplitudes at the four detectors D^s_+, D^s_-, D^i_+, D^i_-.
template <typename Scalar = double>
struct PortAmplitudes {
    ModeVector<Scalar> p = ModeVector<Scalar>::Zero();

    std::complex<Scalar> s_plus() const { return p(SignalPlus); }
    std::complex<Scalar> s_minus() const { return p(SignalMinus); }
    std::complex<Scalar> i_plus() const { return p(IdlerPlus); }
    std::complex<Scalar> i_minus() const { return p(IdlerMinus); }

    Scalar intensity(Port port) const { return std::norm(p(port)); }
};

/// Real 4x4 map from (s_H, s_V, i_H, i_V) to (s_+, s_-, i_+, i_-):
/// a_+ = a_H cos + a_V sin, a_- = a_V cos - a_H sin, per beam.
template <typename Scalar = double>
Eigen::Matrix<Scalar, 4, 4> analyzer_matrix(const MeasurementSetting<Scalar>& setting) {
    const Scalar ct = std::cos(setting.theta), st = std::sin(setting.theta);
    const Scalar cp = std::cos(setting.phi), sp = std::sin(setting.phi);
    Eigen::Matrix<Scalar, 4, 4> r;
    // clang-format off
    r <<  ct,  st, 0,   0,
         -st,  ct, 0,   0,
          0,   0,  cp,  sp,
          0,   0, -sp,  cp;
    // clang-format on
    return r;
}

template <typename Scalar = double>
PortAmplitudes<Scalar> analyze(const ModeAmplitudes<Scalar>& modes, const MeasurementSetting<Scalar>& setting) {
    PortAmplitudes<Scalar> out;
    out.p = analyzer_matrix(setting).template cast<std::complex<Scalar>>() * modes.a;
    return out;
}

}  // namespace bellorder
