#pragma once

#include <cmath>

#include "random.hpp"
#include "types.hpp"

namespace bellorder {

/// Draw the input vacuum amplitudes of the four modes.
///
/// Real and imaginary parts are independent zero-mean normals of variance
/// epsilon/4, so <a> = 0, <a a> = 0 and <a a*> = epsilon/2 per mode with no
/// cross-mode correlation. Normal ordering returns the zero vector without
/// touching the stream.
template <typename Scalar = double>
ModeAmplitudes<Scalar> sample_vacuum(Ordering ordering, RandomStream& stream) {
    ModeAmplitudes<Scalar> out;
    if (ordering == Ordering::Normal) return out;
    const Scalar sigma = std::sqrt(epsilon<Scalar>(ordering) / Scalar(4));
    for (Eigen::Index k = 0; k < 4; ++k) {
        Scalar re = static_cast<Scalar>(stream.next_normal());
        Scalar im = static_cast<Scalar>(stream.next_normal());
        out.a(k) = std::complex<Scalar>(sigma * re, sigma * im);
    }
    return out;
}

}  // namespace bellorder
