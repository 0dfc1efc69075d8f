#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

#include "analyzer.hpp"
#include "correlator.hpp"
#include "random.hpp"
#include "statistics.hpp"
#include "types.hpp"

namespace bellorder {

/// Coherent local oscillator with amplitude |beta| and phase.
struct LocalOscillator {
    double amplitude = 1e3;
    double phase = 0.0;

    std::complex<double> beta() const { return std::polar(amplitude, phase); }
};

/// Conjugate quadratures X = Re(a), Y = Im(a) of one port.
struct QuadratureSample {
    double x = 0.0;
    double y = 0.0;

    double intensity() const { return x * x + y * y; }
};

/// 50/50 beam splitter acting on (port, LO): out1 = (a + b)/sqrt2, out2 = (a - b)/sqrt2.
inline Eigen::Matrix2cd balanced_splitter() {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd u;
    u << r, r, r, -r;
    return u;
}

/// Output fields of the balanced splitter for inspection.
Eigen::Vector2cd homodyne_outputs(std::complex<double> port, const LocalOscillator& lo);

/// Balanced homodyne reading of one port, normalized to a quadrature:
/// (|out1|^2 - |out2|^2) / (2|beta|) = Re(a e^{-i phase}).
///
/// The difference photocurrent is evaluated as the Hermitian form
/// v^H (U^H diag(1,-1) U) v on the input field v = (a, beta), which avoids
/// cancelling two O(|beta|^2) intensities.
double balanced_homodyne(std::complex<double> port, const LocalOscillator& lo);

/// X and Y of a port by two homodyne shots at phases 0 and pi/2.
QuadratureSample measure_quadratures(std::complex<double> port, double lo_amplitude);

/// X and Y after first splitting the port with a vacuum-loaded 50/50 beam
/// splitter; X is read on one half and Y on the other, each rescaled by
/// sqrt2. The extra vacuum adds 1/2 to the mean intensity.
QuadratureSample measure_quadratures_split(std::complex<double> port, std::complex<double> vacuum,
                                           double lo_amplitude);

/// Quadratures of all four ports on one trajectory.
using PortQuadratures = std::array<QuadratureSample, 4>;

PortQuadratures measure_ports(const PortAmplitudes<double>& ports, double lo_amplitude);

/// <X^s X^i>, <X^s Y^i>, <Y^s X^i>, <Y^s Y^i> for one signal/idler port pair.
struct QuadratureCorrelations {
    EstimateWithError xx;
    EstimateWithError xy;
    EstimateWithError yx;
    EstimateWithError yy;
};

struct HomodyneOptions {
    double lo_amplitude = 1e3;
    bool physical = false;  ///< split each port before dual homodyning
};

struct HomodyneEstimate {
    CorrelationEstimate correlations;  ///< ordering is always Symmetric
    std::array<EstimateWithError, 4> intensities;  ///< s+, s-, i+, i-
    std::array<QuadratureCorrelations, 4> quadratures;  ///< pp, mm, pm, mp
};

/// Feature layout: [0,4) I^s_j I^i_k (pp, mm, pm, mp); [4,8) I per port;
/// [8,24) XX, XY, YX, YY for each port pair.
inline constexpr int kHomodyneFeatures = 24;
using HomodyneAccumulator = MomentAccumulator<kHomodyneFeatures>;

/// Symmetrically ordered coincidences reconstructed from quadrature
/// readings on Wigner trajectories. With physical = false the trajectories
/// (and hence every per-trajectory intensity) coincide with those of
/// mc_correlations for the same config and stream id.
HomodyneEstimate symmetric_intensity_correlation(const SampleConfig& config, const Coupling<double>& coupling,
                                                 const MeasurementSetting<double>& setting,
                                                 const HomodyneOptions& options = {}, std::uint32_t stream_id = 0);

}  // namespace bellorder
