#include "bellorder/homodyne.hpp"

#include <numbers>

#include "bellorder/propagator.hpp"
#include "bellorder/sampler.hpp"

namespace bellorder {

namespace {

// Difference-photocurrent observable U^H diag(1, -1) U in the (port, LO) basis.
const Eigen::Matrix2cd& difference_observable() {
    static const Eigen::Matrix2cd k = [] {
        const Eigen::Matrix2cd u = balanced_splitter();
        const Eigen::Matrix2cd z = Eigen::Vector2cd(1.0, -1.0).asDiagonal();
        return Eigen::Matrix2cd(u.adjoint() * z * u);
    }();
    return k;
}

void require_lo(double amplitude) {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
        throw Error(ErrorCode::ZeroLO, "local oscillator amplitude must be positive and finite");
    }
}

// Offset of the stream feeding the extra splitter vacuum in physical mode.
constexpr std::uint32_t kSplitterStreamOffset = 0x10000;

constexpr std::array<std::pair<Port, Port>, 4> kPortPairs{{
    {SignalPlus, IdlerPlus},
    {SignalMinus, IdlerMinus},
    {SignalPlus, IdlerMinus},
    {SignalMinus, IdlerPlus},
}};

HomodyneAccumulator::Vector homodyne_features(const PortQuadratures& q) {
    HomodyneAccumulator::Vector y;
    for (int k = 0; k < 4; ++k) {
        const auto [s, i] = kPortPairs[k];
        y(k) = q[s].intensity() * q[i].intensity();
        y(4 + k) = q[k].intensity();
        y(8 + 4 * k) = q[s].x * q[i].x;
        y(9 + 4 * k) = q[s].x * q[i].y;
        y(10 + 4 * k) = q[s].y * q[i].x;
        y(11 + 4 * k) = q[s].y * q[i].y;
    }
    return y;
}

}  // namespace

Eigen::Vector2cd homodyne_outputs(std::complex<double> port, const LocalOscillator& lo) {
    return balanced_splitter() * Eigen::Vector2cd(port, lo.beta());
}

double balanced_homodyne(std::complex<double> port, const LocalOscillator& lo) {
    require_lo(lo.amplitude);
    const Eigen::Vector2cd v(port, lo.beta());
    const double difference = v.dot(difference_observable() * v).real();
    return difference / (2.0 * lo.amplitude);
}

QuadratureSample measure_quadratures(std::complex<double> port, double lo_amplitude) {
    return {balanced_homodyne(port, {lo_amplitude, 0.0}),
            balanced_homodyne(port, {lo_amplitude, std::numbers::pi / 2})};
}

QuadratureSample measure_quadratures_split(std::complex<double> port, std::complex<double> vacuum,
                                           double lo_amplitude) {
    const Eigen::Vector2cd halves = balanced_splitter() * Eigen::Vector2cd(port, vacuum);
    const double gain = std::sqrt(2.0);
    return {gain * balanced_homodyne(halves(0), {lo_amplitude, 0.0}),
            gain * balanced_homodyne(halves(1), {lo_amplitude, std::numbers::pi / 2})};
}

PortQuadratures measure_ports(const PortAmplitudes<double>& ports, double lo_amplitude) {
    PortQuadratures q;
    for (int k = 0; k < 4; ++k) q[k] = measure_quadratures(ports.p(k), lo_amplitude);
    return q;
}

HomodyneEstimate symmetric_intensity_correlation(const SampleConfig& config, const Coupling<double>& coupling,
                                                 const MeasurementSetting<double>& setting,
                                                 const HomodyneOptions& options, std::uint32_t stream_id) {
    config.validate();
    if (config.n_samples < kMinSamples) {
        throw Error(ErrorCode::InsufficientSamples, "homodyne emulation needs at least 100 samples");
    }
    require_lo(options.lo_amplitude);

    const auto parts = run_chunks<HomodyneAccumulator>(config.n_chunks, [&](std::uint32_t chunk) {
        const auto [begin, end] = chunk_range(config.n_samples, config.n_chunks, chunk);
        RandomStream stream(config.seed, stream_id, chunk);
        RandomStream splitter(config.seed, stream_id + kSplitterStreamOffset, chunk);
        HomodyneAccumulator acc;
        for (std::uint64_t n = begin; n < end; ++n) {
            const auto ports = analyze(propagate(sample_vacuum(Ordering::Symmetric, stream), coupling), setting);
            PortQuadratures q;
            if (options.physical) {
                const auto vacuum = sample_vacuum(Ordering::Symmetric, splitter);
                for (int k = 0; k < 4; ++k) {
                    q[k] = measure_quadratures_split(ports.p(k), vacuum.a(k), options.lo_amplitude);
                }
            } else {
                q = measure_ports(ports, options.lo_amplitude);
            }
            acc.add(homodyne_features(q));
        }
        return acc;
    });
    const auto acc = reduce_in_order(parts);

    HomodyneEstimate out;
    auto& c = out.correlations;
    c.ordering = Ordering::Symmetric;
    c.path = McPath::Direct;
    c.setting = setting;
    c.g_tau = coupling.g_tau();
    c.c_pp = acc.component(0);
    c.c_mm = acc.component(1);
    c.c_pm = acc.component(2);
    c.c_mp = acc.component(3);
    c.m = delta_method(acc, [](const HomodyneAccumulator::Vector& mu) { return m_ratio(mu.head<4>()); });
    for (int k = 0; k < 4; ++k) {
        out.intensities[k] = acc.component(4 + k);
        out.quadratures[k] = {acc.component(8 + 4 * k), acc.component(9 + 4 * k), acc.component(10 + 4 * k),
                              acc.component(11 + 4 * k)};
    }
    return out;
}

}  // namespace bellorder
