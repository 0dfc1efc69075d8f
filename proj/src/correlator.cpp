#include "bellorder/correlator.hpp"

#include <string>

#include "bellorder/random.hpp"
#include "bellorder/sampler.hpp"

namespace bellorder {

namespace {

// (signal port, idler port) in pp, mm, pm, mp order
constexpr std::array<std::pair<Port, Port>, 4> kPortPairs{{
    {SignalPlus, IdlerPlus},
    {SignalMinus, IdlerMinus},
    {SignalPlus, IdlerMinus},
    {SignalMinus, IdlerPlus},
}};

void require_samples(const SampleConfig& config) {
    config.validate();
    if (config.n_samples < kMinSamples) {
        throw Error(ErrorCode::InsufficientSamples,
                    "n_samples = " + std::to_string(config.n_samples) + " < " + std::to_string(kMinSamples) +
                        "; standard errors are meaningless");
    }
}

EstimateWithError entry(const SettingAccumulator& acc, int k, Ordering ordering, McPath path) {
    if (path == McPath::Direct) return acc.component(k);
    return delta_method(acc, [k, ordering](const SettingFeatures& mu) { return paired_correlations(mu, ordering)(k); });
}

}  // namespace

SettingFeatures setting_features(const PortAmplitudes<double>& ports) {
    SettingFeatures y;
    const Eigen::Vector4d intensity = ports.p.cwiseAbs2();
    for (int k = 0; k < 4; ++k) {
        const auto [s, i] = kPortPairs[k];
        const std::complex<double> anomalous = ports.p(s) * ports.p(i);
        const std::complex<double> normal = std::conj(ports.p(s)) * ports.p(i);
        y(k) = intensity(s) * intensity(i);
        y(4 + k) = intensity(k);
        y(8 + 2 * k) = anomalous.real();
        y(9 + 2 * k) = anomalous.imag();
        y(16 + 2 * k) = normal.real();
        y(17 + 2 * k) = normal.imag();
    }
    return y;
}

SettingAccumulator accumulate_setting(const Coupling<double>& coupling, const MeasurementSetting<double>& setting,
                                      const SampleConfig& config, std::uint32_t stream_id) {
    config.validate();
    const auto parts = run_chunks<SettingAccumulator>(config.n_chunks, [&](std::uint32_t chunk) {
        const auto [begin, end] = chunk_range(config.n_samples, config.n_chunks, chunk);
        RandomStream stream(config.seed, stream_id, chunk);
        SettingAccumulator acc;
        for (std::uint64_t n = begin; n < end; ++n) {
            const auto modes = propagate(sample_vacuum(Ordering::Symmetric, stream), coupling);
            acc.add(setting_features(analyze(modes, setting)));
        }
        return acc;
    });
    return reduce_in_order(parts);
}

Eigen::Vector4d direct_correlations(const SettingFeatures& mean) { return mean.head<4>(); }

Eigen::Vector4d paired_correlations(const SettingFeatures& mean, Ordering ordering) {
    // Wigner samples carry <a* a> = n + 1/2 per port; normal order drops it.
    const double shift = ordering == Ordering::Normal ? 0.5 : 0.0;
    Eigen::Vector4d c;
    for (int k = 0; k < 4; ++k) {
        const auto [s, i] = kPortPairs[k];
        PairMoments<double> m;
        m.normal(s, s) = mean(4 + s) - shift;
        m.normal(i, i) = mean(4 + i) - shift;
        m.anomalous(s, i) = {mean(8 + 2 * k), mean(9 + 2 * k)};
        m.normal(s, i) = {mean(16 + 2 * k), mean(17 + 2 * k)};
        c(k) = intensity_correlation(m, s, i);
    }
    return c;
}

double m_ratio(const Eigen::Vector4d& c) {
    const double denominator = c.sum();
    if (denominator == 0.0) {
        throw Error(ErrorCode::DegenerateDenominator, "all four coincidence values are zero");
    }
    return (c(0) + c(1) - c(2) - c(3)) / denominator;
}

McPath resolve_path(Ordering ordering, McPath path) {
    if (path == McPath::Auto) return ordering == Ordering::Symmetric ? McPath::Direct : McPath::Paired;
    if (path == McPath::Direct && ordering == Ordering::Normal) {
        throw Error(ErrorCode::NormalOrderDirectSampling,
                    "Glauber-representation input amplitudes vanish identically (epsilon = 0), so every "
                    "normal-ordered trajectory is zero; use the paired path with vacuum subtraction");
    }
    return path;
}

CorrelationEstimate estimate_correlations(const SettingAccumulator& acc, Ordering ordering, McPath path) {
    path = resolve_path(ordering, path);
    CorrelationEstimate out;
    out.ordering = ordering;
    out.path = path;
    out.c_pp = entry(acc, 0, ordering, path);
    out.c_mm = entry(acc, 1, ordering, path);
    out.c_pm = entry(acc, 2, ordering, path);
    out.c_mp = entry(acc, 3, ordering, path);
    out.m = delta_method(acc, [ordering, path](const SettingFeatures& mu) {
        return m_ratio(path == McPath::Direct ? direct_correlations(mu) : paired_correlations(mu, ordering));
    });
    return out;
}

CorrelationEstimate mc_correlations(const Coupling<double>& coupling, const MeasurementSetting<double>& setting,
                                    const SampleConfig& config, Ordering ordering, McPath path,
                                    std::uint32_t stream_id) {
    require_samples(config);
    path = resolve_path(ordering, path);
    auto out = estimate_correlations(accumulate_setting(coupling, setting, config, stream_id), ordering, path);
    out.setting = setting;
    out.g_tau = coupling.g_tau();
    return out;
}

std::array<EstimateWithError, 4> mc_intensities(const Coupling<double>& coupling,
                                                const MeasurementSetting<double>& setting,
                                                const SampleConfig& config, Ordering ordering,
                                                std::uint32_t stream_id) {
    require_samples(config);
    const auto acc = accumulate_setting(coupling, setting, config, stream_id);
    const double shift = ordering == Ordering::Normal ? 0.5 : 0.0;
    std::array<EstimateWithError, 4> out;
    for (int k = 0; k < 4; ++k) {
        out[k] = acc.component(4 + k);
        out[k].value -= shift;
    }
    return out;
}

}  // namespace bellorder
