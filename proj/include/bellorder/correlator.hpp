#pragma once

#include <cstdint>

#include "analyzer.hpp"
#include "moments.hpp"
#include "propagator.hpp"
#include "statistics.hpp"
#include "types.hpp"

namespace bellorder {

/// Coincidence values C_{++}, C_{--}, C_{+-}, C_{-+} at one setting.
template <typename Scalar = double>
struct CorrelationTable {
    Scalar c_pp{0};
    Scalar c_mm{0};
    Scalar c_pm{0};
    Scalar c_mp{0};
    MeasurementSetting<Scalar> setting{};
    Ordering ordering = Ordering::Symmetric;
    Scalar g_tau{0};

    CorrelationTable scaled(Scalar factor) const {
        CorrelationTable out = *this;
        out.c_pp *= factor;
        out.c_mm *= factor;
        out.c_pm *= factor;
        out.c_mp *= factor;
        return out;
    }
};

/// <I^s_+-(theta)> = <I^i_+-(phi)> = epsilon/2 + sinh^2(g tau) for every angle.
template <typename Scalar = double>
Scalar analytic_intensity(const Coupling<Scalar>& coupling, Ordering ordering) {
    return analytic_second_moments(coupling, ordering).n_mode;
}

/// Port-basis pair moments at a given analyzer setting.
template <typename Scalar = double>
PairMoments<Scalar> analytic_port_moments(const Coupling<Scalar>& coupling, Ordering ordering,
                                          const MeasurementSetting<Scalar>& setting) {
    return PairMoments<Scalar>::from_second_moments(analytic_second_moments(coupling, ordering))
        .transformed(analyzer_matrix(setting));
}

/// Coincidence table assembled from the port second moments through the
/// three-pairing factorization of each <I^s_j I^i_k>.
template <typename Scalar = double>
CorrelationTable<Scalar> analytic_correlations(const Coupling<Scalar>& coupling, Ordering ordering,
                                               const MeasurementSetting<Scalar>& setting) {
    const auto m = analytic_port_moments(coupling, ordering, setting);
    CorrelationTable<Scalar> t;
    t.c_pp = intensity_correlation(m, SignalPlus, IdlerPlus);
    t.c_mm = intensity_correlation(m, SignalMinus, IdlerMinus);
    t.c_pm = intensity_correlation(m, SignalPlus, IdlerMinus);
    t.c_mp = intensity_correlation(m, SignalMinus, IdlerPlus);
    t.setting = setting;
    t.ordering = ordering;
    t.g_tau = coupling.g_tau();
    return t;
}

//---------------------------------------------------------------------------//
// Monte Carlo
//---------------------------------------------------------------------------//

/// How a Monte Carlo coincidence value is formed from Wigner trajectories.
enum class McPath {
    Auto,    ///< Direct for symmetric ordering, Paired for normal ordering
    Direct,  ///< per-trajectory product |a^s_j|^2 |a^i_k|^2 (symmetric only)
    Paired,  ///< three-pairing assembly from empirical pair moments
};

inline constexpr std::uint64_t kMinSamples = 100;

/// Per-setting feature vector accumulated over Wigner trajectories.
///
/// Layout: [0,4) raw products pp, mm, pm, mp; [4,8) intensities s+, s-, i+,
/// i-; [8,16) Re/Im <a^s_j a^i_k>; [16,24) Re/Im <a^s_j* a^i_k>, both in
/// pp, mm, pm, mp order.
inline constexpr int kSettingFeatures = 24;
using SettingAccumulator = MomentAccumulator<kSettingFeatures>;
using SettingFeatures = SettingAccumulator::Vector;

SettingFeatures setting_features(const PortAmplitudes<double>& ports);

/// Accumulate features of n_samples trajectories at one setting. Streams are
/// keyed by (config.seed, stream_id, chunk).
SettingAccumulator accumulate_setting(const Coupling<double>& coupling, const MeasurementSetting<double>& setting,
                                      const SampleConfig& config, std::uint32_t stream_id = 0);

/// Coincidence values (pp, mm, pm, mp) as functions of the feature means.
Eigen::Vector4d direct_correlations(const SettingFeatures& mean);
Eigen::Vector4d paired_correlations(const SettingFeatures& mean, Ordering ordering);

/// M = (C++ + C-- - C+- - C-+) / (sum) for a 4-vector of coincidences.
double m_ratio(const Eigen::Vector4d& c);

struct CorrelationEstimate {
    EstimateWithError c_pp;
    EstimateWithError c_mm;
    EstimateWithError c_pm;
    EstimateWithError c_mp;
    EstimateWithError m;  ///< normalized correlation, delta-method error
    MeasurementSetting<double> setting;
    Ordering ordering = Ordering::Symmetric;
    McPath path = McPath::Direct;
    double g_tau = 0.0;

    CorrelationTable<double> table() const {
        return {c_pp.value, c_mm.value, c_pm.value, c_mp.value, setting, ordering, g_tau};
    }
};

/// Resolve McPath::Auto and reject normal-ordered direct sampling.
McPath resolve_path(Ordering ordering, McPath path);

CorrelationEstimate estimate_correlations(const SettingAccumulator& acc, Ordering ordering, McPath path);

CorrelationEstimate mc_correlations(const Coupling<double>& coupling, const MeasurementSetting<double>& setting,
                                    const SampleConfig& config, Ordering ordering, McPath path = McPath::Auto,
                                    std::uint32_t stream_id = 0);

/// Per-port intensity estimates (s+, s-, i+, i-) under the given ordering.
std::array<EstimateWithError, 4> mc_intensities(const Coupling<double>& coupling,
                                                const MeasurementSetting<double>& setting,
                                                const SampleConfig& config, Ordering ordering = Ordering::Symmetric,
                                                std::uint32_t stream_id = 0);

}  // namespace bellorder
