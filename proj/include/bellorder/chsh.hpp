#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "correlator.hpp"
#include "homodyne.hpp"
#include "types.hpp"

namespace bellorder {

/// Normalized correlation (C++ + C-- - C+- - C-+) / (C++ + C-- + C+- + C-+).
/// Throws DegenerateDenominator when all four entries vanish.
template <typename Scalar = double>
Scalar m_value(const CorrelationTable<Scalar>& t) {
    const Scalar denominator = t.c_pp + t.c_mm + t.c_pm + t.c_mp;
    if (denominator == Scalar(0)) {
        throw Error(ErrorCode::DegenerateDenominator, "all four coincidence values are zero");
    }
    return (t.c_pp + t.c_mm - t.c_pm - t.c_mp) / denominator;
}

template <typename Scalar = double>
struct ChshResult {
    Scalar s_value{0};
    Scalar s_error{0};  ///< zero for the analytic engine
    Ordering ordering = Ordering::Normal;
    Scalar g_tau{0};
    ChshSetting<Scalar> setting{};
    std::array<Scalar, 4> per_setting_m{};
    std::array<Scalar, 4> per_setting_m_error{};
};

template <typename Scalar = double>
ChshResult<Scalar> analytic_chsh(const Coupling<Scalar>& coupling, Ordering ordering,
                                 const ChshSetting<Scalar>& setting = {}) {
    ChshResult<Scalar> r;
    r.ordering = ordering;
    r.g_tau = coupling.g_tau();
    r.setting = setting;
    const auto pairs = setting.pairs();
    const auto signs = ChshSetting<Scalar>::signs();
    for (std::size_t k = 0; k < 4; ++k) {
        r.per_setting_m[k] = m_value(analytic_correlations(coupling, ordering, pairs[k]));
        r.s_value += signs[k] * r.per_setting_m[k];
    }
    return r;
}

/// Canonical-setting closed forms, used as an independent check.
template <typename Scalar = double>
Scalar closed_form_chsh(Scalar g_tau, Ordering ordering) {
    using std::cosh, std::sinh, std::sqrt;
    const Scalar s2 = sinh(2 * g_tau) * sinh(2 * g_tau);
    const Scalar rest = ordering == Ordering::Normal ? 8 * std::pow(sinh(g_tau), 4)
                                                     : 2 * cosh(2 * g_tau) * cosh(2 * g_tau);
    return 2 * sqrt(Scalar(2)) * s2 / (s2 + rest);
}

struct AnalyticEngine {};

struct MonteCarloEngine {
    SampleConfig config;
    McPath path = McPath::Auto;
};

struct HomodyneEngine {
    SampleConfig config;
    HomodyneOptions options;
};

using Engine = std::variant<AnalyticEngine, MonteCarloEngine, HomodyneEngine>;

/// S = M(theta, phi) + M(theta', phi) - M(theta, phi') + M(theta', phi').
///
/// Monte Carlo engines run each of the four settings on its own stream
/// (stream id = setting index), so per-setting errors are independent and
/// add in quadrature.
ChshResult<double> chsh_s(const Coupling<double>& coupling, Ordering ordering, const ChshSetting<double>& setting,
                          const Engine& engine = AnalyticEngine{});

struct SweepPoint {
    double g_tau = 0.0;
    Ordering ordering = Ordering::Normal;
    std::optional<ChshResult<double>> result;
    std::optional<ErrorCode> error;
    std::string message;
};

/// Evaluate S on each grid point in order; failures are recorded per point.
std::vector<SweepPoint> sweep(const std::vector<double>& g_tau_grid, Ordering ordering,
                              const ChshSetting<double>& setting = {}, const Engine& engine = AnalyticEngine{});

/// g tau at which the normal-ordered S crosses the classical bound 2,
/// by bisection to the given interval width.
double violation_threshold(Ordering ordering, double tolerance);

}  // namespace bellorder
