#include "bellorder/chsh.hpp"

#include <cmath>

namespace bellorder {

namespace {

template <typename Estimate>
void fill_from_estimates(ChshResult<double>& r, const std::array<Estimate, 4>& per_setting) {
    const auto signs = ChshSetting<double>::signs();
    double variance = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        r.per_setting_m[k] = per_setting[k].value;
        r.per_setting_m_error[k] = per_setting[k].std_error;
        r.s_value += signs[k] * per_setting[k].value;
        variance += per_setting[k].std_error * per_setting[k].std_error;
    }
    r.s_error = std::sqrt(variance);
}

}  // namespace

ChshResult<double> chsh_s(const Coupling<double>& coupling, Ordering ordering, const ChshSetting<double>& setting,
                          const Engine& engine) {
    if (std::holds_alternative<AnalyticEngine>(engine)) return analytic_chsh(coupling, ordering, setting);

    ChshResult<double> r;
    r.ordering = ordering;
    r.g_tau = coupling.g_tau();
    r.setting = setting;
    const auto pairs = setting.pairs();
    std::array<EstimateWithError, 4> m;

    if (const auto* mc = std::get_if<MonteCarloEngine>(&engine)) {
        for (std::uint32_t k = 0; k < 4; ++k) {
            m[k] = mc_correlations(coupling, pairs[k], mc->config, ordering, mc->path, k).m;
        }
    } else {
        const auto& hd = std::get<HomodyneEngine>(engine);
        if (ordering != Ordering::Symmetric) {
            throw Error(ErrorCode::HomodyneRequiresSymmetric,
                        "homodyne detection measures symmetrically ordered correlations only");
        }
        for (std::uint32_t k = 0; k < 4; ++k) {
            m[k] = symmetric_intensity_correlation(hd.config, coupling, pairs[k], hd.options, k).correlations.m;
        }
    }
    fill_from_estimates(r, m);
    return r;
}

std::vector<SweepPoint> sweep(const std::vector<double>& g_tau_grid, Ordering ordering,
                              const ChshSetting<double>& setting, const Engine& engine) {
    std::vector<SweepPoint> out;
    out.reserve(g_tau_grid.size());
    for (double g : g_tau_grid) {
        SweepPoint p;
        p.g_tau = g;
        p.ordering = ordering;
        try {
            p.result = chsh_s(Coupling<double>(g), ordering, setting, engine);
        } catch (const Error& e) {
            p.error = e.code();
            p.message = e.what();
        }
        out.push_back(std::move(p));
    }
    return out;
}

double violation_threshold(Ordering ordering, double tolerance) {
    if (ordering == Ordering::Symmetric) {
        throw Error(ErrorCode::NoCrossing, "symmetric-ordered S never exceeds the classical bound");
    }
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
        throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    }
    auto excess = [](double g) { return analytic_chsh(Coupling<double>(g), Ordering::Normal).s_value - 2.0; };
    // S_N decreases monotonically from 2 sqrt2 toward 2 sqrt2 / 3.
    double lo = 1e-6;
    double hi = 5.0;
    for (int it = 0; it < 200 && hi - lo > tolerance; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace bellorder
