// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bellorder/chsh.hpp"
#include "bellorder/cli.hpp"
#include "bellorder/correlator.hpp"
#include "bellorder/homodyne.hpp"
#include "bellorder/sampler.hpp"

using namespace bellorder;

namespace {

const double kTsirelson = 2 * std::sqrt(2.0);
constexpr double kSigmas = 5.0;
constexpr double kExact = 1e-12;

class Criterion {
public:
    explicit Criterion(std::string name) : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass_ = false;
            failures_.push_back(what);
        }
        ++checks_;
    }

    void note(const std::string& text) { notes_.push_back(text); }

    bool report() const {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        std::printf("[%s] %s (%d checks, %.2f s)\n", pass_ ? "PASS" : "FAIL", name_.c_str(), checks_, secs);
        for (const auto& n : notes_) std::printf("       %s\n", n.c_str());
        for (const auto& f : failures_) std::printf("       failed: %s\n", f.c_str());
        return pass_;
    }

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::string name_;
    std::chrono::steady_clock::time_point start_;
    bool pass_ = true;
    int checks_ = 0;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

double coeff_a(double g, double eps) {
    const double n = eps / 2 + std::sinh(g) * std::sinh(g);
    return n * n;
}
double coeff_b(double g) { return 0.25 * std::sinh(2 * g) * std::sinh(2 * g); }

//---------------------------------------------------------------------------//

bool thin_crystal_limit() {
    Criterion c("1 thin-crystal limit: S_N -> 2 sqrt2, S_S -> 0 at g tau = 1e-4");
    const Coupling<double> g(1e-4);
    const double sn = chsh_s(g, Ordering::Normal, {}).s_value;
    const double ss = chsh_s(g, Ordering::Symmetric, {}).s_value;
    c.check(std::abs(sn - kTsirelson) <= 1e-6, fmt("S_N = %.9f", sn));
    c.check(std::abs(ss) <= 1e-6, fmt("S_S = %.3e", ss));
    c.note(fmt("S_N = %.9f, S_S = %.3e", sn, ss));
    return c.report();
}

bool figure_two_sweep() {
    Criterion c("2 S(g tau) sweep over [0, 2]: monotone curves, common limit, crossing of the bound");
    std::ostringstream out, err;
    const int status = cli::run({"--command", "chsh-sweep", "--grid", "0:2:201", "--format", "json"}, out, err);
    c.check(status == 0, "chsh-sweep exit status " + std::to_string(status) + ": " + err.str());
    if (status != 0) return c.report();
    const auto table = cli::read_json(out.str());
    c.check(table.rows.size() == 201, "201 rows");

    std::vector<double> sn, ss;
    for (const auto& row : table.rows) {
        if (row[1]) sn.push_back(*row[1]);
        ss.push_back(row[2].value_or(NAN));
    }
    c.check(!table.rows[0][1].has_value(), "normal-ordered point at g tau = 0 is flagged degenerate");
    c.check(sn.size() == 200, "200 normal-ordered values");
    c.check(std::abs(sn.front() - kTsirelson) <= 1e-3, fmt("S_N(0.01) = %.6f", sn.front()));
    c.check(ss.front() == 0.0, fmt("S_S(0) = %.3e", ss.front()));
    for (std::size_t k = 1; k < sn.size(); ++k) c.check(sn[k] < sn[k - 1], fmt("S_N not decreasing at row %g", k));
    for (std::size_t k = 1; k < ss.size(); ++k) c.check(ss[k] > ss[k - 1], fmt("S_S not increasing at row %g", k));
    for (std::size_t k = 0; k < ss.size(); ++k) c.check(ss[k] < 2.0, "S_S never violates");

    const double limit = kTsirelson / 3;
    const double sn5 = chsh_s(Coupling<double>(5.0), Ordering::Normal, {}).s_value;
    const double ss5 = chsh_s(Coupling<double>(5.0), Ordering::Symmetric, {}).s_value;
    c.check(std::abs(sn5 - limit) <= 1e-3, fmt("S_N(5) = %.6f", sn5));
    c.check(std::abs(ss5 - limit) <= 1e-3, fmt("S_S(5) = %.6f", ss5));

    // Root of 2 tanh^2(g tau) = sqrt2 - 1.
    const double oracle = std::atanh(std::sqrt((std::sqrt(2.0) - 1) / 2));
    const double root = violation_threshold(Ordering::Normal, 1e-6);
    c.check(std::abs(root - oracle) <= 1e-6, fmt("bisection root %.9f vs %.9f", root, oracle));
    c.note(fmt("S(5): normal %.6f, symmetric %.6f, limit %.6f", sn5, ss5, limit));
    c.note(fmt("crossing of S_N = 2 at g tau = %.7f (atanh(sqrt((sqrt2-1)/2)) = %.7f)", root, oracle));
    c.check(c.elapsed() < 1.0, fmt("runtime %.3f s", c.elapsed()));
    return c.report();
}

bool monte_carlo_vs_analytic() {
    Criterion c("3 Monte Carlo vs analytic coincidences (symmetric, N = 1e6, 5 sigma)");
    const ChshSetting<double> canonical;
    const auto pairs = canonical.pairs();
    double worst = 0.0;
    double slowest = 0.0;
    for (double g : {0.1, 0.5, 1.0}) {
        const auto t0 = std::chrono::steady_clock::now();
        for (std::uint32_t k = 0; k < 4; ++k) {
            const auto e = mc_correlations(Coupling<double>(g), pairs[k], {1'000'000, 0xACCE97, 8},
                                           Ordering::Symmetric, McPath::Direct, k);
            const double d = pairs[k].theta - pairs[k].phi;
            const double a = coeff_a(g, 1.0), b = coeff_b(g);
            const double same = a + b * std::pow(std::cos(d), 2), cross = a + b * std::pow(std::sin(d), 2);
            for (auto [est, target, label] : {std::tuple{e.c_pp, same, "C++"}, std::tuple{e.c_mm, same, "C--"},
                                              std::tuple{e.c_pm, cross, "C+-"}, std::tuple{e.c_mp, cross, "C-+"}}) {
                worst = std::max(worst, est.z_score(target));
                c.check(est.within(target, kSigmas),
                        std::string(label) + fmt(" at g=%.1f setting %g: z = %.2f", g, k, est.z_score(target)));
            }
        }
        slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    const auto aligned = mc_correlations(Coupling<double>(0.5), {0.0, 0.0}, {1'000'000, 0xA11, 8},
                                         Ordering::Symmetric);
    c.check(aligned.c_pp.within(0.9405489227709078, kSigmas), fmt("aligned C++ at 0.5 = %.6f", aligned.c_pp.value));
    c.note(fmt("largest |z| = %.2f; aligned C++(0.5) = %.6f +- %.6f", worst, aligned.c_pp.value,
               aligned.c_pp.std_error));
    c.note(fmt("slowest g tau point (4 settings): %.2f s", slowest));
    c.check(slowest < 10.0, fmt("runtime per point %.2f s", slowest));
    return c.report();
}

bool normal_order_recovery() {
    Criterion c("4 normal-ordered S via vacuum subtraction at g tau = 0.5");
    const double target = closed_form_chsh(0.5, Ordering::Normal);
    const auto r = chsh_s(Coupling<double>(0.5), Ordering::Normal, {}, MonteCarloEngine{{1'000'000, 0x4E0, 8}});
    c.check(std::abs(r.s_value - target) <= kSigmas * r.s_error,
            fmt("S_N = %.5f +- %.5f vs %.5f", r.s_value, r.s_error, target));
    c.note(fmt("S_N(MC) = %.5f +- %.5f, closed form %.6f", r.s_value, r.s_error, target));
    c.check(c.elapsed() < 10.0, fmt("runtime %.2f s", c.elapsed()));
    return c.report();
}

bool isserlis_suite() {
    Criterion c("5 three-pairing factorization vs brute-force fourth moments (1e5 samples x 3 configs)");
    std::mt19937_64 rng(0x155E);
    std::normal_distribution<double> normal;
    for (int config = 0; config < 3; ++config) {
        Eigen::Matrix4d m;
        for (int i = 0; i < 16; ++i) m(i) = normal(rng);
        const Eigen::Matrix4d cov = m * m.transpose() / 4 + 0.1 * Eigen::Matrix4d::Identity();
        const Eigen::Matrix4d l = cov.llt().matrixL();
        PairingTable<double> pairs = cov.cast<std::complex<double>>();
        const double expected = isserlis_fourth_moment(pairs).real();

        constexpr int n = 100'000;
        double sum = 0, sum_sq = 0;
        for (int k = 0; k < n; ++k) {
            const Eigen::Vector4d x = l * Eigen::Vector4d(normal(rng), normal(rng), normal(rng), normal(rng));
            const double v = x.prod();
            sum += v;
            sum_sq += v * v;
        }
        const double mean = sum / n;
        const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1));
        const double z = std::abs(mean - expected) / se;
        c.check(z <= kSigmas, fmt("config %g: z = %.2f", config, z));
        c.note(fmt("config %g: empirical %.5f, pairing %.5f", config, mean, expected));
    }
    // Same check on the SPDC port amplitudes themselves.
    for (double g : {0.1, 0.5, 1.0}) {
        const auto acc = accumulate_setting(Coupling<double>(g), {0.3, 0.7}, {100'000, 0x155F, 4});
        for (int k = 0; k < 4; ++k) {
            const auto diff = delta_method(acc, [k](const SettingFeatures& mu) {
                return direct_correlations(mu)(k) - paired_correlations(mu, Ordering::Symmetric)(k);
            });
            c.check(diff.within(0.0, kSigmas), fmt("port pair %g at g=%.1f: z = %.2f", k, g, diff.z_score(0.0)));
        }
    }
    return c.report();
}

bool individual_intensities() {
    Criterion c("6 individual intensities are angle independent (g tau = 0.5, N = 1e6)");
    const double target = 0.5 + std::sinh(0.5) * std::sinh(0.5);
    std::mt19937_64 rng(0x1E7);
    std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
    for (std::uint32_t k = 0; k < 4; ++k) {
        const MeasurementSetting<double> s{angle(rng), angle(rng)};
        const auto in = mc_intensities(Coupling<double>(0.5), s, {1'000'000, 0x1E7, 8}, Ordering::Symmetric, k);
        for (int p = 0; p < 4; ++p) {
            c.check(in[p].within(target, kSigmas),
                    fmt("angle set %g port %g: z = %.2f", k, p, in[p].z_score(target)));
        }
        c.note(fmt("theta = %.3f, phi = %.3f: <I^s_+> = %.5f", s.theta, s.phi, in[0].value));
    }
    c.note(fmt("target 0.5 + sinh^2(0.5) = %.7f", target));
    return c.report();
}

bool homodyne_suite() {
    Criterion c("7 homodyne reconstruction: per-trajectory identity and symmetric-order CHSH");
    RandomStream stream(0x40D, 0, 0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const auto ports = analyze(propagate(sample_vacuum(Ordering::Symmetric, stream), Coupling<double>(0.8)),
                                   MeasurementSetting<double>{0.2 * k, 0.1 * k});
        const auto q = measure_ports(ports, 1e3);
        for (int p = 0; p < 4; ++p) worst = std::max(worst, std::abs(q[p].intensity() - std::norm(ports.p(p))));
    }
    c.check(worst <= kExact, fmt("max |I_homodyne - |a|^2| = %.3e", worst));
    c.note(fmt("max per-trajectory deviation %.3e", worst));

    const HomodyneEngine engine{{1'000'000, 0x40E, 8}, {}};
    for (double g : {0.2, 0.5, 1.0}) {
        const auto r = chsh_s(Coupling<double>(g), Ordering::Symmetric, {}, engine);
        const double target = closed_form_chsh(g, Ordering::Symmetric);
        c.check(std::abs(r.s_value - target) <= kSigmas * r.s_error,
                fmt("g=%.1f: S = %.5f vs %.5f", g, r.s_value, target));
        c.note(fmt("g tau = %.1f: S_homodyne = %.5f, S_S = %.5f", g, r.s_value, target));
    }
    return c.report();
}

bool deterministic_identities() {
    Criterion c("8 analytic identities to 1e-12 on a 50-point g tau grid");
    std::mt19937_64 rng(0xDE7);
    std::uniform_real_distribution<double> angle(-2 * M_PI, 2 * M_PI), scale(1e-3, 1e3);
    double worst = 0.0;
    for (int n = 0; n < 50; ++n) {
        const double g = 2.0 * n / 49.0;
        const Coupling<double> coupling(g);
        for (Ordering o : {Ordering::Normal, Ordering::Symmetric}) {
            const MeasurementSetting<double> s{angle(rng), angle(rng)};
            const double d = angle(rng);

            const auto r = analyzer_matrix(s);
            const double ortho = (r * r.transpose() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();
            c.check(ortho <= kExact, fmt("orthogonality %.3e at g=%.3f", ortho, g));

            const auto t1 = analytic_correlations(coupling, o, s);
            const auto t2 = analytic_correlations(coupling, o, {s.theta + d, s.phi + d});
            const double shift = std::max({std::abs(t1.c_pp - t2.c_pp), std::abs(t1.c_mm - t2.c_mm),
                                           std::abs(t1.c_pm - t2.c_pm), std::abs(t1.c_mp - t2.c_mp)});
            c.check(shift <= kExact, fmt("angle-difference law %.3e at g=%.3f", shift, g));

            if (g > 0 || o == Ordering::Symmetric) {
                const double ratio = std::abs(m_value(t1) - m_value(t1.scaled(scale(rng))));
                c.check(ratio <= kExact, fmt("ratio invariance %.3e at g=%.3f", ratio, g));
                worst = std::max(worst, ratio);
            }

            const auto m = analytic_second_moments(coupling, o);
            const double nn = m.normal_occupation();
            const double bogo = std::abs(m.c_pair * m.c_pair - nn * (nn + 1));
            c.check(bogo <= kExact, fmt("c_pair^2 - n(n+1) = %.3e at g=%.3f", bogo, g));
            worst = std::max({worst, ortho, shift, bogo});
        }
    }
    c.note(fmt("largest deviation %.3e", worst));
    return c.report();
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    const std::vector<std::function<bool()>> criteria{
        thin_crystal_limit, figure_two_sweep, monte_carlo_vs_analytic, normal_order_recovery,
        isserlis_suite,     individual_intensities, homodyne_suite, deterministic_identities,
    };
    int failed = 0;
    for (const auto& criterion : criteria) {
        try {
            if (!criterion()) ++failed;
        } catch (const std::exception& e) {
            std::printf("[FAIL] criterion threw: %s\n", e.what());
            ++failed;
        }
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
