#include "bellorder/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellorder/correlator.hpp"
#include "bellorder/homodyne.hpp"

namespace bellorder::cli {

namespace {

using Row = std::vector<std::optional<double>>;

struct HelpRequested {
    std::string text;
};

Ordering single_ordering(const RunSpec& spec) {
    switch (spec.ordering.value_or(OrderingChoice::Symmetric)) {
        case OrderingChoice::Normal: return Ordering::Normal;
        case OrderingChoice::Symmetric: return Ordering::Symmetric;
        case OrderingChoice::Both: break;
    }
    throw Error(ErrorCode::InvalidArgument, std::string(to_string(spec.command)) + " needs a single ordering");
}

MeasurementSetting<double> primary_setting(const RunSpec& spec) { return {spec.angles.theta, spec.angles.phi}; }

Table chsh_sweep_table(const RunSpec& spec) {
    const auto grid = spec.grid.points();
    const auto choice = spec.ordering.value_or(OrderingChoice::Both);
    const bool want_normal = choice != OrderingChoice::Symmetric;
    const bool want_symmetric = choice != OrderingChoice::Normal;

    Engine engine = AnalyticEngine{};
    if (spec.engine == EngineChoice::MonteCarlo) engine = MonteCarloEngine{*spec.samples, McPath::Auto};

    std::vector<SweepPoint> normal, symmetric;
    if (want_normal) normal = sweep(grid, Ordering::Normal, spec.angles, engine);
    if (want_symmetric) symmetric = sweep(grid, Ordering::Symmetric, spec.angles, engine);

    const bool with_errors = spec.engine == EngineChoice::MonteCarlo;
    Table t{{"g_tau", "s_normal", "s_symmetric", "s_err_normal", "s_err_symmetric"}, {}};
    bool any_value = false;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        Row row(5);
        row[0] = grid[n];
        auto fill = [&](const std::vector<SweepPoint>& points, std::size_t value_col, std::size_t err_col) {
            if (points.empty() || !points[n].result) return;
            row[value_col] = points[n].result->s_value;
            if (with_errors) row[err_col] = points[n].result->s_error;
            any_value = true;
        };
        fill(normal, 1, 3);
        fill(symmetric, 2, 4);
        t.rows.push_back(std::move(row));
    }
    if (!any_value) {
        throw Error(ErrorCode::DegenerateDenominator, "every grid point is degenerate for the requested orderings");
    }
    return t;
}

Table correlations_table(const RunSpec& spec) {
    const Ordering ordering = single_ordering(spec);
    const auto setting = primary_setting(spec);
    Table t{{"g_tau", "theta", "phi", "c_pp", "c_mm", "c_pm", "c_mp"}, {}};
    for (double g : spec.grid.points()) {
        const auto c = analytic_correlations(Coupling<double>(g), ordering, setting);
        t.rows.push_back({g, setting.theta, setting.phi, c.c_pp, c.c_mm, c.c_pm, c.c_mp});
    }
    return t;
}

const std::vector<std::string> kEstimateColumns{"g_tau",    "theta",    "phi",      "c_pp",     "c_mm",
                                                "c_pm",     "c_mp",     "c_pp_err", "c_mm_err", "c_pm_err",
                                                "c_mp_err", "m",        "m_err"};

Row estimate_row(double g, const MeasurementSetting<double>& s, const CorrelationEstimate& e) {
    return {g,
            s.theta,
            s.phi,
            e.c_pp.value,
            e.c_mm.value,
            e.c_pm.value,
            e.c_mp.value,
            e.c_pp.std_error,
            e.c_mm.std_error,
            e.c_pm.std_error,
            e.c_mp.std_error,
            e.m.value,
            e.m.std_error};
}

Table montecarlo_table(const RunSpec& spec) {
    const Ordering ordering = single_ordering(spec);
    const auto setting = primary_setting(spec);
    Table t{kEstimateColumns, {}};
    for (double g : spec.grid.points()) {
        const auto e = mc_correlations(Coupling<double>(g), setting, *spec.samples, ordering);
        t.rows.push_back(estimate_row(g, setting, e));
    }
    return t;
}

Table homodyne_table(const RunSpec& spec) {
    if (single_ordering(spec) != Ordering::Symmetric) {
        throw Error(ErrorCode::HomodyneRequiresSymmetric, "homodyne emulation measures symmetric ordering only");
    }
    const auto setting = primary_setting(spec);
    const HomodyneOptions options{spec.lo_amplitude, spec.physical_homodyne};
    Table t{kEstimateColumns, {}};
    for (double g : spec.grid.points()) {
        const auto e = symmetric_intensity_correlation(*spec.samples, Coupling<double>(g), setting, options);
        t.rows.push_back(estimate_row(g, setting, e.correlations));
    }
    return t;
}

Table threshold_table(const RunSpec& spec) {
    const Ordering ordering = spec.ordering == OrderingChoice::Symmetric ? Ordering::Symmetric : Ordering::Normal;
    return {{"g_tau_star", "tolerance"}, {{violation_threshold(ordering, spec.tolerance), spec.tolerance}}};
}

template <typename Enum>
Enum lookup(const std::map<std::string, Enum>& names, const std::string& key, const char* what) {
    const auto it = names.find(key);
    if (it == names.end()) throw Error(ErrorCode::InvalidArgument, std::string("unknown ") + what + ": " + key);
    return it->second;
}

const std::map<std::string, Command> kCommands{{"chsh-sweep", Command::ChshSweep},
                                               {"correlations", Command::Correlations},
                                               {"montecarlo", Command::MonteCarlo},
                                               {"homodyne", Command::Homodyne},
                                               {"threshold", Command::Threshold}};

}  // namespace

//---------------------------------------------------------------------------//

std::vector<double> Grid::points() const {
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = start;
        return out;
    }
    const double steps = static_cast<double>(count - 1);
    for (std::uint32_t k = 0; k < count; ++k) {
        const double f = static_cast<double>(k) / steps;
        out[k] = spacing == Spacing::Linear ? start + (stop - start) * f
                                            : std::exp(std::log(start) + (std::log(stop) - std::log(start)) * f);
    }
    out.back() = stop;
    return out;
}

Grid parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4) {
        throw Error(ErrorCode::InvalidArgument, "grid must be start:stop:count[:log]");
    }
    Grid g;
    try {
        g.start = std::stod(parts[0]);
        g.stop = std::stod(parts[1]);
        const long count = std::stol(parts[2]);
        if (count < 1) throw Error(ErrorCode::InvalidArgument, "grid count must be >= 1");
        g.count = static_cast<std::uint32_t>(count);
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::InvalidArgument, "malformed grid: " + text);
    }
    if (parts.size() == 4) {
        if (parts[3] == "log") {
            g.spacing = Spacing::Log;
        } else if (parts[3] != "linear") {
            throw Error(ErrorCode::InvalidArgument, "grid spacing must be linear or log");
        }
    }
    return g;
}

void RunSpec::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (grid.count < 1) fail("grid count must be >= 1");
    if (!std::isfinite(grid.start) || !std::isfinite(grid.stop)) fail("grid bounds must be finite");
    if (grid.start > grid.stop) fail("grid start must not exceed stop");
    if (grid.start < 0.0) fail("g_tau must be >= 0");
    if (grid.spacing == Spacing::Log && grid.start <= 0.0) fail("log grid needs start > 0");
    for (double a : {angles.theta, angles.theta_prime, angles.phi, angles.phi_prime}) {
        if (!std::isfinite(a)) fail("angles must be finite");
    }

    const bool sampled = command == Command::MonteCarlo || command == Command::Homodyne ||
                         (command == Command::ChshSweep && engine == EngineChoice::MonteCarlo);
    if (sampled && !samples) fail("Monte Carlo runs require --samples");
    if (!sampled && samples) fail("--samples/--seed/--chunks only apply to Monte Carlo runs");
    if (samples) samples->validate();
    if (engine == EngineChoice::MonteCarlo && command != Command::ChshSweep && command != Command::MonteCarlo &&
        command != Command::Homodyne) {
        fail("--engine mc is not available for this command");
    }
    if (command == Command::Threshold && !(tolerance > 0.0)) fail("tolerance must be positive");
    if (!(lo_amplitude > 0.0)) throw Error(ErrorCode::ZeroLO, "local oscillator amplitude must be positive");
}

Table evaluate(const RunSpec& spec) {
    spec.validate();
    switch (spec.command) {
        case Command::ChshSweep: return chsh_sweep_table(spec);
        case Command::Correlations: return correlations_table(spec);
        case Command::MonteCarlo: return montecarlo_table(spec);
        case Command::Homodyne: return homodyne_table(spec);
        case Command::Threshold: return threshold_table(spec);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown command");
}

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_csv(const Table& table, std::ostream& os) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            if (row[c]) os << format_number(*row[c]);
        }
        os << '\n';
    }
}

void write_json(const Table& table, const std::string& command, std::ostream& os) {
    nlohmann::json doc;
    doc["command"] = command;
    doc["columns"] = table.columns;
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : table.rows) {
        auto& out = doc["rows"].emplace_back(nlohmann::json::array());
        for (const auto& cell : row) {
            if (cell) {
                out.push_back(*cell);
            } else {
                out.push_back(nullptr);
            }
        }
    }
    os << doc.dump(2) << '\n';
}

Table read_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    Table t;
    t.columns = doc.at("columns").get<std::vector<std::string>>();
    for (const auto& row : doc.at("rows")) {
        Row r;
        for (const auto& cell : row) {
            if (cell.is_null()) {
                r.emplace_back(std::nullopt);
            } else {
                r.emplace_back(cell.get<double>());
            }
        }
        t.rows.push_back(std::move(r));
    }
    return t;
}

const char* to_string(Command command) {
    for (const auto& [name, value] : kCommands) {
        if (value == command) return name.c_str();
    }
    return "unknown";
}

RunSpec parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Bell-test simulator for double-crystal SPDC under normal and symmetric ordering", "bellorder"};
    RunSpec spec;

    std::string command = "chsh-sweep";
    std::string ordering, grid, engine = "analytic", format = "csv";
    std::optional<double> g_tau;
    std::optional<std::uint64_t> n_samples, seed;
    std::optional<std::uint32_t> chunks;

    app.add_option("--command", command, "chsh-sweep | correlations | montecarlo | homodyne | threshold");
    app.add_option("--ordering", ordering, "normal | symmetric | both");
    auto* gtau_opt = app.add_option("--gtau", g_tau, "single coupling value g*tau");
    auto* grid_opt = app.add_option("--grid", grid, "start:stop:count[:log]");
    gtau_opt->excludes(grid_opt);
    app.add_option("--theta", spec.angles.theta, "signal angle theta [rad]");
    app.add_option("--theta-prime", spec.angles.theta_prime, "signal angle theta' [rad]");
    app.add_option("--phi", spec.angles.phi, "idler angle phi [rad]");
    app.add_option("--phi-prime", spec.angles.phi_prime, "idler angle phi' [rad]");
    app.add_option("--engine", engine, "analytic | mc");
    app.add_option("--samples", n_samples, "Monte Carlo trajectories");
    app.add_option("--seed", seed, "64-bit RNG seed");
    app.add_option("--chunks", chunks, "parallel RNG streams");
    app.add_option("--format", format, "csv | json");
    app.add_option("--out", spec.out_path, "output path (default stdout)");
    app.add_flag("--physical-homodyne", spec.physical_homodyne, "split each port before dual homodyning");
    app.add_option("--tolerance", spec.tolerance, "bisection tolerance for threshold");
    app.add_option("--lo-amplitude", spec.lo_amplitude, "local oscillator amplitude |beta|");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    }

    spec.command = lookup(kCommands, command, "command");
    if (!ordering.empty()) {
        spec.ordering = lookup<OrderingChoice>(
            {{"normal", OrderingChoice::Normal}, {"symmetric", OrderingChoice::Symmetric}, {"both", OrderingChoice::Both}},
            ordering, "ordering");
    }
    if (g_tau) {
        spec.grid = {*g_tau, *g_tau, 1, Spacing::Linear};
    } else if (!grid.empty()) {
        spec.grid = parse_grid(grid);
    }
    spec.engine = lookup<EngineChoice>({{"analytic", EngineChoice::Analytic}, {"mc", EngineChoice::MonteCarlo}},
                                       engine, "engine");
    spec.format = lookup<Format>({{"csv", Format::Csv}, {"json", Format::Json}}, format, "format");
    if (spec.command == Command::MonteCarlo || spec.command == Command::Homodyne) {
        spec.engine = EngineChoice::MonteCarlo;
    }
    if (n_samples || seed || chunks) {
        SampleConfig config;
        if (n_samples) config.n_samples = *n_samples;
        if (seed) config.seed = *seed;
        if (chunks) config.n_chunks = *chunks;
        if (!n_samples) throw Error(ErrorCode::InvalidArgument, "--seed/--chunks given without --samples");
        spec.samples = config;
    }
    return spec;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const RunSpec spec = parse_args(args);
        const Table table = evaluate(spec);
        std::ofstream file;
        if (!spec.out_path.empty()) {
            file.open(spec.out_path, std::ios::binary | std::ios::trunc);
            if (!file) {
                err << "error: cannot write " << spec.out_path << '\n';
                return 3;
            }
        }
        std::ostream& os = spec.out_path.empty() ? out : file;
        if (spec.format == Format::Csv) {
            write_csv(table, os);
        } else {
            write_json(table, to_string(spec.command), os);
        }
        os.flush();
        if (!os) {
            err << "error: failed writing output\n";
            return 3;
        }
        return 0;
    } catch (const HelpRequested& help) {
        out << help.text;
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace bellorder::cli
