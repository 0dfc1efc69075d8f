#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "chsh.hpp"
#include "types.hpp"

namespace bellorder::cli {

enum class Command { ChshSweep, Correlations, MonteCarlo, Homodyne, Threshold };
enum class OrderingChoice { Normal, Symmetric, Both };
enum class EngineChoice { Analytic, MonteCarlo };
enum class Spacing { Linear, Log };
enum class Format { Csv, Json };

struct Grid {
    double start = 0.0;
    double stop = 2.0;
    std::uint32_t count = 201;
    Spacing spacing = Spacing::Linear;

    std::vector<double> points() const;
};

/// Parse "start:stop:count[:log|:linear]".
Grid parse_grid(const std::string& text);

struct RunSpec {
    Command command = Command::ChshSweep;
    std::optional<OrderingChoice> ordering;  ///< unset: both for chsh-sweep, symmetric otherwise
    Grid grid;
    ChshSetting<double> angles;
    EngineChoice engine = EngineChoice::Analytic;
    std::optional<SampleConfig> samples;
    Format format = Format::Csv;
    std::string out_path;  ///< empty: standard output
    bool physical_homodyne = false;
    double tolerance = 1e-6;
    double lo_amplitude = 1e3;

    /// Throws Error(InvalidArgument) on an inconsistent spec.
    void validate() const;
};

/// Column-major-free result table; an empty cell is std::nullopt.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;

    bool operator==(const Table&) const = default;
};

/// Evaluate a validated spec into a table.
Table evaluate(const RunSpec& spec);

/// Shortest-round-trip-safe 17 significant digit formatting.
std::string format_number(double value);

void write_csv(const Table& table, std::ostream& os);
void write_json(const Table& table, const std::string& command, std::ostream& os);
Table read_json(const std::string& text);

const char* to_string(Command command);

/// Parse command-line flags into a RunSpec. Throws on invalid input.
RunSpec parse_args(const std::vector<std::string>& args);

/// Full pipeline: parse, validate, evaluate, write. Returns the exit status;
/// diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bellorder::cli
