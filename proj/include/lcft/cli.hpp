#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lcft/mc.hpp"
#include "lcft/special.hpp"

namespace lcft::cli {

enum class Command {
    EvalDozz,
    EvalUpsilon,
    Reflection,
    McThreepoint,
    McFourpoint,
    Tail,
    Rbar,
    Verify,
    Kpz,
    DfCheck,
    Girsanov,
};

enum class Format { Json, Csv };

const char* command_name(Command c) noexcept;
Command command_from_name(const std::string& name);
bool is_monte_carlo(Command c) noexcept;

struct RunConfig {
    Command command = Command::EvalDozz;
    double gamma = 1.0;
    double mu = 1.0;
    std::vector<double> alphas;
    std::vector<cplx> zs;
    // mc-fourpoint only; -gamma/2 when unset.
    std::optional<double> alpha0;
    // kpz only.
    std::optional<double> delta_sigma;
    std::optional<double> central_charge;
    std::size_t n_samples = 20000;
    int grid_resolution = 40;
    std::uint64_t seed = kDefaultSeed;
    // Survival-curve points for tail.
    std::size_t points = 50;
    std::string output;  // empty: stdout
    Format format = Format::Json;
    int threads = 0;

    bool operator==(const RunConfig&) const = default;
};

// argv[1] is the command; `--config FILE` reads key=value lines whose keys are
// the long flag names. Flags override the file. Throws ParseError naming the
// offending flag or key and ConflictError for incompatible options.
RunConfig load_config(int argc, const char* const* argv);
RunConfig load_config(const std::vector<std::string>& args);

// key=value text accepted by --config; loading it with the command reproduces cfg.
std::string to_config_text(const RunConfig& cfg);

// "1.5", "-2i", "0.3+0.1i", "0.3-1e-2i".
cplx parse_complex(const std::string& text);

struct ErrorRecord {
    std::string code;
    std::string message;
    bool operator==(const ErrorRecord&) const = default;
};

struct VerifyRow {
    std::string identity;
    std::vector<double> point;
    double residual = 0.0;
    bool operator==(const VerifyRow&) const = default;
};

struct ResultRecord {
    std::string command;
    double gamma = 0.0;
    double mu = 0.0;
    std::vector<double> alphas;
    std::vector<cplx> zs;
    std::optional<double> value;
    std::optional<double> std_error;
    std::optional<std::uint64_t> n_samples;
    std::optional<std::uint64_t> seed;
    std::map<std::string, double> diagnostics;
    std::vector<std::pair<double, double>> survival;
    std::vector<VerifyRow> table;
    std::optional<ErrorRecord> error;
    double runtime_s = 0.0;
    std::string version;

    bool operator==(const ResultRecord&) const = default;
};

const char* version() noexcept;

// Never throws on callee failures; they become `error` records.
ResultRecord execute(const RunConfig& cfg);

// 0 on success, 2 for inputs outside the admissible domain, 1 otherwise.
int exit_code(const ResultRecord& r) noexcept;
int exit_code(Errc c) noexcept;

nlohmann::json to_json(const ResultRecord& r);
ResultRecord from_json(const nlohmann::json& j);

// CSV is available for tail (t, survival) and verify (identity, point, residual).
std::string to_csv(const ResultRecord& r);

// Empty path writes to stdout. Throws IoError.
void emit(const ResultRecord& r, Format format, const std::string& path);

}  // namespace lcft::cli
