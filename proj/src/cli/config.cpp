#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "lcft/cli.hpp"

namespace lcft::cli {

namespace {

struct CommandInfo {
    Command command;
    const char* name;
    bool monte_carlo;
};

constexpr std::array<CommandInfo, 11> kCommands = {{
    {Command::EvalDozz, "eval-dozz", false},
    {Command::EvalUpsilon, "eval-upsilon", false},
    {Command::Reflection, "reflection", false},
    {Command::McThreepoint, "mc-threepoint", true},
    {Command::McFourpoint, "mc-fourpoint", true},
    {Command::Tail, "tail", true},
    {Command::Rbar, "rbar", true},
    {Command::Verify, "verify", false},
    {Command::Kpz, "kpz", false},
    {Command::DfCheck, "df-check", false},
    {Command::Girsanov, "girsanov", true},
}};

// Long flag names double as config-file keys.
constexpr std::array<const char*, 14> kKeys = {"gamma",   "mu",      "alphas",     "z",         "alpha0",
                                               "delta-sigma", "central-charge", "samples", "resolution", "seed",
                                               "points",  "output",  "format",     "threads"};

[[noreturn]] void parse_fail(const std::string& key, const std::string& what) {
    throw Error(Errc::ParseError, "--" + key + ": " + what);
}

[[noreturn]] void conflict(const std::string& what) { throw Error(Errc::ConflictError, what); }

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_double(const std::string& text, double& out) {
    const std::string t = trim(text);
    const char* first = t.data();
    if (!t.empty() && t[0] == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), out);
    return ec == std::errc() && ptr == t.data() + t.size() && first != ptr;
}

double to_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    if (!parse_double(text, v)) parse_fail(key, "expected a number, got '" + text + "'");
    return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
    std::string t = trim(text);
    int base = 10;
    if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) {
        base = 16;
        t = t.substr(2);
    }
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v, base);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        parse_fail(key, "expected a non-negative integer, got '" + text + "'");
    return v;
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    if (!text.empty() && text.back() == ',') parts.emplace_back();
    return parts;
}

std::string fmt(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string fmt(cplx z) {
    if (z.imag() == 0.0) return fmt(z.real());
    std::string im = fmt(z.imag());
    if (im[0] != '-') im = "+" + im;
    return fmt(z.real()) + im + "i";
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, "--config: cannot read '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line.substr(0, line.find('#')));
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::ParseError, path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(t.substr(0, eq));
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
            throw Error(Errc::ParseError, path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        out[key] = trim(t.substr(eq + 1));
    }
    return out;
}

std::size_t expected_alphas(Command c) {
    switch (c) {
        case Command::EvalDozz:
        case Command::McThreepoint:
        case Command::McFourpoint:
            return 3;
        case Command::Reflection:
        case Command::Tail:
        case Command::Rbar:
            return 1;
        case Command::DfCheck:
            return 2;
        default:
            return 0;
    }
}

}  // namespace

const char* command_name(Command c) noexcept {
    for (const auto& info : kCommands)
        if (info.command == c) return info.name;
    return "unknown";
}

Command command_from_name(const std::string& name) {
    for (const auto& info : kCommands)
        if (name == info.name) return info.command;
    throw Error(Errc::ParseError, "unknown command '" + name + "'");
}

bool is_monte_carlo(Command c) noexcept {
    for (const auto& info : kCommands)
        if (info.command == c) return info.monte_carlo;
    return false;
}

cplx parse_complex(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    const auto bad = [&]() -> cplx { throw Error(Errc::ParseError, "malformed complex number '" + text + "'"); };
    if (t.empty()) return bad();
    if (t.back() != 'i') {
        double re = 0.0;
        return parse_double(t, re) ? cplx(re) : bad();
    }
    t.pop_back();
    std::size_t split_at = std::string::npos;
    for (std::size_t k = t.size(); k-- > 1;)
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
            split_at = k;
            break;
        }
    const std::string re_text = split_at == std::string::npos ? "0" : t.substr(0, split_at);
    std::string im_text = split_at == std::string::npos ? t : t.substr(split_at);
    if (im_text.empty() || im_text == "+") im_text = "1";
    if (im_text == "-") im_text = "-1";
    double re = 0.0, im = 0.0;
    if (!parse_double(re_text, re) || !parse_double(im_text, im)) return bad();
    return {re, im};
}

RunConfig load_config(const std::vector<std::string>& args) {
    CLI::App app("lcft");
    std::string command, config_path;
    std::map<std::string, std::string> flags;
    app.add_option("command", command, "Command to run")->required();
    app.add_option("--config", config_path, "key=value configuration file");
    for (const char* key : kKeys) app.add_option(std::string("--") + key, flags[key]);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw Error(Errc::ParseError, e.what());
    }

    RunConfig cfg;
    cfg.command = command_from_name(command);
    std::map<std::string, std::string> values;
    if (!config_path.empty()) values = read_config_file(config_path);
    for (const char* key : kKeys)
        if (app.count(std::string("--") + key) > 0) values[key] = flags[key];
    const auto has = [&](const char* key) { return values.count(key) > 0; };

    const Command c = cfg.command;
    if (has("central-charge")) {
        if (c != Command::Kpz) conflict("--central-charge only applies to kpz");
        if (has("gamma")) conflict("--central-charge determines gamma; drop --gamma");
        cfg.central_charge = to_double("central-charge", values["central-charge"]);
    } else if (!has("gamma")) {
        parse_fail("gamma", "missing required flag");
    } else {
        cfg.gamma = to_double("gamma", values["gamma"]);
    }
    if (has("mu")) cfg.mu = to_double("mu", values["mu"]);

    if (has("alphas"))
        for (const auto& part : split(values["alphas"])) cfg.alphas.push_back(to_double("alphas", part));
    const std::size_t want = expected_alphas(c);
    if (c == Command::Verify) {
        if (cfg.alphas.empty() || cfg.alphas.size() % 3 != 0)
            parse_fail("alphas", "verify expects one or more triples");
    } else if (cfg.alphas.size() != want) {
        if (want == 0) conflict(std::string("--alphas is not used by ") + command_name(c));
        parse_fail("alphas", std::string(command_name(c)) + " expects " + std::to_string(want) + " values");
    }

    if (has("z"))
        for (const auto& part : split(values["z"])) {
            try {
                cfg.zs.push_back(parse_complex(part));
            } catch (const Error& e) {
                parse_fail("z", e.what());
            }
        }
    switch (c) {
        case Command::EvalUpsilon:
        case Command::McFourpoint:
            if (cfg.zs.size() != 1) parse_fail("z", std::string(command_name(c)) + " expects one point");
            break;
        case Command::McThreepoint:
            if (!cfg.zs.empty() && cfg.zs.size() != 3)
                parse_fail("z", "mc-threepoint expects none (0, 1, infinity) or three finite points");
            break;
        default:
            if (!cfg.zs.empty()) conflict(std::string("--z is not used by ") + command_name(c));
    }

    if (has("alpha0")) {
        if (c != Command::McFourpoint) conflict("--alpha0 only applies to mc-fourpoint");
        cfg.alpha0 = to_double("alpha0", values["alpha0"]);
    }
    if (has("delta-sigma")) {
        if (c != Command::Kpz) conflict("--delta-sigma only applies to kpz");
        cfg.delta_sigma = to_double("delta-sigma", values["delta-sigma"]);
    }
    if (has("samples")) cfg.n_samples = to_unsigned("samples", values["samples"]);
    if (has("resolution")) cfg.grid_resolution = static_cast<int>(to_unsigned("resolution", values["resolution"]));
    if (has("seed")) cfg.seed = to_unsigned("seed", values["seed"]);
    if (has("points")) cfg.points = to_unsigned("points", values["points"]);
    if (has("threads")) cfg.threads = static_cast<int>(to_unsigned("threads", values["threads"]));
    if (has("output")) cfg.output = values["output"];
    if (has("format")) {
        const std::string& f = values["format"];
        if (f == "json") {
            cfg.format = Format::Json;
        } else if (f == "csv") {
            cfg.format = Format::Csv;
        } else {
            parse_fail("format", "expected json or csv, got '" + f + "'");
        }
    }
    if (cfg.format == Format::Csv && c != Command::Tail && c != Command::Verify)
        conflict("--format csv is only available for tail and verify");
    if (is_monte_carlo(c) && cfg.n_samples == 0) parse_fail("samples", "must be positive");
    return cfg;
}

RunConfig load_config(int argc, const char* const* argv) {
    return load_config(std::vector<std::string>(argv, argv + argc));
}

std::string to_config_text(const RunConfig& cfg) {
    std::ostringstream out;
    if (cfg.central_charge) {
        out << "central-charge=" << fmt(*cfg.central_charge) << "\n";
    } else {
        out << "gamma=" << fmt(cfg.gamma) << "\n";
    }
    out << "mu=" << fmt(cfg.mu) << "\n";
    const auto join = [&](const auto& xs) {
        std::string s;
        for (const auto& x : xs) s += (s.empty() ? "" : ",") + fmt(x);
        return s;
    };
    if (!cfg.alphas.empty()) out << "alphas=" << join(cfg.alphas) << "\n";
    if (!cfg.zs.empty()) out << "z=" << join(cfg.zs) << "\n";
    if (cfg.alpha0) out << "alpha0=" << fmt(*cfg.alpha0) << "\n";
    if (cfg.delta_sigma) out << "delta-sigma=" << fmt(*cfg.delta_sigma) << "\n";
    out << "samples=" << cfg.n_samples << "\n"
        << "resolution=" << cfg.grid_resolution << "\n"
        << "seed=" << cfg.seed << "\n"
        << "points=" << cfg.points << "\n"
        << "threads=" << cfg.threads << "\n"
        << "format=" << (cfg.format == Format::Csv ? "csv" : "json") << "\n";
    if (!cfg.output.empty()) out << "output=" << cfg.output << "\n";
    return out.str();
}

}  // namespace lcft::cli
