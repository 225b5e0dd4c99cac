#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "lcft/cli.hpp"

namespace lcft::cli {

namespace {

using nlohmann::json;

// JSON has no non-finite numbers; they travel as the strings "nan", "inf" and "-inf".
json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double number(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw Error(Errc::ParseError, "unexpected number literal '" + s + "'");
    }
    return j.get<double>();
}

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace

json to_json(const ResultRecord& r) {
    json zs = json::array();
    for (cplx z : r.zs) zs.push_back({z.real(), z.imag()});
    json j = {{"command", r.command},
              {"params", {{"gamma", r.gamma}, {"mu", r.mu}, {"alphas", r.alphas}, {"zs", zs}}},
              {"value", r.value ? number(*r.value) : json(nullptr)},
              {"runtime_s", r.runtime_s},
              {"version", r.version}};
    if (r.std_error) j["stderr"] = number(*r.std_error);
    if (r.n_samples) j["n_samples"] = *r.n_samples;
    if (r.seed) j["seed"] = *r.seed;
    if (!r.diagnostics.empty()) {
        json d = json::object();
        for (const auto& [k, v] : r.diagnostics) d[k] = number(v);
        j["diagnostics"] = d;
    }
    if (!r.survival.empty()) {
        json s = json::array();
        for (const auto& [t, p] : r.survival) s.push_back({{"t", number(t)}, {"survival", number(p)}});
        j["survival"] = s;
    }
    if (!r.table.empty()) {
        json t = json::array();
        for (const auto& row : r.table)
            t.push_back({{"identity", row.identity}, {"point", row.point}, {"residual", number(row.residual)}});
        j["table"] = t;
    }
    if (r.error) j["error"] = {{"code", r.error->code}, {"message", r.error->message}};
    return j;
}

ResultRecord from_json(const json& j) {
    try {
        ResultRecord r;
        r.command = j.at("command").get<std::string>();
        const json& p = j.at("params");
        r.gamma = p.at("gamma").get<double>();
        r.mu = p.at("mu").get<double>();
        r.alphas = p.at("alphas").get<std::vector<double>>();
        for (const auto& z : p.at("zs")) r.zs.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
        if (!j.at("value").is_null()) r.value = number(j.at("value"));
        if (j.contains("stderr")) r.std_error = number(j.at("stderr"));
        if (j.contains("n_samples")) r.n_samples = j.at("n_samples").get<std::uint64_t>();
        if (j.contains("seed")) r.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("diagnostics"))
            for (const auto& [k, v] : j.at("diagnostics").items()) r.diagnostics[k] = number(v);
        if (j.contains("survival"))
            for (const auto& s : j.at("survival")) r.survival.emplace_back(number(s.at("t")), number(s.at("survival")));
        if (j.contains("table"))
            for (const auto& row : j.at("table"))
                r.table.push_back({row.at("identity").get<std::string>(), row.at("point").get<std::vector<double>>(),
                                   number(row.at("residual"))});
        if (j.contains("error"))
            r.error = ErrorRecord{j.at("error").at("code").get<std::string>(),
                                  j.at("error").at("message").get<std::string>()};
        r.runtime_s = j.at("runtime_s").get<double>();
        r.version = j.at("version").get<std::string>();
        return r;
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, std::string("malformed result record: ") + e.what());
    }
}

std::string to_csv(const ResultRecord& r) {
    std::ostringstream out;
    if (r.command == "tail") {
        out << "t,survival\n";
        for (const auto& [t, p] : r.survival) out << fmt(t) << ',' << fmt(p) << '\n';
    } else if (r.command == "verify") {
        out << "identity,point,residual\n";
        for (const auto& row : r.table) {
            std::string point;
            for (double a : row.point) point += (point.empty() ? "" : ";") + fmt(a);
            out << row.identity << ',' << point << ',' << fmt(row.residual) << '\n';
        }
    } else {
        throw Error(Errc::ConflictError, "no CSV layout for " + r.command);
    }
    return out.str();
}

void emit(const ResultRecord& r, Format format, const std::string& path) {
    const std::string text = format == Format::Csv ? to_csv(r) : to_json(r).dump(2) + "\n";
    if (path.empty()) {
        std::cout << text << std::flush;
        if (!std::cout) throw Error(Errc::IoError, "cannot write to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out) throw Error(Errc::IoError, "write to '" + path + "' failed");
}

}  // namespace lcft::cli
