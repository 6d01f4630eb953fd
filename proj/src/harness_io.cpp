#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "edgelab/harness.hpp"

namespace edgelab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

ordered_json jnum(double x) {
    if (std::isfinite(x)) return x;
    return num(x);
}

double from_jnum(const ordered_json& j) {
    if (j.is_number()) return j.get<double>();
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw UsageError("report: unexpected numeric token '" + s + "'");
}

const char* form_name(ExpansionForm f) { return f == ExpansionForm::Printed ? "printed" : "rederived"; }

ExpansionForm parse_form(const std::string& s) {
    if (s == "printed") return ExpansionForm::Printed;
    if (s == "rederived") return ExpansionForm::Rederived;
    throw UsageError("unknown expansion form '" + s + "' (printed|rederived)");
}

const char* side_name(PoleSide p) {
    switch (p) {
        case PoleSide::Auto: return "auto";
        case PoleSide::Enclose: return "enclose";
        case PoleSide::Exclude: return "exclude";
    }
    return "auto";
}

PoleSide parse_side(const std::string& s) {
    if (s == "auto") return PoleSide::Auto;
    if (s == "enclose") return PoleSide::Enclose;
    if (s == "exclude") return PoleSide::Exclude;
    throw UsageError("unknown pole_side '" + s + "' (auto|enclose|exclude)");
}

ordered_json spec_json(const ExperimentSpec& s) {
    ordered_json j;
    j["name"] = s.name;
    j["kind"] = kind_name(s.kind);
    j["params"] = ordered_json::array();
    for (const auto& p : s.params) j["params"].push_back({{"d", p.d}, {"tau", p.tau}});
    j["n_grid"] = s.n_grid;
    j["seed"] = s.seed;
    j["samples"] = s.samples;
    j["threads"] = s.threads;
    j["tolerances"] = ordered_json::object();
    for (const auto& [k, v] : s.tolerances) j["tolerances"][k] = jnum(v);
    j["lambda_grid"] = s.lambda_grid;
    j["points"] = ordered_json::array();
    for (const auto& z : s.points) j["points"].push_back({z.real(), z.imag()});
    j["form"] = form_name(s.form);
    j["variant"] = s.variant;
    j["contour"] = {{"node_count", s.contour.node_count},
                    {"radius_offset", s.contour.radius_offset},
                    {"tolerance", s.contour.tolerance},
                    {"max_doublings", s.contour.max_doublings},
                    {"pole_side", side_name(s.contour.pole_side)}};
    return j;
}

ExperimentSpec spec_from_json(const ordered_json& j) {
    ExperimentSpec s;
    s.name = j.at("name").get<std::string>();
    const auto k = parse_kind(j.at("kind").get<std::string>());
    if (!k) throw UsageError("report: unknown kind");
    s.kind = *k;
    for (const auto& p : j.at("params")) s.params.push_back({p.at("d").get<int>(), p.at("tau").get<double>()});
    s.n_grid = j.at("n_grid").get<std::vector<int>>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.samples = j.at("samples").get<int>();
    s.threads = j.at("threads").get<int>();
    for (const auto& [key, v] : j.at("tolerances").items()) s.tolerances[key] = from_jnum(v);
    s.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    for (const auto& z : j.at("points")) s.points.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
    s.form = parse_form(j.at("form").get<std::string>());
    s.variant = j.at("variant").get<std::string>();
    const auto& c = j.at("contour");
    s.contour.node_count = c.at("node_count").get<int>();
    s.contour.radius_offset = c.at("radius_offset").get<double>();
    s.contour.tolerance = c.at("tolerance").get<double>();
    s.contour.max_doublings = c.at("max_doublings").get<int>();
    s.contour.pole_side = parse_side(c.at("pole_side").get<std::string>());
    return s;
}

ordered_json report_json(const ConvergenceReport& r) {
    ordered_json j;
    j["experiment"] = spec_json(r.experiment);
    j["samples"] = ordered_json::array();
    for (const auto& s : r.samples) {
        j["samples"].push_back({{"d", s.d},
                                {"tau", s.tau},
                                {"n", s.n},
                                {"error", jnum(s.error)},
                                {"log_error", jnum(s.log_error)},
                                {"fitted_exponent", jnum(s.fitted_exponent)},
                                {"pass", s.pass},
                                {"label", s.label}});
    }
    j["fitted_exponent"] = jnum(r.fitted_exponent);
    j["pass"] = r.pass;
    j["diagnostics"] = r.diagnostics;
    return j;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) {
        const auto b = cur.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = cur.find_last_not_of(" \t");
        out.push_back(cur.substr(b, e - b + 1));
    }
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty()) throw UsageError("config: key '" + key + "' expects a number, got '" + v + "'");
    return x;
}

long long parse_integer(const std::string& key, const std::string& v) {
    long long x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
        throw UsageError("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
    return x;
}

void apply_key(ExperimentSpec& s, const std::string& key, const std::string& value) {
    if (key == "seed") {
        const long long x = parse_integer(key, value);
        if (x < 0) throw UsageError("config: seed must be non-negative");
        s.seed = static_cast<std::uint64_t>(x);
    } else if (key == "threads") {
        s.threads = static_cast<int>(parse_integer(key, value));
    } else if (key == "samples") {
        s.samples = static_cast<int>(parse_integer(key, value));
    } else if (key == "n_grid") {
        s.n_grid.clear();
        for (const auto& t : split_list(value, ',')) s.n_grid.push_back(static_cast<int>(parse_integer(key, t)));
    } else if (key == "params") {
        s.params.clear();
        for (const auto& t : split_list(value, ',')) {
            const auto colon = t.find(':');
            if (colon == std::string::npos) throw UsageError("config: params entries are d:tau, got '" + t + "'");
            s.params.push_back({static_cast<int>(parse_integer(key, t.substr(0, colon))), parse_double(key, t.substr(colon + 1))});
        }
    } else if (key == "lambda_grid") {
        s.lambda_grid.clear();
        for (const auto& t : split_list(value, ',')) s.lambda_grid.push_back(parse_double(key, t));
    } else if (key == "points") {
        s.points.clear();
        for (const auto& t : split_list(value, ';')) s.points.push_back(parse_complex(t));
    } else if (key == "form") {
        s.form = parse_form(value);
    } else if (key == "variant") {
        s.variant = value;
    } else if (key == "contour.node_count") {
        s.contour.node_count = static_cast<int>(parse_integer(key, value));
    } else if (key == "contour.radius_offset") {
        s.contour.radius_offset = parse_double(key, value);
    } else if (key == "contour.tolerance") {
        s.contour.tolerance = parse_double(key, value);
    } else if (key == "contour.max_doublings") {
        s.contour.max_doublings = static_cast<int>(parse_integer(key, value));
    } else if (key == "contour.pole_side") {
        s.contour.pole_side = parse_side(value);
    } else if (key.rfind("tolerance.", 0) == 0) {
        const std::string t = key.substr(10);
        if (!s.tolerances.count(t)) throw UsageError("config: experiment " + s.name + " has no tolerance '" + t + "'");
        s.tolerances[t] = parse_double(key, value);
    } else {
        throw UsageError("config: unknown key '" + key + "'");
    }
}

}  // namespace

std::string emit_report(const std::vector<ConvergenceReport>& reports, ReportFormat format) {
    if (format == ReportFormat::Json) {
        ordered_json j;
        j["reports"] = ordered_json::array();
        for (const auto& r : reports) j["reports"].push_back(report_json(r));
        return j.dump(2) + "\n";
    }
    std::string out = "experiment,kind,d,tau,n,error,fitted_exponent,pass\n";
    for (const auto& r : reports) {
        for (const auto& s : r.samples) {
            out += r.experiment.name + "," + kind_name(r.experiment.kind) + "," + std::to_string(s.d) + "," + num(s.tau) +
                   "," + std::to_string(s.n) + "," + num(s.error) + "," + num(s.fitted_exponent) + "," +
                   (s.pass ? "true" : "false") + "\n";
        }
    }
    return out;
}

std::string emit_report(const ConvergenceReport& report, ReportFormat format) {
    return emit_report(std::vector<ConvergenceReport>{report}, format);
}

std::vector<ConvergenceReport> parse_json_report(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("report: invalid JSON: ") + e.what());
    }
    std::vector<ConvergenceReport> out;
    try {
        for (const auto& r : j.at("reports")) {
            ConvergenceReport rep;
            rep.experiment = spec_from_json(r.at("experiment"));
            for (const auto& s : r.at("samples")) {
                Sample x;
                x.d = s.at("d").get<int>();
                x.tau = s.at("tau").get<double>();
                x.n = s.at("n").get<int>();
                x.error = from_jnum(s.at("error"));
                x.log_error = from_jnum(s.at("log_error"));
                x.fitted_exponent = from_jnum(s.at("fitted_exponent"));
                x.pass = s.at("pass").get<bool>();
                x.label = s.at("label").get<std::string>();
                rep.samples.push_back(x);
            }
            rep.fitted_exponent = from_jnum(r.at("fitted_exponent"));
            rep.pass = r.at("pass").get<bool>();
            rep.diagnostics = r.at("diagnostics").get<std::vector<std::string>>();
            out.push_back(std::move(rep));
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("report: malformed structure: ") + e.what());
    }
    return out;
}

std::vector<ExperimentSpec> apply_config_text(const std::string& text, std::vector<ExperimentSpec> specs) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    // global first, then sections in file order
    if (const auto g = tree.get_child_optional("global")) {
        for (const auto& [key, node] : *g) {
            if (key != "seed" && key != "threads") throw UsageError("config: [global] accepts only seed and threads");
            for (auto& s : specs) apply_key(s, key, node.data());
        }
    }
    for (const auto& [section, body] : tree) {
        if (section == "global") continue;
        if (body.empty()) throw UsageError("config: key '" + section + "' outside of a section");
        const auto kind = parse_kind(section);
        bool matched = false;
        for (auto& s : specs) {
            if (s.name == section || (kind && s.kind == *kind)) {
                matched = true;
                for (const auto& [key, node] : body) apply_key(s, key, node.data());
            }
        }
        if (!matched) throw UsageError("config: unknown experiment section [" + section + "]");
    }
    for (const auto& s : specs) s.validate();
    return specs;
}

std::vector<ExperimentSpec> load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return apply_config_text(ss.str(), default_suite());
}

}  // namespace edgelab
