#include "cdft/config.hpp"

#include "cdft/counterexample.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cdft {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw ConfigError("config field '" + field + "': " + what);
}

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            field_error(where.empty() ? key : where + "." + key, "unknown key");
        }
    }
}

const json& object_at(const json& root, const char* key) {
    const json& v = root.at(key);
    if (!v.is_object()) field_error(key, "expected an object");
    return v;
}

double number(const json& obj, const char* key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number()) field_error(where + "." + key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) field_error(where + "." + key, "must be finite");
    return d;
}

std::uint64_t count(const json& obj, const char* key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) {
        field_error(where + "." + key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::size_t line_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

} // namespace

double RunConfig::resolved_L() const { return L ? *L : 8.0 / std::sqrt(alpha); }

std::vector<double> RunConfig::eps_values(double eps_max) const {
    if (eps_list) return *eps_list;
    return default_eps_values(eps_max, eps_count.value_or(5));
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        std::ostringstream os;
        os << "config is not valid JSON (line " << line_of(text, e.byte) << "): " << e.what();
        throw ConfigError(os.str());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be a JSON object");
    reject_unknown(root, "", {"grid", "family", "sweep", "solver", "output_dir"});

    RunConfig c;
    if (root.contains("grid")) {
        const json& g = object_at(root, "grid");
        reject_unknown(g, "grid", {"n", "L"});
        if (g.contains("n")) c.n = count(g, "n", "grid");
        if (g.contains("L")) {
            const json& l = g.at("L");
            if (l.is_string()) {
                if (l.get<std::string>() != "auto") field_error("grid.L", "expected a number or \"auto\"");
            } else {
                c.L = number(g, "L", "grid");
            }
        }
    }
    if (root.contains("family")) {
        const json& f = object_at(root, "family");
        reject_unknown(f, "family", {"alpha", "B", "Btilde"});
        if (f.contains("alpha")) c.alpha = number(f, "alpha", "family");
        if (f.contains("B")) c.B = number(f, "B", "family");
        if (f.contains("Btilde")) c.Btilde = number(f, "Btilde", "family");
    }
    if (root.contains("sweep")) {
        const json& s = object_at(root, "sweep");
        reject_unknown(s, "sweep", {"eps_count", "eps_list"});
        if (s.contains("eps_count") && s.contains("eps_list")) {
            field_error("sweep", "give eps_count or eps_list, not both");
        }
        if (s.contains("eps_count")) {
            c.eps_count = count(s, "eps_count", "sweep");
            if (*c.eps_count == 0) field_error("sweep.eps_count", "must be at least 1");
        }
        if (s.contains("eps_list")) {
            const json& l = s.at("eps_list");
            if (!l.is_array() || l.empty()) field_error("sweep.eps_list", "expected a non-empty array");
            std::vector<double> eps;
            for (const json& v : l) {
                if (!v.is_number()) field_error("sweep.eps_list", "entries must be numbers");
                eps.push_back(v.get<double>());
            }
            c.eps_list = std::move(eps);
        }
    }
    if (root.contains("solver")) {
        const json& s = object_at(root, "solver");
        reject_unknown(s, "solver", {"tol", "max_iter", "seed"});
        if (s.contains("tol")) c.solver.tol = number(s, "tol", "solver");
        if (s.contains("max_iter")) c.solver.max_iter = count(s, "max_iter", "solver");
        if (s.contains("seed")) c.solver.seed = count(s, "seed", "solver");
    }
    if (root.contains("output_dir")) {
        if (!root.at("output_dir").is_string()) field_error("output_dir", "expected a string");
        c.output_dir = root.at("output_dir").get<std::string>();
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

void validate_common(const RunConfig& c) {
    if (c.n < Grid2D::kMinNodes) {
        field_error("grid.n", "need at least " + std::to_string(Grid2D::kMinNodes) +
                                  " nodes per axis, got " + std::to_string(c.n));
    }
    if (!(c.alpha > 0.0)) field_error("family.alpha", "must be positive");
    if (c.L && !(*c.L > 0.0)) field_error("grid.L", "must be positive");
    if (!(c.solver.tol > 0.0)) field_error("solver.tol", "must be positive");
    if (c.solver.max_iter == 0) field_error("solver.max_iter", "must be at least 1");
}

} // namespace cdft
