/*
   Copyright 2026 The symsparse Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "symsparse/config.hpp"

#include <algorithm>
#include <cmath>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "symsparse/csv.hpp"
#include "symsparse/error.hpp"

namespace symsparse {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_key(const std::string& key, const std::string& what)
{
    throw ParameterError("config key '" + key + "': " + what);
}

double parse_double(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    if (t.empty()) {
        bad_key(key, "expected a number, got an empty value");
    }
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE) {
        bad_key(key, "expected a number, got '" + t + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    if (t.empty() || t.front() == '-') {
        bad_key(key, "expected a nonnegative integer, got '" + t + "'");
    }
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size() || errno == ERANGE) {
        bad_key(key, "expected a nonnegative integer, got '" + t + "'");
    }
    return static_cast<std::uint64_t>(v);
}

template <class T, class F>
std::vector<T> parse_list(const std::string& key, const std::string& text, F parse_one)
{
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_one(key, item));
    }
    if (out.empty()) {
        bad_key(key, "empty list");
    }
    return out;
}

template <class T, class F>
std::string join(const std::vector<T>& values, F format)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += format(values[i]);
    }
    return out;
}

const std::map<std::string, std::set<std::string>>& known_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"experiment", {"kind", "trials", "seed", "workers", "output"}},
        {"ensemble", {"n", "p", "dist", "c_op"}},
        {"grid", {"eps", "n", "p"}},
        {"structure", {"c_s", "c_d", "c_oo", "lambda", "L", "delta0", "c_p"}},
        {"options", {}},
    };
    return keys;
}

} // namespace

const std::vector<std::string>& experiment_kinds()
{
    static const std::vector<std::string> kinds{
        "tail-sweep", "scaling",      "norm-check",   "distance-check", "smallball", "quadratic",
        "structure",  "invertibility", "first-moment", "witness",
    };
    return kinds;
}

void ExperimentConfig::validate() const
{
    const auto& kinds = experiment_kinds();
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
        bad_key("experiment.kind", "unknown experiment kind '" + kind + "'");
    }
    if (trials == 0) {
        bad_key("experiment.trials", "must be at least 1");
    }
    if (workers == 0) {
        bad_key("experiment.workers", "must be at least 1");
    }
    if (eps_grid.empty() || n_grid.empty() || p_grid.empty()) {
        throw ParameterError("config grids must be nonempty");
    }
    for (double e : eps_grid) {
        if (!(e >= 0.0) || !std::isfinite(e)) {
            bad_key("grid.eps", "values must be finite and nonnegative");
        }
    }
    for (auto n : n_grid) {
        if (n < 2) {
            bad_key("grid.n", "values must be at least 2");
        }
    }
    for (double p : p_grid) {
        if (!(p > 0.0 && p <= 1.0)) {
            bad_key("grid.p", "values must lie in (0, 1]");
        }
    }
    try {
        ensemble.validate();
    } catch (const ParameterError& e) {
        throw ParameterError(std::string("config section [ensemble]: ") + e.what());
    }
    try {
        constants.validate();
    } catch (const ParameterError& e) {
        throw ParameterError(std::string("config section [structure]: ") + e.what());
    }
}

double ExperimentConfig::option(const std::string& key, double fallback) const
{
    const auto it = options.find(key);
    return it == options.end() ? fallback : it->second;
}

ExperimentConfig parse_config(std::istream& in)
{
    // Accept '#' comments as well as the ';' comments of the INI reader.
    std::stringstream filtered;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        filtered << (t.starts_with('#') ? std::string() : line) << '\n';
    }
    pt::ptree tree;
    try {
        pt::read_ini(filtered, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ParameterError("config parse error at line " + std::to_string(e.line()) + ": " + e.message());
    }

    const auto& known = known_keys();
    for (const auto& [section, body] : tree) {
        const auto it = known.find(section);
        if (it == known.end()) {
            bad_key(section, body.empty() ? "top-level keys are not allowed" : "unknown section");
        }
        for (const auto& [key, value] : body) {
            if (section != "options" && !it->second.count(key)) {
                bad_key(section + "." + key, "unknown key");
            }
        }
    }

    ExperimentConfig c;
    auto get = [&](const std::string& path) { return tree.get_optional<std::string>(pt::ptree::path_type(path, '.')); };

    if (auto v = get("experiment.kind")) {
        c.kind = trim(*v);
    }
    if (auto v = get("experiment.trials")) {
        c.trials = parse_u64("experiment.trials", *v);
    }
    if (auto v = get("experiment.seed")) {
        c.seed = parse_u64("experiment.seed", *v);
    }
    if (auto v = get("experiment.workers")) {
        c.workers = parse_u64("experiment.workers", *v);
    }
    if (auto v = get("experiment.output")) {
        c.output = trim(*v);
    }

    if (auto v = get("ensemble.n")) {
        c.ensemble.n = parse_u64("ensemble.n", *v);
    }
    if (auto v = get("ensemble.p")) {
        c.ensemble.p = parse_double("ensemble.p", *v);
    }
    if (auto v = get("ensemble.dist")) {
        try {
            c.ensemble.dist = EntryDistribution::parse(trim(*v));
        } catch (const ParameterError& e) {
            bad_key("ensemble.dist", e.what());
        }
    }
    if (auto v = get("ensemble.c_op")) {
        c.ensemble.c_op = parse_double("ensemble.c_op", *v);
    }

    c.n_grid = {c.ensemble.n};
    c.p_grid = {c.ensemble.p};
    if (auto v = get("grid.eps")) {
        c.eps_grid = parse_list<double>("grid.eps", *v, parse_double);
    }
    if (auto v = get("grid.n")) {
        c.n_grid = parse_list<std::size_t>("grid.n", *v, [](const std::string& k, const std::string& s) {
            return static_cast<std::size_t>(parse_u64(k, s));
        });
    }
    if (auto v = get("grid.p")) {
        c.p_grid = parse_list<double>("grid.p", *v, parse_double);
    }

    const std::pair<const char*, double StructureConstants::*> fields[] = {
        {"c_s", &StructureConstants::c_s},       {"c_d", &StructureConstants::c_d},
        {"c_oo", &StructureConstants::c_oo},     {"lambda", &StructureConstants::lambda},
        {"L", &StructureConstants::L},           {"delta0", &StructureConstants::delta0},
        {"c_p", &StructureConstants::c_p},
    };
    for (const auto& [name, member] : fields) {
        const std::string key = std::string("structure.") + name;
        if (auto v = get(key)) {
            c.constants.*member = parse_double(key, *v);
        }
    }

    if (auto opts = tree.get_child_optional("options")) {
        for (const auto& [key, value] : *opts) {
            c.options[key] = parse_double("options." + key, value.data());
        }
    }

    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParameterError("cannot open config file '" + path + "'");
    }
    return parse_config(in);
}

void write_config(std::ostream& out, const ExperimentConfig& c)
{
    const auto num = [](double v) { return format_double(v); };
    const auto idx = [](std::size_t v) { return std::to_string(v); };
    out << "[experiment]\n";
    out << "kind = " << c.kind << "\n";
    out << "trials = " << c.trials << "\n";
    out << "seed = " << c.seed << "\n";
    out << "workers = " << c.workers << "\n";
    if (!c.output.empty()) {
        out << "output = " << c.output << "\n";
    }
    out << "\n[ensemble]\n";
    out << "n = " << c.ensemble.n << "\n";
    out << "p = " << num(c.ensemble.p) << "\n";
    out << "dist = " << c.ensemble.dist.name() << "\n";
    out << "c_op = " << num(c.ensemble.c_op) << "\n";
    out << "\n[grid]\n";
    out << "eps = " << join(c.eps_grid, num) << "\n";
    out << "n = " << join(c.n_grid, idx) << "\n";
    out << "p = " << join(c.p_grid, num) << "\n";
    out << "\n[structure]\n";
    out << "c_s = " << num(c.constants.c_s) << "\n";
    out << "c_d = " << num(c.constants.c_d) << "\n";
    out << "c_oo = " << num(c.constants.c_oo) << "\n";
    out << "lambda = " << num(c.constants.lambda) << "\n";
    out << "L = " << num(c.constants.L) << "\n";
    out << "delta0 = " << num(c.constants.delta0) << "\n";
    out << "c_p = " << num(c.constants.c_p) << "\n";
    if (!c.options.empty()) {
        out << "\n[options]\n";
        for (const auto& [key, value] : c.options) {
            out << key << " = " << num(value) << "\n";
        }
    }
}

} // namespace symsparse
