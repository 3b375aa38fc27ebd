#include "ventcel/config.hpp"

#include "ventcel/coefficient.hpp"
#include "ventcel/domain.hpp"
#include "ventcel/error.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ventcel {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

long long parse_integer(const std::string& key, const std::string& v)
{
    std::size_t pos = 0;
    long long out = 0;
    try {
        out = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key, "expected an integer, got '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(key, "expected an integer, got '" + v + "'");
    return out;
}

double parse_real(const std::string& key, const std::string& v)
{
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a number, got '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(key, "expected a number, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::string fmt17(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = {"domain", "a2",    "a0",        "f1",     "f2x",
                                                  "f2y",    "g1",    "g2",        "phi",    "exact",
                                                  "manufactured", "lipschitz", "n", "levels", "seed",
                                                  "output_dir"};
    return keys;
}

std::map<std::string, std::string> parse_config_text(const std::string& text)
{
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& keys = config_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(key, "unknown key");
        out[key] = value;
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_config_values(RunConfig& c, const std::map<std::string, std::string>& values)
{
    for (const auto& [key, value] : values) {
        if (key == "domain") c.domain = value;
        else if (key == "a2") c.a2 = value;
        else if (key == "a0") c.a0 = value;
        else if (key == "f1") c.f1 = value;
        else if (key == "f2x") c.f2x = value;
        else if (key == "f2y") c.f2y = value;
        else if (key == "g1") c.g1 = value;
        else if (key == "g2") c.g2 = value;
        else if (key == "phi") c.phi = value;
        else if (key == "exact") c.exact = value;
        else if (key == "manufactured") c.manufactured = parse_bool(key, value);
        else if (key == "lipschitz") c.lipschitz = parse_real(key, value);
        else if (key == "n") c.n = static_cast<int>(parse_integer(key, value));
        else if (key == "levels") c.levels = static_cast<int>(parse_integer(key, value));
        else if (key == "seed") {
            const long long s = parse_integer(key, value);
            if (s < 0) throw ConfigError(key, "must be non-negative");
            c.seed = static_cast<std::uint64_t>(s);
        } else if (key == "output_dir") c.output_dir = value;
        else throw ConfigError(key, "unknown key");
    }
}

void validate_config(const RunConfig& c)
{
    try {
        parse_domain(c.domain);
    } catch (const Error& e) {
        throw ConfigError("domain", e.what());
    }
    const std::pair<const char*, const std::string*> coeffs[] = {{"a2", &c.a2},   {"a0", &c.a0}, {"f1", &c.f1},
                                                                 {"f2x", &c.f2x}, {"f2y", &c.f2y}, {"g1", &c.g1},
                                                                 {"g2", &c.g2},   {"phi", &c.phi}};
    for (const auto& [key, text] : coeffs) {
        try {
            parse_coefficient(*text);
        } catch (const Error& e) {
            throw ConfigError(key, e.what());
        }
    }
    if (!c.exact.empty()) {
        try {
            exact_field_by_name(c.exact);
        } catch (const Error& e) {
            throw ConfigError("exact", e.what());
        }
    }
    if (c.manufactured && c.exact.empty()) throw ConfigError("manufactured", "needs an exact solution ('exact')");
    if (c.n < 2) throw ConfigError("n", "must be at least 2");
    if (c.command == "convergence" && c.levels < 3) throw ConfigError("levels", "must be at least 3");
    if (c.command == "convergence" && c.exact.empty()) throw ConfigError("exact", "convergence needs an exact solution");
    if (c.lipschitz < 0.0) throw ConfigError("lipschitz", "must be non-negative");
    if (c.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

VentcelProblem make_problem(const RunConfig& c)
{
    validate_config(c);
    VentcelProblem p;
    p.spec = parse_domain(c.domain);
    p.a2 = parse_coefficient(c.a2);
    p.a0 = parse_coefficient(c.a0);
    p.load.f1 = parse_coefficient(c.f1);
    p.load.f2x = parse_coefficient(c.f2x);
    p.load.f2y = parse_coefficient(c.f2y);
    p.load.g1 = parse_coefficient(c.g1);
    p.load.g2 = parse_coefficient(c.g2);
    p.phi = parse_coefficient(c.phi);
    p.lipschitz = c.lipschitz;
    if (!c.exact.empty()) {
        p.exact = exact_field_by_name(c.exact);
        if (c.manufactured) {
            const LoadData m = manufactured_load(*p.exact, p.a2, p.a0);
            p.load.f1 = m.f1;
            p.load.g1 = m.g1;
        }
    }
    return p;
}

std::string config_to_text(const RunConfig& c)
{
    std::ostringstream os;
    os << "domain = " << c.domain << '\n'
       << "a2 = " << c.a2 << '\n'
       << "a0 = " << c.a0 << '\n'
       << "f1 = " << c.f1 << '\n'
       << "f2x = " << c.f2x << '\n'
       << "f2y = " << c.f2y << '\n'
       << "g1 = " << c.g1 << '\n'
       << "g2 = " << c.g2 << '\n'
       << "phi = " << c.phi << '\n';
    if (!c.exact.empty()) os << "exact = " << c.exact << '\n';
    os << "manufactured = " << (c.manufactured ? "true" : "false") << '\n'
       << "lipschitz = " << fmt17(c.lipschitz) << '\n'
       << "n = " << c.n << '\n'
       << "levels = " << c.levels << '\n'
       << "seed = " << c.seed << '\n'
       << "output_dir = " << c.output_dir << '\n';
    return os.str();
}

}  // namespace ventcel
