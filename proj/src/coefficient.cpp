#include "ventcel/coefficient.hpp"

#include "ventcel/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace ventcel {

namespace {

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_number(const std::string& text, const std::string& context)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw DomainError("cannot parse number '" + text + "' in " + context);
    }
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) throw DomainError("trailing characters in '" + text + "' in " + context);
    return v;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Per-curve sorted samples for nodal data.
using NodalTable = std::map<int, std::vector<std::pair<double, double>>>;

const std::vector<std::pair<double, double>>& samples_for(const NodalTable& table, int curve_id)
{
    const auto it = table.find(curve_id);
    if (it == table.end()) {
        throw ContractViolation("nodal coefficient has no samples for curve " + std::to_string(curve_id));
    }
    return it->second;
}

// Index k with s[k].first <= t <= s[k+1].first (clamped).
std::size_t bracket(const std::vector<std::pair<double, double>>& s, double t)
{
    if (s.size() < 2) return 0;
    auto it = std::upper_bound(s.begin(), s.end(), t,
                               [](double v, const std::pair<double, double>& p) { return v < p.first; });
    std::size_t k = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
    return std::min(k, s.size() - 2);
}

}  // namespace

CoefficientField::CoefficientField()
    : spec_("const:0"),
      plane_([](const Vec2&) { return 0.0; }),
      boundary_([](const Curve&, int, double) { return 0.0; }),
      tangential_([](const Curve&, int, double) { return 0.0; })
{
}

CoefficientField CoefficientField::constant(double c)
{
    CoefficientField f;
    f.spec_ = "const:" + format_number(c);
    f.constant_ = c;
    f.plane_ = [c](const Vec2&) { return c; };
    f.boundary_ = [c](const Curve&, int, double) { return c; };
    f.tangential_ = [](const Curve&, int, double) { return 0.0; };
    return f;
}

CoefficientField CoefficientField::polynomial(const std::array<double, 6>& c)
{
    CoefficientField f = plane(polynomial_field(c), "");
    f.kind_ = Kind::Polynomial;
    f.spec_ = "poly:";
    for (std::size_t i = 0; i < c.size(); ++i) {
        f.spec_ += (i ? "," : "") + format_number(c[i]);
    }
    return f;
}

CoefficientField CoefficientField::plane(PlaneField field, std::string name)
{
    CoefficientField f;
    f.kind_ = Kind::Builtin;
    f.spec_ = std::move(name);
    auto shared = std::make_shared<const PlaneField>(std::move(field));
    f.plane_ = [shared](const Vec2& p) { return (*shared)(p); };
    f.boundary_ = [shared](const Curve& c, int, double t) { return (*shared)(c.position(t)); };
    f.tangential_ = [shared](const Curve& c, int, double t) {
        const Vec2 d = c.first_derivative(t);
        return shared->grad(c.position(t)).dot(d) / d.norm();
    };
    return f;
}

CoefficientField CoefficientField::inverse_curvature()
{
    CoefficientField f;
    f.kind_ = Kind::Builtin;
    f.spec_ = "inv_curvature";
    f.plane_ = nullptr;
    f.tangential_ = nullptr;
    f.boundary_ = [](const Curve& c, int, double t) {
        const double k = curvature(c, t);
        if (k == 0.0) throw DomainError("inv_curvature on a curve with zero curvature (" + c.name() + ")");
        return 1.0 / k;
    };
    return f;
}

CoefficientField CoefficientField::nodal(std::vector<NodalSample> samples, std::string source)
{
    auto table = std::make_shared<NodalTable>();
    for (const auto& s : samples) (*table)[s.curve].emplace_back(s.t, s.value);
    for (auto& [id, v] : *table) {
        std::sort(v.begin(), v.end());
        for (std::size_t k = 1; k < v.size(); ++k) {
            if (v[k].first == v[k - 1].first) {
                throw DomainError("nodal coefficient: duplicate parameter on curve " + std::to_string(id));
            }
        }
    }
    CoefficientField f;
    f.kind_ = Kind::Nodal;
    f.spec_ = "nodal:" + source;
    f.plane_ = nullptr;
    f.boundary_ = [table](const Curve&, int id, double t) {
        const auto& s = samples_for(*table, id);
        if (s.size() == 1) return s[0].second;
        const std::size_t k = bracket(s, t);
        const double w = std::clamp((t - s[k].first) / (s[k + 1].first - s[k].first), 0.0, 1.0);
        return (1.0 - w) * s[k].second + w * s[k + 1].second;
    };
    f.tangential_ = [table](const Curve& c, int id, double t) {
        const auto& s = samples_for(*table, id);
        if (s.size() == 1 || t < s.front().first || t > s.back().first) return 0.0;
        const std::size_t k = bracket(s, t);
        const double dvdt = (s[k + 1].second - s[k].second) / (s[k + 1].first - s[k].first);
        return dvdt / c.speed(t);
    };
    return f;
}

CoefficientField CoefficientField::boundary(BoundaryMap value, BoundaryMap derivative, std::string name)
{
    CoefficientField f;
    f.kind_ = Kind::Builtin;
    f.spec_ = std::move(name);
    f.plane_ = nullptr;
    f.boundary_ = std::move(value);
    f.tangential_ = std::move(derivative);
    return f;
}

double CoefficientField::at(const Vec2& p) const
{
    if (!plane_) throw ContractViolation("coefficient '" + spec_ + "' is only defined on boundary curves");
    return plane_(p);
}

double CoefficientField::on_curve(const Curve& curve, int curve_id, double t) const
{
    return boundary_(curve, curve_id, t);
}

double CoefficientField::tangential_derivative(const Curve& curve, int curve_id, double t) const
{
    if (tangential_) return tangential_(curve, curve_id, t);
    return tangential_derivative_fd(curve, curve_id, t);
}

double CoefficientField::tangential_derivative_fd(const Curve& curve, int curve_id, double t) const
{
    const double hs = 1e-6 * approximate_length(curve);
    const double tp = advance_by_arc_length(curve, t, hs);
    const double tm = advance_by_arc_length(curve, t, -hs);
    return (boundary_(curve, curve_id, tp) - boundary_(curve, curve_id, tm)) / (2.0 * hs);
}

std::vector<NodalSample> read_nodal_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open nodal coefficient file '" + path + "'");
    std::string line;
    std::vector<NodalSample> out;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("curve_id", 0) == 0) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c)) {
            throw DomainError(path + ":" + std::to_string(lineno) + ": expected curve_id,t,value");
        }
        const std::string ctx = path + ":" + std::to_string(lineno);
        NodalSample s;
        s.curve = static_cast<int>(parse_number(trim(a), ctx));
        s.t = parse_number(trim(b), ctx);
        s.value = parse_number(trim(c), ctx);
        out.push_back(s);
    }
    if (out.empty()) throw DomainError("nodal coefficient file '" + path + "' has no samples");
    return out;
}

CoefficientField parse_coefficient(const std::string& raw)
{
    const std::string text = trim(raw);
    if (text.rfind("const:", 0) == 0) {
        return CoefficientField::constant(parse_number(text.substr(6), "'" + text + "'"));
    }
    if (text.rfind("poly:", 0) == 0) {
        std::array<double, 6> c{};
        std::stringstream ss(text.substr(5));
        std::string item;
        std::size_t i = 0;
        while (std::getline(ss, item, ',')) {
            if (i >= c.size()) throw DomainError("poly: expects 6 coefficients in '" + text + "'");
            c[i++] = parse_number(trim(item), "'" + text + "'");
        }
        if (i != c.size()) throw DomainError("poly: expects 6 coefficients in '" + text + "'");
        return CoefficientField::polynomial(c);
    }
    if (text == "inv_curvature") return CoefficientField::inverse_curvature();
    if (text.rfind("nodal:", 0) == 0) {
        const std::string path = text.substr(6);
        return CoefficientField::nodal(read_nodal_csv(path), path);
    }
    if (text == "exact_appendix" || text == "exact_affine" || text == "exact_log_radial") {
        return CoefficientField::plane(exact_field_by_name(text), text);
    }
    throw DomainError("unknown coefficient '" + text + "'");
}

}  // namespace ventcel
