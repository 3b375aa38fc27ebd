#include "ventcel/domain.hpp"

#include "ventcel/error.hpp"

#include <cmath>
#include <sstream>

namespace ventcel {

std::string DomainSpec::describe() const
{
    switch (kind) {
    case DomainKind::Appendix:
        return "appendix";
    case DomainKind::Square:
        return "square";
    case DomainKind::Annulus: {
        std::ostringstream os;
        os.precision(17);
        os << "annulus:" << r_inner << ',' << r_outer << ','
           << (nu_on == AnnulusNu::Inner ? "inner" : "outer");
        return os.str();
    }
    }
    return "unknown";
}

DomainSpec build_appendix_domain()
{
    DomainSpec spec;
    spec.kind = DomainKind::Appendix;
    // t increases left to right along the top, the domain lies below, so the
    // outward normal is the left normal.
    const Curve top = appendix_curve().with_orientation(+1);
    const Vec2 left_top = top.position(top.t_begin());
    const Vec2 right_top = top.position(top.t_end());
    const Vec2 left_bottom(left_top.x(), 0.0);
    const Vec2 right_bottom(right_top.x(), 0.0);
    spec.ventcel_curves.push_back(top);
    spec.dirichlet_pieces.push_back(segment_curve(left_bottom, left_top));
    spec.dirichlet_pieces.push_back(segment_curve(left_bottom, right_bottom));
    spec.dirichlet_pieces.push_back(segment_curve(right_bottom, right_top));
    return spec;
}

DomainSpec build_annulus(double r_inner, double r_outer, AnnulusNu nu_on)
{
    if (!(r_inner > 0.0 && r_inner < r_outer)) {
        throw DomainError("annulus radii must satisfy 0 < R0 < R1");
    }
    DomainSpec spec;
    spec.kind = DomainKind::Annulus;
    spec.r_inner = r_inner;
    spec.r_outer = r_outer;
    spec.nu_on = nu_on;
    // Counterclockwise circles: the left normal points to the centre. That is
    // outward for the inner circle and inward for the outer one.
    const Curve inner = circle_curve(r_inner).with_orientation(+1);
    const Curve outer = circle_curve(r_outer).with_orientation(-1);
    if (nu_on == AnnulusNu::Inner) {
        spec.ventcel_curves.push_back(inner);
        spec.dirichlet_pieces.push_back(outer);
    } else {
        spec.ventcel_curves.push_back(outer);
        spec.dirichlet_pieces.push_back(inner);
    }
    return spec;
}

DomainSpec build_square()
{
    DomainSpec spec;
    spec.kind = DomainKind::Square;
    spec.ventcel_curves.push_back(segment_curve(Vec2(0, 1), Vec2(1, 1)).with_orientation(-1));
    spec.ventcel_curves.push_back(segment_curve(Vec2(0, 2), Vec2(1, 2)).with_orientation(+1));
    spec.dirichlet_pieces.push_back(segment_curve(Vec2(0, 1), Vec2(0, 2)));
    spec.dirichlet_pieces.push_back(segment_curve(Vec2(1, 1), Vec2(1, 2)));
    return spec;
}

DomainSpec parse_domain(const std::string& text)
{
    if (text == "appendix") return build_appendix_domain();
    if (text == "square") return build_square();
    if (text == "annulus") return build_annulus(1.0, 2.0, AnnulusNu::Outer);
    const std::string prefix = "annulus:";
    if (text.rfind(prefix, 0) == 0) {
        std::istringstream is(text.substr(prefix.size()));
        std::string r0, r1, which;
        if (!std::getline(is, r0, ',') || !std::getline(is, r1, ',') || !std::getline(is, which)) {
            throw DomainError("annulus spec must be annulus:R0,R1,inner|outer");
        }
        AnnulusNu nu;
        if (which == "inner") nu = AnnulusNu::Inner;
        else if (which == "outer") nu = AnnulusNu::Outer;
        else throw DomainError("annulus side must be 'inner' or 'outer', got '" + which + "'");
        double a, b;
        try {
            a = std::stod(r0);
            b = std::stod(r1);
        } catch (const std::exception&) {
            throw DomainError("annulus radii must be numbers");
        }
        return build_annulus(a, b, nu);
    }
    throw DomainError("unknown domain: " + text);
}

double total_length(const std::vector<Curve>& curves)
{
    double sum = 0.0;
    for (const auto& c : curves) sum += arc_length(c, c.t_end());
    return sum;
}

std::vector<std::string> check_domain(const DomainSpec& spec)
{
    std::vector<std::string> issues;
    if (spec.ventcel_curves.empty()) issues.push_back("no Ventcel curve");
    if (!(total_length(spec.dirichlet_pieces) > 0.0)) issues.push_back("Dirichlet boundary has zero length");
    for (const auto& c : spec.ventcel_curves) {
        for (auto& s : check_curve(c)) issues.push_back(c.name() + ": " + s);
    }
    // Disjointness at sample resolution (closed curves of an open chain share
    // nothing; open curves may only meet Dirichlet pieces).
    constexpr int samples = 400;
    for (std::size_t i = 0; i < spec.ventcel_curves.size(); ++i) {
        for (std::size_t j = i + 1; j < spec.ventcel_curves.size(); ++j) {
            const Curve& a = spec.ventcel_curves[i];
            const Curve& b = spec.ventcel_curves[j];
            double min_dist = std::numeric_limits<double>::infinity();
            for (int p = 0; p <= samples; ++p) {
                const Vec2 pa = a.position(a.t_begin() + (a.t_end() - a.t_begin()) * p / samples);
                for (int q = 0; q <= samples; ++q) {
                    const Vec2 pb = b.position(b.t_begin() + (b.t_end() - b.t_begin()) * q / samples);
                    min_dist = std::min(min_dist, (pa - pb).norm());
                }
            }
            if (min_dist < 1e-10) {
                issues.push_back("Ventcel curves " + std::to_string(i) + " and " + std::to_string(j)
                                 + " intersect");
            }
        }
    }
    return issues;
}

}  // namespace ventcel
