#include "ventcel/mesh.hpp"

#include "ventcel/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace ventcel {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

/// Parameter t with x(t) = x on a curve whose x-coordinate increases with t.
double parameter_for_abscissa(const Curve& curve, double x)
{
    double lo = curve.t_begin(), hi = curve.t_end();
    const double x_lo = curve.position(lo).x(), x_hi = curve.position(hi).x();
    if (x <= x_lo) return lo;
    if (x >= x_hi) return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (curve.position(mid).x() < x) lo = mid;
        else hi = mid;
    }
    if (hi - lo > 1e-12) throw MeshError("curve height lookup did not converge");
    return 0.5 * (lo + hi);
}

void finalize(Mesh& mesh) { mesh.h = max_edge_length(mesh); }

Mesh triangulate_square(int n)
{
    Mesh mesh;
    const int stride = n + 1;
    auto id = [stride](int i, int j) { return j * stride + i; };
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            mesh.nodes.emplace_back(static_cast<double>(i) / n, 1.0 + static_cast<double>(j) / n);
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    for (int i = 0; i < n; ++i) {
        const double ta = static_cast<double>(i) / n, tb = static_cast<double>(i + 1) / n;
        mesh.boundary_edges.push_back({{id(i, 0), id(i + 1, 0)}, EdgeTag::Ventcel, 0, ta, tb});
        mesh.boundary_edges.push_back({{id(i, n), id(i + 1, n)}, EdgeTag::Ventcel, 1, ta, tb});
    }
    for (int j = 0; j < n; ++j) {
        const double ta = static_cast<double>(j) / n, tb = static_cast<double>(j + 1) / n;
        mesh.boundary_edges.push_back({{id(0, j), id(0, j + 1)}, EdgeTag::Dirichlet, 0, ta, tb});
        mesh.boundary_edges.push_back({{id(n, j), id(n, j + 1)}, EdgeTag::Dirichlet, 1, ta, tb});
    }
    return mesh;
}

Mesh triangulate_annulus(const DomainSpec& spec, int n)
{
    Mesh mesh;
    const double r0 = spec.r_inner, r1 = spec.r_outer;
    const double mid = 0.5 * (r0 + r1);
    const int m = std::max(8, static_cast<int>(std::ceil(2 * std::numbers::pi * mid / (r1 - r0) * n)));
    const double two_pi = 2 * std::numbers::pi;
    auto id = [m](int j, int k) { return j * m + (k % m); };
    const Curve inner = circle_curve(r0);
    const Curve outer = circle_curve(r1);
    for (int j = 0; j <= n; ++j) {
        const double r = (j == n) ? r1 : r0 + (r1 - r0) * j / n;
        for (int k = 0; k < m; ++k) {
            const double theta = two_pi * k / m;
            if (j == 0) mesh.nodes.push_back(inner.position(theta));
            else if (j == n) mesh.nodes.push_back(outer.position(theta));
            else mesh.nodes.emplace_back(r * std::cos(theta), r * std::sin(theta));
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < m; ++k) {
            mesh.triangles.push_back({id(j, k), id(j + 1, k), id(j + 1, k + 1)});
            mesh.triangles.push_back({id(j, k), id(j + 1, k + 1), id(j, k + 1)});
        }
    }
    const bool nu_inner = spec.nu_on == AnnulusNu::Inner;
    for (int k = 0; k < m; ++k) {
        const double ta = two_pi * k / m;
        const double tb = (k + 1 == m) ? two_pi : two_pi * (k + 1) / m;
        mesh.boundary_edges.push_back({{id(0, k), id(0, k + 1)},
                                       nu_inner ? EdgeTag::Ventcel : EdgeTag::Dirichlet, 0, ta, tb});
        mesh.boundary_edges.push_back({{id(n, k), id(n, k + 1)},
                                       nu_inner ? EdgeTag::Dirichlet : EdgeTag::Ventcel, 0, ta, tb});
    }
    return mesh;
}

Mesh triangulate_appendix(const DomainSpec& spec, int n)
{
    Mesh mesh;
    const Curve& top = spec.ventcel_curves.at(0);
    const double x_left = top.position(top.t_begin()).x();
    const double x_right = top.position(top.t_end()).x();
    std::vector<double> column_t(n + 1);
    std::vector<Vec2> column_top(n + 1);
    for (int i = 0; i <= n; ++i) {
        if (i == 0) column_t[i] = top.t_begin();
        else if (i == n) column_t[i] = top.t_end();
        else column_t[i] = parameter_for_abscissa(top, x_left + (x_right - x_left) * i / n);
        column_top[i] = top.position(column_t[i]);
    }
    const int stride = n + 1;
    auto id = [stride](int i, int j) { return j * stride + i; };
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            if (j == n) mesh.nodes.push_back(column_top[i]);
            else mesh.nodes.emplace_back(column_top[i].x(), column_top[i].y() * j / n);
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    // Dirichlet pieces: 0 = left side, 1 = bottom, 2 = right side.
    for (int i = 0; i < n; ++i) {
        mesh.boundary_edges.push_back(
            {{id(i, n), id(i + 1, n)}, EdgeTag::Ventcel, 0, column_t[i], column_t[i + 1]});
        const double width = x_right - x_left;
        mesh.boundary_edges.push_back({{id(i, 0), id(i + 1, 0)}, EdgeTag::Dirichlet, 1,
                                       (column_top[i].x() - x_left) / width,
                                       (column_top[i + 1].x() - x_left) / width});
    }
    for (int j = 0; j < n; ++j) {
        const double ta = static_cast<double>(j) / n, tb = static_cast<double>(j + 1) / n;
        mesh.boundary_edges.push_back({{id(0, j), id(0, j + 1)}, EdgeTag::Dirichlet, 0, ta, tb});
        mesh.boundary_edges.push_back({{id(n, j), id(n, j + 1)}, EdgeTag::Dirichlet, 2, ta, tb});
    }
    return mesh;
}

const Curve* edge_curve(const Mesh& mesh, const BoundaryEdge& e)
{
    if (!mesh.domain || e.curve < 0) return nullptr;
    const auto& list = e.tag == EdgeTag::Ventcel ? mesh.domain->ventcel_curves
                                                 : mesh.domain->dirichlet_pieces;
    if (static_cast<std::size_t>(e.curve) >= list.size()) return nullptr;
    return &list[e.curve];
}

void write_double(std::ostream& os, double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

}  // namespace

double Mesh::signed_area(std::size_t tri) const
{
    const auto& t = triangles[tri];
    const Vec2 a = nodes[t[0]], b = nodes[t[1]], c = nodes[t[2]];
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

Mesh triangulate(std::shared_ptr<const DomainSpec> spec, int n)
{
    if (n < 2) throw DomainError("subdivision count n must be >= 2");
    Mesh mesh;
    switch (spec->kind) {
    case DomainKind::Square:
        mesh = triangulate_square(n);
        break;
    case DomainKind::Annulus:
        mesh = triangulate_annulus(*spec, n);
        break;
    case DomainKind::Appendix:
        mesh = triangulate_appendix(*spec, n);
        break;
    }
    mesh.domain = std::move(spec);
    finalize(mesh);
    return mesh;
}

Mesh triangulate(const DomainSpec& spec, int n)
{
    return triangulate(std::make_shared<const DomainSpec>(spec), n);
}

Mesh refine(const Mesh& mesh)
{
    Mesh out;
    out.domain = mesh.domain;
    out.nodes = mesh.nodes;

    std::map<EdgeKey, const BoundaryEdge*> boundary;
    for (const auto& e : mesh.boundary_edges) boundary[edge_key(e.nodes[0], e.nodes[1])] = &e;

    std::map<EdgeKey, int> midpoint;
    auto mid = [&](int a, int b) {
        const EdgeKey key = edge_key(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        Vec2 p = 0.5 * (mesh.nodes[a] + mesh.nodes[b]);
        auto bit = boundary.find(key);
        if (bit != boundary.end()) {
            if (const Curve* c = edge_curve(mesh, *bit->second)) {
                p = c->position(0.5 * (bit->second->t_a + bit->second->t_b));
            }
        }
        const int id = static_cast<int>(out.nodes.size());
        out.nodes.push_back(p);
        midpoint.emplace(key, id);
        return id;
    };

    out.triangles.reserve(4 * mesh.triangles.size());
    for (const auto& t : mesh.triangles) {
        const int ab = mid(t[0], t[1]);
        const int bc = mid(t[1], t[2]);
        const int ca = mid(t[2], t[0]);
        out.triangles.push_back({t[0], ab, ca});
        out.triangles.push_back({ab, t[1], bc});
        out.triangles.push_back({ca, bc, t[2]});
        out.triangles.push_back({ab, bc, ca});
    }
    for (const auto& e : mesh.boundary_edges) {
        const int m = midpoint.at(edge_key(e.nodes[0], e.nodes[1]));
        const double tm = 0.5 * (e.t_a + e.t_b);
        out.boundary_edges.push_back({{e.nodes[0], m}, e.tag, e.curve, e.t_a, tm});
        out.boundary_edges.push_back({{m, e.nodes[1]}, e.tag, e.curve, tm, e.t_b});
    }
    finalize(out);
    return out;
}

std::vector<std::string> validate(const Mesh& mesh)
{
    std::vector<std::string> issues;
    const double h = mesh.h > 0 ? mesh.h : max_edge_length(mesh);
    const int nn = static_cast<int>(mesh.nodes.size());

    std::map<EdgeKey, int> edge_use;
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const auto& t = mesh.triangles[k];
        bool indices_ok = true;
        for (int v : t) indices_ok = indices_ok && v >= 0 && v < nn;
        if (!indices_ok) {
            issues.push_back("triangle " + std::to_string(k) + ": node index out of range");
            continue;
        }
        if (!(mesh.signed_area(k) > 1e-14 * h * h)) {
            issues.push_back("triangle " + std::to_string(k) + ": orientation (signed area <= 0)");
        }
        for (int i = 0; i < 3; ++i) ++edge_use[edge_key(t[i], t[(i + 1) % 3])];
    }

    std::map<EdgeKey, int> bedge_count;
    for (const auto& e : mesh.boundary_edges) ++bedge_count[edge_key(e.nodes[0], e.nodes[1])];
    for (const auto& [key, count] : bedge_count) {
        if (count > 1) {
            issues.push_back("boundary edge (" + std::to_string(key.first) + "," + std::to_string(key.second)
                             + ") tagged more than once");
        }
    }
    for (const auto& [key, uses] : edge_use) {
        const bool is_boundary = bedge_count.count(key) > 0;
        if (uses > 2) {
            issues.push_back("edge (" + std::to_string(key.first) + "," + std::to_string(key.second)
                             + ") shared by more than two triangles");
        } else if (uses == 1 && !is_boundary) {
            issues.push_back("edge (" + std::to_string(key.first) + "," + std::to_string(key.second)
                             + ") on the boundary but untagged");
        } else if (uses == 2 && is_boundary) {
            issues.push_back("interior edge (" + std::to_string(key.first) + ","
                             + std::to_string(key.second) + ") tagged as boundary");
        }
    }
    for (const auto& [key, count] : bedge_count) {
        if (edge_use.count(key) == 0) {
            issues.push_back("boundary edge (" + std::to_string(key.first) + ","
                             + std::to_string(key.second) + ") belongs to no triangle");
        }
    }

    // Closed loops: every boundary node has exactly two boundary edges.
    std::map<int, int> degree;
    for (const auto& e : mesh.boundary_edges) {
        ++degree[e.nodes[0]];
        ++degree[e.nodes[1]];
    }
    for (const auto& [node, d] : degree) {
        if (d != 2) issues.push_back("boundary node " + std::to_string(node) + " has boundary degree "
                                     + std::to_string(d));
    }

    // Curve membership and Ventcel chain structure.
    std::map<int, std::vector<const BoundaryEdge*>> chains;
    for (const auto& e : mesh.boundary_edges) {
        if (e.tag == EdgeTag::Ventcel) chains[e.curve].push_back(&e);
        if (!(e.t_a < e.t_b)) {
            issues.push_back("boundary edge (" + std::to_string(e.nodes[0]) + ","
                             + std::to_string(e.nodes[1]) + ") has t_a >= t_b");
        }
        if (const Curve* c = edge_curve(mesh, e)) {
            const double da = (mesh.nodes[e.nodes[0]] - c->position(e.t_a)).norm();
            const double db = (mesh.nodes[e.nodes[1]] - c->position(e.t_b)).norm();
            if (e.tag == EdgeTag::Ventcel && (da > 1e-12 || db > 1e-12)) {
                issues.push_back("Ventcel node off curve " + std::to_string(e.curve) + " by "
                                 + std::to_string(std::max(da, db)));
            }
        }
    }
    std::map<int, bool> dirichlet_node;
    for (const auto& e : mesh.boundary_edges) {
        if (e.tag == EdgeTag::Dirichlet) {
            dirichlet_node[e.nodes[0]] = true;
            dirichlet_node[e.nodes[1]] = true;
        }
    }
    for (auto& [curve, edges] : chains) {
        std::sort(edges.begin(), edges.end(),
                  [](const BoundaryEdge* a, const BoundaryEdge* b) { return a->t_a < b->t_a; });
        bool connected = true;
        for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
            if (edges[k]->nodes[1] != edges[k + 1]->nodes[0] || edges[k]->t_b != edges[k + 1]->t_a) {
                connected = false;
            }
        }
        if (!connected) {
            issues.push_back("Ventcel chain of curve " + std::to_string(curve) + " is not connected");
            continue;
        }
        const bool is_closed = mesh.domain && curve >= 0
                            && static_cast<std::size_t>(curve) < mesh.domain->ventcel_curves.size()
                            && mesh.domain->ventcel_curves[curve].closed();
        const int first = edges.front()->nodes[0];
        const int last = edges.back()->nodes[1];
        if (is_closed) {
            if (first != last) {
                issues.push_back("closed Ventcel chain of curve " + std::to_string(curve) + " is open");
            }
        } else if (first != last) {
            if (!dirichlet_node[first] || !dirichlet_node[last]) {
                issues.push_back("open Ventcel chain of curve " + std::to_string(curve)
                                 + " does not end on Dirichlet edges");
            }
        }
    }
    return issues;
}

double max_edge_length(const Mesh& mesh)
{
    double h = 0.0;
    for (const auto& t : mesh.triangles) {
        for (int i = 0; i < 3; ++i) {
            h = std::max(h, (mesh.nodes[t[i]] - mesh.nodes[t[(i + 1) % 3]]).norm());
        }
    }
    return h;
}

double mesh_area(const Mesh& mesh)
{
    double sum = 0.0;
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) sum += mesh.signed_area(k);
    return sum;
}

double triangle_quality(const Mesh& mesh, std::size_t tri)
{
    const auto& t = mesh.triangles[tri];
    const double a = (mesh.nodes[t[1]] - mesh.nodes[t[2]]).norm();
    const double b = (mesh.nodes[t[2]] - mesh.nodes[t[0]]).norm();
    const double c = (mesh.nodes[t[0]] - mesh.nodes[t[1]]).norm();
    const double area = std::abs(mesh.signed_area(tri));
    const double s = 0.5 * (a + b + c);
    const double inradius = area / s;
    const double circumradius = a * b * c / (4 * area);
    return 2 * inradius / circumradius;
}

double min_triangle_quality(const Mesh& mesh)
{
    double q = 1.0;
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) q = std::min(q, triangle_quality(mesh, k));
    return q;
}

double tagged_length(const Mesh& mesh, EdgeTag tag, int curve)
{
    double sum = 0.0;
    for (const auto& e : mesh.boundary_edges) {
        if (e.tag != tag || (curve >= 0 && e.curve != curve)) continue;
        sum += (mesh.nodes[e.nodes[0]] - mesh.nodes[e.nodes[1]]).norm();
    }
    return sum;
}

void write_mesh(std::ostream& os, const Mesh& mesh)
{
    os << "ventcel-mesh v1\n";
    if (mesh.domain) os << "DOMAIN " << mesh.domain->describe() << '\n';
    os << "NODES " << mesh.nodes.size() << '\n';
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        os << i << ' ';
        write_double(os, mesh.nodes[i].x());
        os << ' ';
        write_double(os, mesh.nodes[i].y());
        os << '\n';
    }
    os << "TRIANGLES " << mesh.triangles.size() << '\n';
    for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    os << "BEDGES " << mesh.boundary_edges.size() << '\n';
    for (const auto& e : mesh.boundary_edges) {
        os << e.nodes[0] << ' ' << e.nodes[1] << ' '
           << (e.tag == EdgeTag::Ventcel ? "ventcel" : "dirichlet");
        if (e.curve >= 0) {
            os << ' ' << e.curve << ' ';
            write_double(os, e.t_a);
            os << ' ';
            write_double(os, e.t_b);
        }
        os << '\n';
    }
}

Mesh read_mesh(std::istream& is)
{
    auto fail = [](const std::string& what) -> void { throw MeshError("mesh file: " + what); };
    std::string line;
    if (!std::getline(is, line) || line != "ventcel-mesh v1") fail("missing 'ventcel-mesh v1' header");

    Mesh mesh;
    auto section = [&](const std::string& name) -> std::size_t {
        if (!std::getline(is, line)) fail("missing section " + name);
        std::istringstream ls(line);
        std::string word;
        std::size_t count = 0;
        if (!(ls >> word >> count) || word != name) fail("expected section " + name);
        return count;
    };

    std::streampos mark = is.tellg();
    if (std::getline(is, line) && line.rfind("DOMAIN ", 0) == 0) {
        mesh.domain = std::make_shared<const DomainSpec>(parse_domain(line.substr(7)));
    } else {
        is.clear();
        is.seekg(mark);
    }

    const std::size_t n_nodes = section("NODES");
    mesh.nodes.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        if (!std::getline(is, line)) fail("truncated NODES");
        std::istringstream ls(line);
        std::size_t idx;
        std::string xs, ys;
        if (!(ls >> idx >> xs >> ys) || idx != i) fail("bad node line: " + line);
        mesh.nodes[i] = Vec2(std::strtod(xs.c_str(), nullptr), std::strtod(ys.c_str(), nullptr));
    }
    const std::size_t n_tris = section("TRIANGLES");
    mesh.triangles.resize(n_tris);
    for (std::size_t k = 0; k < n_tris; ++k) {
        if (!std::getline(is, line)) fail("truncated TRIANGLES");
        std::istringstream ls(line);
        auto& t = mesh.triangles[k];
        if (!(ls >> t[0] >> t[1] >> t[2])) fail("bad triangle line: " + line);
    }
    const std::size_t n_edges = section("BEDGES");
    mesh.boundary_edges.resize(n_edges);
    for (std::size_t k = 0; k < n_edges; ++k) {
        if (!std::getline(is, line)) fail("truncated BEDGES");
        std::istringstream ls(line);
        auto& e = mesh.boundary_edges[k];
        std::string tag;
        if (!(ls >> e.nodes[0] >> e.nodes[1] >> tag)) fail("bad edge line: " + line);
        if (tag == "ventcel") e.tag = EdgeTag::Ventcel;
        else if (tag == "dirichlet") e.tag = EdgeTag::Dirichlet;
        else fail("unknown edge tag: " + tag);
        std::string ta, tb;
        if (ls >> e.curve >> ta >> tb) {
            e.t_a = std::strtod(ta.c_str(), nullptr);
            e.t_b = std::strtod(tb.c_str(), nullptr);
        } else {
            e.curve = -1;
        }
    }
    finalize(mesh);
    return mesh;
}

}  // namespace ventcel
