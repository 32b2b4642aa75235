#include "minres/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>

#include "minres/errors.hpp"
#include "minres/numerics.hpp"

namespace minres {

MaxwellCurve::MaxwellCurve(ExtremalSolution sol, int n)
    : flat_half_width(sol.slope0), corner_jump(sol.r), edge_slope(sol.p0), M(sol.M), sol_(std::move(sol)) {
    if (n < 2) throw DomainError("conjugate_profile: need at least 2 samples");
    samples.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double x = -1.0 + 2.0 * k / (n - 1);
        samples.emplace_back(x, value(x));
    }
}

double MaxwellCurve::support_point(double x1) const {
    const double a = std::abs(x1);
    const auto& prof = sol_.profile;
    // nu'(q) - 1 = a - 1 on [rho, 1]
    auto f = [&](double q) { return prof.nu->at(q).dslope - (a - 1.0); };
    double q = num::solve_bracketed(f, prof.rho, 1.0, 1e-16);
    return sol_.p0 * q;
}

double MaxwellCurve::value(double x1) const {
    const double a = std::abs(x1);
    if (a > 1.0 + 1e-12) throw DomainError("Maxwell curve: |x1| > 1");
    if (a <= flat_half_width) return -M;
    if (a >= 1.0) return 0.0;
    const double p = support_point(a);
    const double q = p / sol_.p0;
    // p a - v(p) = p0 (q (a - 1) - (nu(q) - q))
    return sol_.p0 * (q * (a - 1.0) - sol_.profile.nu->gap(q));
}

double MaxwellCurve::slope(double x1) const {
    const double a = std::abs(x1);
    if (a < flat_half_width) return 0.0;
    if (a == flat_half_width) return std::copysign(corner_jump, x1);
    if (a >= 1.0) return std::copysign(edge_slope, x1);
    return std::copysign(support_point(a), x1);
}

MaxwellCurve conjugate_profile(const ExtremalSolution& sol, int n) { return MaxwellCurve(sol, n); }

double biconjugate(const MaxwellCurve& curve, double p) {
    return num::golden_max([&](double x) { return p * x - curve.value(x); }, -1.0, 1.0, 90).value;
}

BodyEvaluator::BodyEvaluator(ExtremalSolution sol, int iterations) : sol_(std::move(sol)), iterations_(iterations) {}

double BodyEvaluator::operator()(double x1, double x2) const {
    x2 = std::abs(x2);
    const double r2 = x1 * x1 + x2 * x2;
    if (r2 > 1.0 + 1e-12) throw EvaluationError("body evaluation outside the unit disk");
    const double c = std::sqrt(std::max(0.0, 1.0 - x2 * x2));
    const double p0 = sol_.p0;
    // sup over p2 in closed form; what remains is concave in p1 on [-p0, p0]
    auto h = [&](double p1) {
        const double a = std::abs(p1);
        if (a >= p0) return p1 * x1 - a * c;
        const double gap = sol_.v_gap(a);
        const double s = std::sqrt(gap * (2.0 * a + gap));  // sqrt(v^2 - p1^2)
        const bool cone = c == 0.0 || a * x2 >= s * c;    // p2* = a x2 / c >= s
        return cone ? p1 * x1 - a * c : p1 * x1 + s * x2 - (a + gap);
    };
    double u = num::golden_max(h, -p0, p0, iterations_).value;
    if (!std::isfinite(u)) throw EvaluationError("body evaluation produced a non-finite value");
    return std::min(u, 0.0);
}

double body_evaluate(const BodyEvaluator& ev, double x1, double x2) { return ev(x1, x2); }

double generator_endpoint(const MaxwellCurve& curve, double theta) {
    const double ct = std::cos(theta);
    auto obj = [&](double s) { return -curve.value(s) / (1.0 - s * ct); };
    return num::golden_max(obj, -1.0, 1.0, 90).arg;
}

namespace {

struct Param {
    double lo, hi;  // curve parameters joined to a circle vertex
};

}  // namespace

BodyMesh build_mesh(const ExtremalSolution& sol, int n_profile, int n_circle) {
    if (n_profile < 1) throw DomainError("build_mesh: n_profile must be positive");
    n_circle = std::max(4, (n_circle + 3) / 4 * 4);
    const MaxwellCurve curve(sol, 2);
    const double s0 = sol.slope0;
    const int half = n_circle / 2;

    BodyMesh mesh;
    mesh.M = sol.M;
    mesh.p0 = sol.p0;
    mesh.n_profile = n_profile;
    mesh.n_circle = n_circle;

    // circle vertices 0..n_circle-1 at angle 2 pi j / n
    for (int j = 0; j < n_circle; ++j) {
        double th = 2.0 * std::numbers::pi * j / n_circle;
        double x = std::cos(th), y = std::sin(th);
        if (j == half / 2 || j == 3 * half / 2) x = 0.0;
        if (j == 0 || j == half) y = 0.0;
        mesh.vertices.push_back({x, y, 0.0});
    }

    // generator pairing for the upper half circle
    std::vector<Param> param(static_cast<std::size_t>(half + 1));
    num::parallel_for(static_cast<std::size_t>(half + 1), [&](std::size_t j) {
        const int q = half / 2;
        const int jj = static_cast<int>(j);
        if (jj == 0) param[j] = {1.0, 1.0};
        else if (jj == half) param[j] = {-1.0, -1.0};
        else if (jj == q) param[j] = {-s0, s0};
        else if (jj < q) {
            double s = generator_endpoint(curve, 2.0 * std::numbers::pi * jj / n_circle);
            param[j] = {s, s};
        } else {
            double s = -generator_endpoint(curve, std::numbers::pi - 2.0 * std::numbers::pi * jj / n_circle);
            param[j] = {s, s};
        }
    });

    // curve vertices, descending in x1; the ends are circle vertices 0 and half
    std::vector<double> s_curve{1.0};
    std::vector<int> idx_curve{0};
    auto add_curve = [&](double s) {
        s_curve.push_back(s);
        idx_curve.push_back(static_cast<int>(mesh.vertices.size()));
        mesh.vertices.push_back({s, 0.0, curve.value(s)});
    };
    for (int k = n_profile - 1; k >= 1; --k) add_curve(s0 + (1.0 - s0) * k / n_profile);
    add_curve(s0);
    add_curve(-s0);
    for (int k = 1; k < n_profile; ++k) add_curve(-(s0 + (1.0 - s0) * k / n_profile));
    s_curve.push_back(-1.0);
    idx_curve.push_back(half);

    // zipper between the half circle and the curve, following the generator order
    std::vector<std::array<int, 3>> upper;
    constexpr double tie = 1e-12;
    std::size_t i = 0, k = 0;
    const std::size_t na = param.size(), nb = s_curve.size();
    auto circle_vertex = [](std::size_t j) { return static_cast<int>(j); };
    while (i + 1 < na || k + 1 < nb) {
        bool on_axis = i == 0 || i + 1 == na;
        bool advance_curve = k + 1 < nb &&
                             (i + 1 == na || s_curve[k + 1] >= param[i].lo - tie ||
                              (!on_axis && s_curve[k + 1] > param[i + 1].hi + tie));
        std::array<int, 3> t{};
        if (advance_curve) {
            t = {circle_vertex(i), idx_curve[k], idx_curve[k + 1]};
            ++k;
        } else {
            t = {circle_vertex(i), idx_curve[k], circle_vertex(i + 1)};
            ++i;
        }
        if (t[0] != t[1] && t[1] != t[2] && t[0] != t[2]) upper.push_back(t);
    }

    auto orient_down = [&](std::array<int, 3> t) {
        const auto& a = mesh.vertices[static_cast<std::size_t>(t[0])];
        const auto& b = mesh.vertices[static_cast<std::size_t>(t[1])];
        const auto& c = mesh.vertices[static_cast<std::size_t>(t[2])];
        double area = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        if (area > 0) std::swap(t[1], t[2]);  // normals of the lower surface point to -z
        return t;
    };
    auto mirror = [&](int v) {
        if (v > 0 && v < half) return n_circle - v;
        return v;
    };
    for (const auto& t : upper) {
        mesh.faces.push_back(orient_down(t));
        mesh.faces.push_back(orient_down({mirror(t[0]), mirror(t[1]), mirror(t[2])}));
    }

    // base disk at z = 0, normals to +z
    const int centre = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back({0.0, 0.0, 0.0});
    for (int j = 0; j < n_circle; ++j) mesh.faces.push_back({centre, j, (j + 1) % n_circle});
    return mesh;
}

MeshCheck check_mesh(const BodyMesh& mesh) {
    std::map<std::pair<int, int>, int> undirected;
    std::map<std::pair<int, int>, int> directed;
    for (const auto& f : mesh.faces) {
        for (int e = 0; e < 3; ++e) {
            int a = f[static_cast<std::size_t>(e)], b = f[static_cast<std::size_t>((e + 1) % 3)];
            ++undirected[{std::min(a, b), std::max(a, b)}];
            ++directed[{a, b}];
        }
    }
    MeshCheck c;
    c.edges = undirected.size();
    for (const auto& [e, n] : undirected) {
        if (n == 1) ++c.open_edges;
        if (n > 2) ++c.nonmanifold_edges;
    }
    for (const auto& [e, n] : directed)
        if (n != 1) c.consistently_oriented = false;
    return c;
}

void export_obj(const BodyMesh& mesh, const std::string& path) {
    if (mesh.vertices.empty() || mesh.faces.empty()) throw IoError("refusing to write empty mesh to " + path);
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.precision(15);
    out << "# M " << mesh.M << " p0 " << mesh.p0 << " n_profile " << mesh.n_profile << " n_circle " << mesh.n_circle
        << "\n";
    for (const auto& v : mesh.vertices) out << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    if (!out) throw IoError("write failed for " + path);
}

void export_profile_csv(const MaxwellCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.precision(15);
    out << "x1,z\n";
    for (const auto& [x, z] : curve.samples) out << x << ',' << z << '\n';
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace minres
