#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "minres/errors.hpp"
#include "minres/extremal.hpp"
#include "minres/geometry.hpp"

using namespace minres;

namespace {

const ExtremalSolution& sol1() {
    static const ExtremalSolution s = solve_for_height(1.0);
    return s;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("minres_geometry_" + name);
}

}  // namespace

TEST(MaxwellCurve, FlatBottomAndBaseCircle) {
    const ExtremalSolution& s = sol1();
    MaxwellCurve c = conjugate_profile(s, 101);
    EXPECT_NEAR(c.value(0.0), -s.M, 1e-12);
    EXPECT_NEAR(c.value(0.99 * s.slope0), -s.M, 1e-12);
    EXPECT_NEAR(c.value(-0.5 * s.slope0), -s.M, 1e-12);
    EXPECT_NEAR(c.value(1.0), 0.0, 1e-12);
    EXPECT_NEAR(c.value(-1.0), 0.0, 1e-12);
    EXPECT_NEAR(c.flat_half_width, s.slope0, 1e-12);
}

TEST(MaxwellCurve, CornerFacts) {
    for (double M : {0.5, 1.0, 5.0}) {
        const ExtremalSolution s = solve_for_height(M);
        MaxwellCurve c = conjugate_profile(s, 11);
        EXPECT_NEAR(c.corner_jump, s.r, 1e-6);
        EXPECT_NEAR(c.edge_slope, s.p0, 1e-4);
        const double h = 1e-7, x = s.slope0;
        EXPECT_NEAR((c.value(x + h) - c.value(x)) / h, s.r, 1e-4);
        EXPECT_NEAR((c.value(x) - c.value(x - h)) / h, 0.0, 1e-6);
        EXPECT_NEAR((c.value(1.0) - c.value(1.0 - h)) / h, s.p0, 1e-4 * s.p0);
        EXPECT_NEAR(c.slope(x), s.r, 1e-6);
        EXPECT_NEAR(c.slope(1.0), s.p0, 1e-6);
    }
}

TEST(MaxwellCurve, Convex) {
    MaxwellCurve c = conjugate_profile(sol1(), 11);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const double a = u(rng), b = u(rng);
        EXPECT_LE(c.value(0.5 * (a + b)), 0.5 * (c.value(a) + c.value(b)) + 1e-12);
    }
}

TEST(MaxwellCurve, BiconjugationRecoversTheProfile) {
    const ExtremalSolution& s = sol1();
    MaxwellCurve c = conjugate_profile(s, 11);
    for (int i = 0; i < 50; ++i) {
        const double p = s.p0 * i / 49.0;
        EXPECT_NEAR(biconjugate(c, p), s.v(p).value(), 1e-7) << p;
        EXPECT_NEAR(biconjugate(c, -p), s.v(p).value(), 1e-7) << -p;
    }
}

TEST(Body, BoundaryAndMinimum) {
    const ExtremalSolution& s = sol1();
    BodyEvaluator body(s);
    EXPECT_NEAR(body(1.0, 0.0), 0.0, 1e-12);
    EXPECT_NEAR(body(0.0, 1.0), 0.0, 1e-12);
    EXPECT_NEAR(body(std::cos(0.7), std::sin(0.7)), 0.0, 1e-12);
    EXPECT_NEAR(body(0.0, 0.0), -s.M, 1e-12);
    EXPECT_NEAR(body_evaluate(body, 0.0, 0.0), -s.M, 1e-12);
}

TEST(Body, SectionIsTheMaxwellCurve) {
    const ExtremalSolution& s = sol1();
    BodyEvaluator body(s);
    MaxwellCurve c = conjugate_profile(s, 11);
    for (int i = 0; i <= 200; ++i) {
        const double x = -1.0 + 2.0 * i / 200.0;
        EXPECT_NEAR(body(x, 0.0), c.value(x), 1e-8) << x;
    }
}

TEST(Body, BoundsAndConvexityOnRandomChords) {
    const ExtremalSolution& s = sol1();
    BodyEvaluator body(s);
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ur(0.0, 1.0), ut(0.0, 2.0 * M_PI);
    auto point = [&] {
        const double r = std::sqrt(ur(rng)), t = ut(rng);
        return std::pair{r * std::cos(t), r * std::sin(t)};
    };
    for (int k = 0; k < 1000; ++k) {
        auto [a1, a2] = point();
        auto [b1, b2] = point();
        const double ua = body(a1, a2), ub = body(b1, b2);
        const double um = body(0.5 * (a1 + b1), 0.5 * (a2 + b2));
        EXPECT_LE(um, 0.5 * (ua + ub) + 1e-9);
        EXPECT_GE(ua, -s.M - 1e-12);
        EXPECT_LE(ua, 1e-12);
    }
}

TEST(Body, SymmetricInSecondCoordinate) {
    BodyEvaluator body(sol1());
    for (auto [x1, x2] : {std::pair{0.3, 0.4}, std::pair{-0.7, 0.2}, std::pair{0.1, 0.9}})
        EXPECT_NEAR(body(x1, x2), body(x1, -x2), 1e-13);
}

TEST(Mesh, WatertightAndInsideTheCylinder) {
    for (double M : {0.5, 1.0, 1.5}) {
        const ExtremalSolution s = solve_for_height(M);
        BodyMesh mesh = build_mesh(s, 100, 200);
        MeshCheck mc = check_mesh(mesh);
        EXPECT_TRUE(mc.watertight()) << M;
        EXPECT_TRUE(mc.consistently_oriented) << M;
        double zmin = 0.0;
        for (const auto& v : mesh.vertices) {
            EXPECT_LE(v[0] * v[0] + v[1] * v[1], 1.0 + 1e-9);
            EXPECT_GE(v[2], -M - 1e-9);
            EXPECT_LE(v[2], 1e-9);
            zmin = std::min(zmin, v[2]);
        }
        EXPECT_NEAR(zmin, -M, 1e-9);
        // closed surface: V - E + F = 2
        EXPECT_EQ(static_cast<long>(mesh.vertices.size()) - static_cast<long>(mc.edges) +
                      static_cast<long>(mesh.faces.size()),
                  2);
    }
}

TEST(Mesh, SmallestCircle) {
    BodyMesh mesh = build_mesh(sol1(), 8, 4);
    EXPECT_EQ(mesh.n_circle, 4);
    MeshCheck mc = check_mesh(mesh);
    EXPECT_TRUE(mc.watertight());
    EXPECT_TRUE(mc.consistently_oriented);
}

TEST(Mesh, VerticesLieOnTheBodyAndFacesAboveIt) {
    const ExtremalSolution& s = sol1();
    BodyEvaluator body(s);
    const int n = 100;
    BodyMesh mesh = build_mesh(s, n, 2 * n);
    for (const auto& v : mesh.vertices) {
        if (std::abs(v[2]) < 1e-15 && v[0] * v[0] + v[1] * v[1] < 1.0 - 1e-9) continue;  // base disk centre
        EXPECT_NEAR(body(v[0], v[1]), v[2], 1e-9) << v[0] << " " << v[1];
    }
    // flat triangles spanning a convex surface sit on or above it, by at most the chord sagitta
    for (std::size_t k = 0; k < mesh.faces.size(); k += 7) {
        const auto& f = mesh.faces[k];
        double c[3] = {0, 0, 0};
        for (int i : f)
            for (int d = 0; d < 3; ++d) c[d] += mesh.vertices[static_cast<std::size_t>(i)][d] / 3.0;
        if (std::abs(c[2]) < 1e-15) continue;  // base disk
        const double gap = c[2] - body(c[0], c[1]);
        EXPECT_GE(gap, -1e-9);
        EXPECT_LE(gap, 5.0 / (n * n));
    }
}

TEST(Export, ObjRoundTrip) {
    BodyMesh mesh = build_mesh(sol1(), 20, 40);
    const auto path = temp_path("roundtrip.obj");
    export_obj(mesh, path.string());
    std::ifstream in(path);
    std::string line;
    std::size_t nv = 0, nf = 0;
    int max_index = 0;
    while (std::getline(in, line)) {
        if (line.rfind("v ", 0) == 0) ++nv;
        if (line.rfind("f ", 0) == 0) {
            ++nf;
            int a, b, c;
            ASSERT_EQ(std::sscanf(line.c_str(), "f %d %d %d", &a, &b, &c), 3);
            EXPECT_GE(std::min({a, b, c}), 1);
            max_index = std::max({max_index, a, b, c});
        }
    }
    EXPECT_EQ(nv, mesh.vertices.size());
    EXPECT_EQ(nf, mesh.faces.size());
    EXPECT_EQ(static_cast<std::size_t>(max_index), mesh.vertices.size());
    std::filesystem::remove(path);
}

TEST(Export, EmptyMeshIsAnError) {
    const auto path = temp_path("empty.obj");
    std::filesystem::remove(path);
    EXPECT_THROW(export_obj(BodyMesh{}, path.string()), IoError);
    EXPECT_FALSE(std::filesystem::exists(path));
}

TEST(Export, UnwritablePath) {
    BodyMesh mesh = build_mesh(sol1(), 8, 8);
    EXPECT_THROW(export_obj(mesh, "/nonexistent_dir/body.obj"), IoError);
}

TEST(Export, ProfileCsvRowCount) {
    MaxwellCurve c = conjugate_profile(sol1(), 57);
    EXPECT_EQ(c.samples.size(), 57u);
    const auto path = temp_path("profile.csv");
    export_profile_csv(c, path.string());
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "x1,z");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    EXPECT_EQ(rows, 57);
    std::filesystem::remove(path);
}
