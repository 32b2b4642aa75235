#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "minres/extremal.hpp"

namespace minres {

// Section of the body by the symmetry plane: z = v*(x1) = sup_p (p x1 - v(p)).
class MaxwellCurve {
public:
    MaxwellCurve(ExtremalSolution sol, int n);

    [[nodiscard]] double value(double x1) const;
    // (v*)'(x1); on the flat part 0, at the corners the right/left limit away from the flat part
    [[nodiscard]] double slope(double x1) const;
    // p with v'(p) = |x1| on the singular arc (x1 strictly between the flat part and 1)
    [[nodiscard]] double support_point(double x1) const;

    std::vector<std::pair<double, double>> samples;  // (x1, z) on [-1, 1]
    double flat_half_width;
    double corner_jump;
    double edge_slope;
    double M;

    [[nodiscard]] const ExtremalSolution& solution() const { return sol_; }

private:
    ExtremalSolution sol_;
};

MaxwellCurve conjugate_profile(const ExtremalSolution& sol, int n);

// sup over x1 in [-1, 1] of (p x1 - v*(x1)); recovers v(p) for |p| <= p0.
[[nodiscard]] double biconjugate(const MaxwellCurve& curve, double p);

// u(x) = sup_p (<p, x> - max(|p|, v(p1))), the convex hull of the Maxwell curve and the unit circle.
class BodyEvaluator {
public:
    explicit BodyEvaluator(ExtremalSolution sol, int iterations = 80);

    [[nodiscard]] double operator()(double x1, double x2) const;
    [[nodiscard]] const ExtremalSolution& solution() const { return sol_; }

private:
    ExtremalSolution sol_;
    int iterations_;
};

[[nodiscard]] double body_evaluate(const BodyEvaluator& ev, double x1, double x2);

struct BodyMesh {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 3>> faces;  // 0-based
    double M = 0.0;
    double p0 = 0.0;
    int n_profile = 0;
    int n_circle = 0;
};

// Supporting generator from the circle point at angle theta (0 < theta < pi/2) to the curve:
// argmax over s of -v*(s) / (1 - s cos theta).
[[nodiscard]] double generator_endpoint(const MaxwellCurve& curve, double theta);

// Closed surface: lower and upper (x2 < 0, x2 > 0) ruled sheets between the Maxwell curve and the
// unit circle, plus the base disk at z = 0.
BodyMesh build_mesh(const ExtremalSolution& sol, int n_profile, int n_circle);

struct MeshCheck {
    std::size_t edges = 0;
    std::size_t open_edges = 0;         // used by one face
    std::size_t nonmanifold_edges = 0;  // used by three or more faces
    bool consistently_oriented = true;
    [[nodiscard]] bool watertight() const { return open_edges == 0 && nonmanifold_edges == 0; }
};

[[nodiscard]] MeshCheck check_mesh(const BodyMesh& mesh);

void export_obj(const BodyMesh& mesh, const std::string& path);
void export_profile_csv(const MaxwellCurve& curve, const std::string& path);

}  // namespace minres
