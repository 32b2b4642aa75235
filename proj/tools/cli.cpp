#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "json_format.hpp"
#include "minres/errors.hpp"
#include "minres/extremal.hpp"
#include "minres/functional.hpp"
#include "minres/geometry.hpp"
#include "minres/numerics.hpp"

namespace minres::cli {

namespace {

using nlohmann::json;

const std::vector<double> kTableRows = {0.5, 1.0, 1.5, 2.0, 2.5, 5.0, 10.0, 50.0, 100.0};

struct Target {
    std::optional<double> M;
    std::optional<double> p0;
};

struct Config {
    Target target;
    double tol = 1e-10;
    std::string out;
    std::string format;
    std::vector<double> alphas = {0.0, 0.01, 0.1};
    std::vector<double> rows = kTableRows;
    int resolution = 0;
    bool inject_fault = false;
};

ExtremalSolution solve_target(const Target& t, double tol) {
    if (t.M) return solve_for_height(*t.M, tol);
    return solve_for_p0(*t.p0, tol);
}

json summary_json(const ExtremalSolution& s) {
    return {{"M", s.M}, {"p0", s.p0}, {"r", s.r}, {"slope0", s.slope0}, {"J", s.J}, {"resistance", 2.0 * s.J}};
}

// Full record: the summary plus the scaled profile and (q, nu, nu') along the singular arc.
json solution_json(const ExtremalSolution& s, int n_samples = 41) {
    json j = summary_json(s);
    const ScaledProfile& prof = s.profile;
    j["alpha"] = prof.alpha;
    j["rho"] = prof.rho;
    j["slope"] = prof.slope;
    j["height0"] = prof.height0;
    json samples = json::array();
    for (int i = 0; i < n_samples; ++i) {
        const double q = prof.rho + (1.0 - prof.rho) * i / (n_samples - 1);
        const CurvePoint c = prof.nu->at(q);
        samples.push_back(json::array({q, c.value(), c.slope()}));
    }
    j["nu_samples"] = samples;
    return j;
}

const CLI::Validator kPositive(
    [](std::string& in) -> std::string {
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(in, &used);
            if (used != in.size()) return "'" + in + "' is not a number";
        } catch (const std::exception&) {
            return "'" + in + "' is not a number";
        }
        if (!(v > 0.0) || !std::isfinite(v)) return "must be positive, got " + in;
        return {};
    },
    "POSITIVE");

// Writes to --out when given, otherwise to the stream.
void emit(const Config& cfg, std::ostream& out, const std::string& text) {
    if (cfg.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.out);
    if (!f) throw IoError("cannot open " + cfg.out + " for writing");
    f << text;
    if (!f) throw IoError("write to " + cfg.out + " failed");
}

std::string alpha_diagnostic(double alpha) {
    if (alpha >= kAlphaLimit)
        return fmt::format("alpha = {} >= 1/3: outside the range where the switching condition has a root", alpha);
    return fmt::format("alpha = {} < 0: the scaled problem needs alpha >= 0", alpha);
}

int cmd_solve(const Config& cfg, std::ostream& out) {
    ExtremalSolution s = solve_target(cfg.target, cfg.tol);
    if (cfg.format == "text") {
        emit(cfg, out,
             fmt::format("M          {:.7e}\np0         {:.7e}\nr          {:.7e}\nslope0     {:.7e}\n"
                         "J          {:.7e}\nresistance {:.7e}\n",
                         s.M, s.p0, s.r, s.slope0, s.J, 2.0 * s.J));
    } else {
        emit(cfg, out, dump_scientific(solution_json(s)) + "\n");
    }
    return kExitOk;
}

int cmd_table(const Config& cfg, std::ostream& out, std::ostream& err) {
    struct Row {
        std::optional<ExtremalSolution> sol;
        std::string error;
    };
    std::vector<Row> rows(cfg.rows.size());
    num::parallel_for(rows.size(), [&](std::size_t i) {
        try {
            rows[i].sol = solve_for_height(cfg.rows[i], cfg.tol);
        } catch (const std::exception& e) {
            rows[i].error = e.what();
        }
    });

    bool failed = false;
    std::string text;
    json arr = json::array();
    if (cfg.format != "json") text = "M,p0,r,vprime0,J\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double M = cfg.rows[i];
        if (!rows[i].sol) {
            failed = true;
            err << fmt::format("row M = {}: {}\n", M, rows[i].error);
            if (cfg.format == "json")
                arr.push_back({{"M", M}, {"error", rows[i].error}});
            else
                text += fmt::format("{:.6g},failed,failed,failed,failed\n", M);
            continue;
        }
        const ExtremalSolution& s = *rows[i].sol;
        if (cfg.format == "json")
            arr.push_back({{"M", M}, {"p0", s.p0}, {"r", s.r}, {"vprime0", s.slope0}, {"J", s.J}});
        else
            text += fmt::format("{:.6g},{:.6g},{:.6g},{:.6g},{:.6g}\n", M, s.p0, s.r, s.slope0, s.J);
    }
    if (cfg.format == "json") text = dump_scientific(arr) + "\n";
    emit(cfg, out, text);
    return failed ? kExitCheckFailed : kExitOk;
}

int cmd_constants(const Config& cfg, std::ostream& out) {
    const LimitConstants c = limit_constants(cfg.tol);
    if (cfg.format == "json") {
        json j = {{"r_hat", c.r_hat},
                  {"M_hat_kappa0", c.M_hat},
                  {"M_hat_nu0", c.nu_hat0},
                  {"slope_hat_at_switch", c.slope_hat},
                  {"slope_hat_nu_at_0", c.nup_hat0},
                  {"J_hat", c.J_hat}};
        emit(cfg, out, dump_scientific(j) + "\n");
    } else {
        emit(cfg, out,
             fmt::format("r_hat                     {:.10f}\n"
                         "M_hat (kappa(0))          {:.10f}\n"
                         "M_hat (nu(0))             {:.10f}\n"
                         "slope (nu'(r_hat))        {:.10f}\n"
                         "slope (nu'(0))            {:.10f}\n"
                         "J_hat                     {:.8f}\n",
                         c.r_hat, c.M_hat, c.nu_hat0, c.slope_hat, c.nup_hat0, c.J_hat));
    }
    return kExitOk;
}

struct Verdict {
    std::string name;
    bool pass;
    double value;
    double tolerance;
    std::string note;
};

json verdict_json(const Verdict& v) {
    json j = {{"name", v.name}, {"pass", v.pass}, {"value", v.value}, {"tolerance", v.tolerance}};
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

template <class F>
Verdict guarded(const std::string& name, double tolerance, F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        return {name, false, std::nan(""), tolerance, e.what()};
    }
}

std::vector<Verdict> alpha_checks(double alpha, const Config& cfg) {
    std::vector<Verdict> out;
    const ScaledProfile prof = assemble_profile(alpha, cfg.tol);

    out.push_back(guarded("adjoint_omega0", 1e-8, [&]() -> Verdict {
        std::optional<double> upper;
        if (cfg.inject_fault) upper = prof.rho + 1e-2;
        AdjointProfile adj = adjoint_omega(prof, 201, upper);
        return {"adjoint_omega0", std::abs(adj.omega0) < 1e-8, adj.omega0, 1e-8, ""};
    }));
    out.push_back(guarded("adjoint_negative", 0.0, [&]() -> Verdict {
        AdjointProfile adj = adjoint_omega(prof);
        double worst = -std::numeric_limits<double>::infinity();
        for (auto [q, w] : adj.samples)
            if (q > 0.01 && q < prof.rho - 0.01) worst = std::max(worst, w);
        return {"adjoint_negative", worst < 0.0, worst, 0.0, "max omega on (0.01, rho - 0.01)"};
    }));
    out.push_back(guarded("euler_lagrange", 1e-6, [&]() -> Verdict {
        double worst = 0.0;
        for (int i = 0; i <= 500; ++i) {
            const double q = prof.rho + (0.99 - prof.rho) * i / 500.0;
            worst = std::max(worst, std::abs(euler_lagrange_residual(*prof.nu, q)));
        }
        return {"euler_lagrange", worst < 1e-6, worst, 1e-6, "relative residual on [rho, 0.99]"};
    }));
    out.push_back(guarded("jacobi", 0.0, [&]() -> Verdict {
        JacobiResult r = jacobi_check(prof, 0.01, cfg.tol);
        return {"jacobi", !r.sign_change && r.min_abs_zeta > 0.0, r.min_abs_zeta, 0.0, "min |zeta| on [0, 0.99]"};
    }));
    out.push_back(guarded("field_jacobian", 0.0, [&]() -> Verdict {
        FieldJacobian f = field_jacobian_check(alpha);
        return {"field_jacobian", true, static_cast<double>(f.sign), 0.0, "constant sign"};
    }));
    out.push_back(guarded("taylor_anchor", 1e-6, [&]() -> Verdict {
        const std::vector<double> d = nu_derivatives_at_one(alpha);
        const double e = std::max(std::abs(prof.nu->curvature_at_one() - d[2]),
                                  std::abs(prof.nu->third_derivative_at_one() - d[3]));
        return {"taylor_anchor", e < 1e-6, e, 1e-6, ""};
    }));
    if (alpha > 0.0) {
        const ExtremalSolution sol = solve_for_p0(1.0 / std::sqrt(alpha), cfg.tol);
        out.push_back(guarded("gamma_form", 1e-8, [&]() -> Verdict {
            const double e = std::abs(gamma_form_J(sol) / sol.J - 1.0);
            return {"gamma_form", e < 1e-8, e, 1e-8, "relative"};
        }));
        out.push_back(guarded("oracle", 1e-2, [&]() -> Verdict {
            BodyEvaluator body(sol);
            ResistanceOptions opt;
            opt.n = cfg.resolution > 0 ? cfg.resolution : 200;
            const double R = resistance_direct([&](double x1, double x2) { return body(x1, x2); }, opt);
            const double e = std::abs(R / (2.0 * sol.J) - 1.0);
            return {"oracle", e < 1e-2, e, 1e-2, "relative, direct resistance vs 2J"};
        }));
    }
    return out;
}

std::vector<Verdict> identity_checks(const Config& cfg) {
    std::vector<Verdict> out;
    const ArcPtr nu = solve_nu(0.0, cfg.tol);
    for (double rho : {0.05, 0.1, 0.2, 0.5}) {
        const std::string name = fmt::format("switch_closed_form@{}", rho);
        out.push_back(guarded(name, 1e-8, [&]() -> Verdict {
            const double e = std::abs(I_of(rho, 0.0, *nu) - I_closed_form_alpha0(rho, *nu));
            return {name, e < 1e-8, e, 1e-8, ""};
        }));
    }
    for (double a : {0.1, 0.2, 0.3}) {
        const std::string name = fmt::format("endpoint_integral@{}", a);
        out.push_back(guarded(name, 1e-8, [&]() -> Verdict {
            const double e = std::abs(endpoint_integral(a) - endpoint_integral_closed_form(a));
            return {name, e < 1e-8, e, 1e-8, ""};
        }));
    }
    out.push_back(guarded("endpoint_integral_root", 1e-10, [&]() -> Verdict {
        const double e = std::abs(endpoint_integral_closed_form(1.0 / 3.0));
        return {"endpoint_integral_root", e < 1e-10, e, 1e-10, "closed form at alpha = 1/3"};
    }));
    for (double q : {0.3, 0.5, 0.9}) {
        const std::string name = fmt::format("abel_invariant@{}", q);
        out.push_back(guarded(name, 1e-6, [&]() -> Verdict {
            const double e = std::abs(abel_residual(*nu, q));
            return {name, e < 1e-6, e, 1e-6, ""};
        }));
    }
    return out;
}

int cmd_check(const Config& cfg, std::ostream& out) {
    for (double a : cfg.alphas)
        if (!(a >= 0.0 && a < kAlphaLimit)) throw ValidityError(alpha_diagnostic(a));

    std::vector<std::vector<Verdict>> per_alpha(cfg.alphas.size());
    std::vector<std::string> errors(cfg.alphas.size());
    num::parallel_for(cfg.alphas.size(), [&](std::size_t i) {
        try {
            per_alpha[i] = alpha_checks(cfg.alphas[i], cfg);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    const std::vector<Verdict> ids = identity_checks(cfg);

    bool all = true;
    json report = {{"fault_injected", cfg.inject_fault}};
    json cases = json::array();
    for (std::size_t i = 0; i < cfg.alphas.size(); ++i) {
        json c = {{"alpha", cfg.alphas[i]}};
        json checks = json::array();
        bool pass = errors[i].empty();
        for (const Verdict& v : per_alpha[i]) {
            pass = pass && v.pass;
            checks.push_back(verdict_json(v));
        }
        if (!errors[i].empty()) c["error"] = errors[i];
        c["checks"] = checks;
        c["pass"] = pass;
        all = all && pass;
        cases.push_back(c);
    }
    json idj = json::array();
    for (const Verdict& v : ids) {
        all = all && v.pass;
        idj.push_back(verdict_json(v));
    }
    report["cases"] = cases;
    report["identities"] = idj;
    report["pass"] = all;
    emit(cfg, out, dump_scientific(report) + "\n");
    return all ? kExitOk : kExitCheckFailed;
}

std::filesystem::path sibling(const std::string& path, const char* ext) {
    std::filesystem::path p(path);
    p.replace_extension(ext);
    return p;
}

int cmd_mesh(const Config& cfg, std::ostream& out) {
    const ExtremalSolution s = solve_target(cfg.target, cfg.tol);
    const int n_profile = cfg.resolution > 0 ? cfg.resolution : 200;
    const BodyMesh mesh = build_mesh(s, n_profile, 2 * n_profile);
    const MeshCheck mc = check_mesh(mesh);
    export_obj(mesh, cfg.out);
    export_profile_csv(conjugate_profile(s, 2 * n_profile), sibling(cfg.out, ".csv").string());

    json side = summary_json(s);
    side["vertices"] = mesh.vertices.size();
    side["faces"] = mesh.faces.size();
    side["watertight"] = mc.watertight();
    side["consistently_oriented"] = mc.consistently_oriented;
    const std::string side_path = sibling(cfg.out, ".json").string();
    std::ofstream f(side_path);
    if (!f) throw IoError("cannot open " + side_path + " for writing");
    f << dump_scientific(side) << "\n";

    out << fmt::format("wrote {} ({} vertices, {} faces, watertight: {})\n", cfg.out, mesh.vertices.size(),
                       mesh.faces.size(), mc.watertight() ? "yes" : "no");
    return mc.watertight() && mc.consistently_oriented ? kExitOk : kExitCheckFailed;
}

int cmd_resistance(const Config& cfg, std::ostream& out) {
    const ExtremalSolution s = solve_target(cfg.target, cfg.tol);
    BodyEvaluator body(s);
    ResistanceOptions opt;
    if (cfg.resolution > 0) opt.n = cfg.resolution;
    const double R = resistance_direct([&](double x1, double x2) { return body(x1, x2); }, opt);
    json j = {{"M", s.M},     {"p0", s.p0},         {"J", s.J},
              {"two_J", 2.0 * s.J}, {"resistance_direct", R}, {"relative_difference", R / (2.0 * s.J) - 1.0},
              {"resolution", opt.n}};
    emit(cfg, out, dump_scientific(j) + "\n");
    return kExitOk;
}

void add_target(CLI::App* sub, Config& cfg) {
    auto* target = sub->add_option_group("target", "exactly one of --M, --p0");
    target->add_option("--M", cfg.target.M, "height of the body")->check(kPositive);
    target->add_option("--p0", cfg.target.p0, "corner slope p0 (> sqrt(3))")->check(kPositive);
    target->require_option(1);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Newton minimal-resistance bodies: extremal profiles, verification and meshes"};
    app.require_subcommand(1);
    Config cfg;

    auto add_common = [&](CLI::App* sub, std::vector<std::string> formats) {
        sub->add_option("--tol", cfg.tol, "ODE tolerance")->check(kPositive);
        sub->add_option("--out", cfg.out, "output file");
        sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember(formats));
    };

    auto* solve = app.add_subcommand("solve", "extremal profile for a height M or a corner slope p0");
    add_target(solve, cfg);
    auto* table = app.add_subcommand("table", "parameter table for a list of heights");
    table->add_option("--rows", cfg.rows, "heights M")->check(kPositive);
    auto* constants = app.add_subcommand("constants", "limit constants of the scaled problem");
    auto* check = app.add_subcommand("check", "verification suite");
    check->add_option("--alpha", cfg.alphas, "alpha values");
    check->add_flag("--inject-fault", cfg.inject_fault, "shift the switching point by 1e-2");
    check->add_option("--resolution", cfg.resolution, "grid of the resistance oracle")->check(kPositive);
    auto* mesh = app.add_subcommand("mesh", "OBJ surface, JSON sidecar and section CSV");
    add_target(mesh, cfg);
    mesh->add_option("--resolution", cfg.resolution, "points along the section curve")->check(CLI::Range(8, 100000));
    auto* resistance = app.add_subcommand("resistance", "direct resistance integral of the body");
    add_target(resistance, cfg);
    resistance->add_option("--resolution", cfg.resolution, "polar grid size")->check(CLI::Range(4, 100000));

    add_common(solve, {"json", "text"});
    add_common(table, {"csv", "json"});
    add_common(constants, {"text", "json"});
    add_common(check, {"json"});
    add_common(resistance, {"json"});
    mesh->add_option("--tol", cfg.tol, "ODE tolerance")->check(kPositive);
    mesh->add_option("--out", cfg.out, "OBJ path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << e.what() << "\n";
        return kExitUsage;
    }

    if (cfg.format.empty()) cfg.format = table->parsed() ? "csv" : constants->parsed() ? "text" : "json";

    try {
        if (solve->parsed()) return cmd_solve(cfg, out);
        if (table->parsed()) return cmd_table(cfg, out, err);
        if (constants->parsed()) return cmd_constants(cfg, out);
        if (check->parsed()) return cmd_check(cfg, out);
        if (mesh->parsed()) return cmd_mesh(cfg, out);
        if (resistance->parsed()) return cmd_resistance(cfg, out);
    } catch (const ValidityError& e) {
        err << "validity: " << e.what() << "\n";
        return kExitValidity;
    } catch (const NoRoot& e) {
        err << "no root: " << e.what() << "\n";
        return kExitValidity;
    } catch (const InconsistentScale& e) {
        err << "inconsistent scale: " << e.what() << "\n";
        return kExitValidity;
    } catch (const IoError& e) {
        err << "io: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}

}  // namespace minres::cli
