// Command-line surface: subdifferential computations, Legendre germ tables,
// calculus check suites, and SVG plots. JSON payloads are deterministic
// (byte-identical for identical configs); timestamps go to a sidecar file.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nonsmooth/json_io.hpp"
#include "nonsmooth/suite.hpp"
#include "nonsmooth/svg.hpp"

namespace ns = nonsmooth;
using ns::ordered_json;

namespace {

struct CliCheckFailure {};  // a check ran fine but does not hold -> exit 1

ns::Vec to_vec(const std::vector<double>& v, int dim, const std::string& what) {
    if (static_cast<int>(v.size()) != dim)
        throw CLI::ValidationError(what + ": expected " + std::to_string(dim) +
                                   " coordinate(s), got " + std::to_string(v.size()));
    ns::Vec out{0, 0};
    for (int k = 0; k < dim; ++k) out[k] = v[static_cast<size_t>(k)];
    return out;
}

// Writes the payload, then a <path>.meta.json sidecar carrying the timestamp
// so the payload itself stays byte-identical across runs.
void write_output(const std::string& path, const std::string& payload,
                  const std::string& command) {
    {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        f << payload;
    }
    ordered_json meta;
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    meta["written_at"] = buf;
    meta["tool"] = "subdiff";
    meta["command"] = command;
    std::ofstream m(path + ".meta.json", std::ios::binary);
    m << meta.dump(2) << "\n";
}

void emit(const std::string& out_path, const std::string& payload,
          const std::string& command) {
    if (out_path.empty())
        std::cout << payload;
    else
        write_output(out_path, payload, command);
}

struct FieldFlags {
    std::string name;
    std::vector<double> params;
    void attach(CLI::App* cmd) {
        cmd->add_option("--field", name, "registry field name")->required();
        cmd->add_option("--params", params, "field parameters")->delimiter(',');
    }
    ns::ScalarField get() const { return ns::registry_get(name, params); }
};

struct ScanFlags {
    double pitch = 0.05, delta = 0.05;
    int probes = 64, grid_res = 257;
    std::uint64_t seed = 0;
    std::string profile;
    CLI::Option *o_pitch = nullptr, *o_delta = nullptr, *o_probes = nullptr,
                *o_grid = nullptr;
    void attach(CLI::App* cmd) {
        o_pitch = cmd->add_option("--pitch", pitch, "covector grid pitch");
        o_delta = cmd->add_option("--delta", delta, "probe radius in (x, xi)");
        o_probes = cmd->add_option("--probes", probes, "probe budget per xi");
        o_grid = cmd->add_option("--grid-res", grid_res, "vertex grid resolution");
        cmd->add_option("--seed", seed, "probe sequence seed");
        cmd->add_option("--profile", profile, "desk|fine settings bundle")
            ->check(CLI::IsMember({"desk", "fine"}));
    }
    // `fine` halves pitch/delta and refines the grid, without overriding
    // anything given explicitly.
    void apply_profile() {
        if (profile != "fine") return;
        if (!o_pitch->count()) pitch = 0.025;
        if (!o_delta->count()) delta = 0.025;
        if (!o_probes->count()) probes = 96;
        if (!o_grid->count()) grid_res = 385;
    }
    ns::ScanParams scan() const {
        ns::ScanParams p;
        p.delta = delta;
        p.probes = probes;
        p.seed = seed;
        return p;
    }
    ordered_json json() const {
        ordered_json j;
        j["pitch"] = pitch;
        j["delta"] = delta;
        j["probes"] = probes;
        j["grid_res"] = grid_res;
        j["seed"] = seed;
        return j;
    }
};

int run(int argc, char** argv) {
    CLI::App app{"nonsmooth subdifferential toolbox"};
    app.require_subcommand(1);

    // ---- registry ------------------------------------------------------------
    auto* c_registry = app.add_subcommand("registry", "list the field corpus");
    std::string reg_out;
    c_registry->add_option("--out", reg_out, "output path (default stdout)");

    // ---- subdiff ---------------------------------------------------------------
    auto* c_subdiff =
        app.add_subcommand("subdiff", "homological subdifferential at a point");
    FieldFlags sd_field;
    sd_field.attach(c_subdiff);
    std::vector<double> sd_at;
    c_subdiff->add_option("--at", sd_at, "base point")->delimiter(',')->required();
    double sd_k = -1.0;
    c_subdiff->add_option("--k", sd_k, "covector grid half-width (default: Lipschitz bound)");
    ScanFlags sd_scan;
    sd_scan.attach(c_subdiff);
    std::string sd_out, sd_svg;
    c_subdiff->add_option("--out", sd_out, "JSON output path (default stdout)");
    c_subdiff->add_option("--svg", sd_svg, "SVG plot path");

    // ---- clarke ----------------------------------------------------------------
    auto* c_clarke = app.add_subcommand("clarke", "Clarke subdifferential via gradient sampling");
    FieldFlags ck_field;
    ck_field.attach(c_clarke);
    std::vector<double> ck_at;
    c_clarke->add_option("--at", ck_at, "base point")->delimiter(',')->required();
    double ck_radius = 0.1, ck_tube = 1e-6;
    int ck_samples = 4096;
    std::uint64_t ck_seed = 0;
    std::string ck_profile;
    auto* o_samples = c_clarke->add_option("--samples", ck_samples, "sample budget");
    c_clarke->add_option("--radius", ck_radius, "sampling ball radius");
    c_clarke->add_option("--tube", ck_tube, "singular locus exclusion tube");
    c_clarke->add_option("--seed", ck_seed, "sample sequence seed");
    c_clarke->add_option("--profile", ck_profile, "desk|fine settings bundle")
        ->check(CLI::IsMember({"desk", "fine"}));
    std::string ck_out, ck_svg;
    c_clarke->add_option("--out", ck_out, "JSON output path (default stdout)");
    c_clarke->add_option("--svg", ck_svg, "SVG plot path");

    // ---- singular --------------------------------------------------------------
    auto* c_sing = app.add_subcommand("singular", "singular-point test at a point");
    FieldFlags sg_field;
    sg_field.attach(c_sing);
    std::vector<double> sg_at;
    c_sing->add_option("--at", sg_at, "base point")->delimiter(',')->required();
    int sg_grid_res = 257;
    c_sing->add_option("--grid-res", sg_grid_res, "vertex grid resolution");
    std::string sg_out, sg_dump;
    c_sing->add_option("--out", sg_out, "JSON output path (default stdout)");
    c_sing->add_option("--dump-complex", sg_dump,
                       "debug: write the sublevel pair complexes at the finest scale");

    // ---- legendre --------------------------------------------------------------
    auto* c_leg = app.add_subcommand("legendre", "extended Legendre germ table and front");
    FieldFlags lg_field;
    lg_field.attach(c_leg);
    std::vector<double> lg_y{-2, 2, 65}, lg_t{-2, 2, 65}, lg_box;
    c_leg->add_option("--y", lg_y, "covector axis: lo,hi,res")->delimiter(',')->expected(3);
    c_leg->add_option("--t", lg_t, "level axis: lo,hi,res")->delimiter(',')->expected(3);
    c_leg->add_option("--box", lg_box, "truncation box: lo,hi per axis")->delimiter(',');
    int lg_xres = 513;
    c_leg->add_option("--x-res", lg_xres, "germ grid resolution");
    std::vector<double> lg_at_y;
    double lg_at_t = 0.0;
    auto* o_at_y = c_leg->add_option("--at-y", lg_at_y, "single-germ mode: covector")
                       ->delimiter(',');
    c_leg->add_option("--at-t", lg_at_t, "single-germ mode: level")->needs(o_at_y);
    std::string lg_out, lg_front, lg_svg;
    c_leg->add_option("--out", lg_out, "table JSON path (default stdout)");
    c_leg->add_option("--front", lg_front, "front JSON path");
    c_leg->add_option("--svg", lg_svg, "SVG heatmap path");

    // ---- calculus --------------------------------------------------------------
    auto* c_calc = app.add_subcommand("calculus", "calculus rule check suite");
    std::string calc_suite = "default";
    c_calc->add_option("--suite", calc_suite, "suite name")
        ->check(CLI::IsMember({"default"}));
    double calc_pitch = 0.05;
    c_calc->add_option("--pitch", calc_pitch, "scan pitch for all checks");
    std::string calc_out;
    c_calc->add_option("--out", calc_out, "JSON output path (default stdout)");

    // ---- limit -----------------------------------------------------------------
    auto* c_limit = app.add_subcommand(
        "limit", "C^0 limit behavior of the smoothing sequence");
    std::vector<double> lm_xi, lm_at{0, 0};
    c_limit->add_option("--xi", lm_xi, "covector to test")->delimiter(',')->required();
    c_limit->add_option("--at", lm_at, "base point")->delimiter(',');
    int lm_nmax = 16;
    double lm_rho = 0.2;
    c_limit->add_option("--n-max", lm_nmax, "last sequence index");
    c_limit->add_option("--rho", lm_rho, "base point ball radius");
    std::string lm_out;
    c_limit->add_option("--out", lm_out, "JSON output path (default stdout)");

    // ---- plot ------------------------------------------------------------------
    auto* c_plot = app.add_subcommand("plot", "render an emitted JSON artifact as SVG");
    std::string pl_in, pl_out, pl_title;
    c_plot->add_option("--in", pl_in, "input JSON (covector set or germ table)")
        ->required();
    c_plot->add_option("--out", pl_out, "SVG output path")->required();
    c_plot->add_option("--title", pl_title, "plot title");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*c_registry) {
        emit(reg_out, ns::json_registry_manifest().dump(2) + "\n", "registry");
        return 0;
    }

    if (*c_subdiff) {
        sd_scan.apply_profile();
        ns::ScalarField f = sd_field.get();
        ns::Vec x = to_vec(sd_at, f.dim(), "--at");
        double k = sd_k;
        if (k < 0.0) {
            if (!f.lipschitz_const())
                throw CLI::ValidationError(
                    "--k is required for fields without a Lipschitz constant");
            k = *f.lipschitz_const();
        }
        ns::GridSpec xi = ns::default_xi_grid(k, sd_scan.pitch, f.dim());
        ns::CovectorSet s = ns::homological_subdifferential(f, x, xi, sd_scan.scan(),
                                                            sd_scan.grid_res);
        ordered_json params = sd_scan.json();
        params["field"] = sd_field.name;
        params["k"] = k;
        emit(sd_out, ns::json_covector_set(s, params).dump(2) + "\n", "subdiff");
        if (!sd_svg.empty())
            write_output(sd_svg, ns::svg_covector_set(s, "homological subdifferential: " +
                                                             sd_field.name),
                         "subdiff");
        return 0;
    }

    if (*c_clarke) {
        if (ck_profile == "fine" && !o_samples->count()) ck_samples = 8192;
        ns::ScalarField f = ck_field.get();
        ns::Vec x = to_vec(ck_at, f.dim(), "--at");
        ns::CovectorSet s =
            ns::clarke_subdifferential(f, x, ck_radius, ck_samples, ck_tube, ck_seed);
        ordered_json params;
        params["field"] = ck_field.name;
        params["radius"] = ck_radius;
        params["samples"] = ck_samples;
        params["tube"] = ck_tube;
        params["seed"] = ck_seed;
        emit(ck_out, ns::json_covector_set(s, params).dump(2) + "\n", "clarke");
        if (!ck_svg.empty())
            write_output(ck_svg,
                         ns::svg_covector_set(s, "clarke subdifferential: " + ck_field.name),
                         "clarke");
        return 0;
    }

    if (*c_sing) {
        ns::ScalarField f = sg_field.get();
        ns::Vec x = to_vec(sg_at, f.dim(), "--at");
        ns::BaseGrid base = ns::make_base_grid(f, sg_grid_res);
        ns::ScanParams prm;
        ns::SingularityVerdict v = ns::is_singular_point(f, x, prm, base);
        ordered_json j;
        j["field"] = sg_field.name;
        j["x"] = ns::json_vec(x, f.dim());
        j["singular"] = v.singular;
        ordered_json ev = ordered_json::array();
        for (const auto& e : v.evidence) {
            ordered_json je;
            je["r"] = e.r;
            je["eps"] = e.eps;
            int nd = f.dim() + 1;
            je["betti_X"] = std::vector<int>(e.ranks.betti_X.begin(),
                                             e.ranks.betti_X.begin() + nd);
            je["betti_Y"] = std::vector<int>(e.ranks.betti_Y.begin(),
                                             e.ranks.betti_Y.begin() + nd);
            je["induced_rank"] = std::vector<int>(e.ranks.induced_rank.begin(),
                                                  e.ranks.induced_rank.begin() + nd);
            ev.push_back(je);
        }
        j["evidence"] = ev;
        emit(sg_out, j.dump(2) + "\n", "singular");
        if (!sg_dump.empty()) {
            double a = f.eval(x);
            double slope = f.lipschitz_const().value_or(1.0);
            double r = prm.scale_factors.back() * base.grid.box.diameter();
            double eps = std::max(r * r, prm.eps_cells * base.grid.max_spacing() * slope);
            ns::Box window = ns::ball_box(x, r, f.dim());
            ordered_json d;
            d["X"] = ns::json_complex(
                ns::build_sublevel_complex(base.values, base.grid, a, window));
            d["Y"] = ns::json_complex(
                ns::build_sublevel_complex(base.values, base.grid, a + eps, window));
            write_output(sg_dump, d.dump(2) + "\n", "singular");
        }
        return 0;
    }

    if (*c_leg) {
        ns::ScalarField f = lg_field.get();
        const int d = f.dim();
        ns::Box box;
        if (lg_box.empty()) {  // default: domain shrunk by 5%
            box = f.domain();
            for (int k = 0; k < d; ++k) {
                double m = 0.05 * (box.hi[k] - box.lo[k]);
                box.lo[k] += m;
                box.hi[k] -= m;
            }
        } else {
            if (static_cast<int>(lg_box.size()) != 2 * d)
                throw CLI::ValidationError("--box: expected " + std::to_string(2 * d) +
                                           " numbers");
            box.dim = d;
            for (int k = 0; k < d; ++k) {
                box.lo[k] = lg_box[static_cast<size_t>(2 * k)];
                box.hi[k] = lg_box[static_cast<size_t>(2 * k + 1)];
            }
        }
        ns::GridSpec grid;
        grid.box = f.domain();
        grid.res = {lg_xres, d == 2 ? lg_xres : 1};

        if (o_at_y->count()) {  // single germ
            ns::Vec y = to_vec(lg_at_y, d, "--at-y");
            std::vector<int> g = ns::extended_legendre_germ(f, y, lg_at_t, box, grid);
            ordered_json j;
            j["field"] = lg_field.name;
            j["y"] = ns::json_vec(y, d);
            j["t"] = lg_at_t;
            j["betti"] = g;
            emit(lg_out, j.dump(2) + "\n", "legendre");
            return 0;
        }

        auto axis = [](const std::vector<double>& a) {
            return ns::grid1(a[0], a[1], static_cast<int>(a[2]));
        };
        ns::GridSpec yg;
        if (d == 1) {
            yg = axis(lg_y);
        } else {
            yg.box = ns::box2(lg_y[0], lg_y[0], lg_y[1], lg_y[1]);
            yg.res = {static_cast<int>(lg_y[2]), static_cast<int>(lg_y[2])};
        }
        ns::GermTable table = ns::germ_table(f, yg, axis(lg_t), box, grid);
        ns::Front front = ns::extract_front(table);
        emit(lg_out, ns::json_germ_table(table).dump(2) + "\n", "legendre");
        if (!lg_front.empty())
            write_output(lg_front, ns::json_front(front).dump(2) + "\n", "legendre");
        if (!lg_svg.empty())
            write_output(lg_svg,
                         ns::svg_germ_table(table, &front, "germ table: " + lg_field.name),
                         "legendre");
        return 0;
    }

    if (*c_calc) {
        ns::CalcParams prm;
        prm.pitch = calc_pitch;
        ordered_json arr = ordered_json::array();
        bool all_hold = true;
        for (const auto& c : ns::default_calculus_suite()) {
            ns::InclusionReport rep = c.run(prm);
            all_hold = all_hold && rep.holds;
            ordered_json params;
            params["pitch"] = prm.pitch;
            arr.push_back(ns::json_inclusion_report(c.check, c.fields, c.x, c.dim,
                                                    rep, params));
        }
        emit(calc_out, arr.dump(2) + "\n", "calculus");
        if (!all_hold) throw CliCheckFailure{};
        return 0;
    }

    if (*c_limit) {
        ns::FieldSequence seq = ns::smoothing_field_sequence();
        ns::Vec x = to_vec(lm_at, 2, "--at");
        ns::Vec xi = to_vec(lm_xi, 2, "--xi");
        ns::LimitParams lp;
        lp.rho = lm_rho;
        ns::LimitReport rep = ns::check_limit_behavior(seq, x, xi, lm_nmax, lp);
        ordered_json j;
        j["x"] = ns::json_vec(x, 2);
        j["xi"] = ns::json_vec(xi, 2);
        j["n_max"] = lm_nmax;
        j["rho"] = lm_rho;
        j["indices"] = rep.indices;
        j["dist_per_n"] = rep.dist_per_n;
        j["excluded"] = rep.excluded;
        j["margin"] = rep.margin;
        j["k"] = rep.k;
        j["covered"] = rep.covered;
        emit(lm_out, j.dump(2) + "\n", "limit");
        return 0;
    }

    if (*c_plot) {
        std::ifstream in(pl_in);
        if (!in) throw std::runtime_error("cannot open input file: " + pl_in);
        ordered_json j = ordered_json::parse(in);
        std::string svg;
        if (j.contains("points")) {
            ns::CovectorSet s;
            auto xv = j["x"].get<std::vector<double>>();
            s.dim = static_cast<int>(xv.size());
            s.x = to_vec(xv, s.dim, "x");
            for (const auto& p : j["points"]) {
                auto pv = p.get<std::vector<double>>();
                s.points.push_back(to_vec(pv, s.dim, "point"));
            }
            s.pitch = j["pitch"].get<double>();
            std::string prov = j["provenance"].get<std::string>();
            s.provenance = prov == "clarke" ? ns::Provenance::clarke
                           : prov == "hull" ? ns::Provenance::hull
                                            : ns::Provenance::homological;
            svg = ns::svg_covector_set(s, pl_title.empty() ? prov + " set" : pl_title);
        } else if (j.contains("cells")) {
            ns::GermTable t;
            auto load_grid = [](const ordered_json& g) {
                ns::GridSpec spec;
                auto lo = g["lo"].get<std::vector<double>>();
                auto hi = g["hi"].get<std::vector<double>>();
                auto res = g["res"].get<std::vector<int>>();
                spec.box.dim = static_cast<int>(lo.size());
                for (size_t k = 0; k < lo.size(); ++k) {
                    spec.box.lo[k] = lo[k];
                    spec.box.hi[k] = hi[k];
                    spec.res[k] = res[k];
                }
                return spec;
            };
            t.y_grid = load_grid(j["y_grid"]);
            t.t_grid = load_grid(j["t_grid"]);
            t.degrees = j["degrees"].get<int>();
            for (const auto& c : j["cells"])
                for (const auto& v : c) t.betti.push_back(v.get<int>());
            for (const auto& fl : j["flags"]) t.flags.push_back(fl.get<uint8_t>());
            ns::Front front = ns::extract_front(t);
            svg = ns::svg_germ_table(t, &front,
                                     pl_title.empty() ? "germ table" : pl_title);
        } else {
            throw std::runtime_error("plot: unrecognized JSON artifact in " + pl_in);
        }
        write_output(pl_out, svg, "plot");
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CliCheckFailure&) {
        std::cerr << "one or more checks failed\n";
        return 1;
    } catch (const ns::UnstableVerdictError& e) {
        std::cerr << "unstable verdict: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
