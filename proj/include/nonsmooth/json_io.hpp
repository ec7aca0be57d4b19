#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nonsmooth/calculus.hpp"
#include "nonsmooth/covector.hpp"
#include "nonsmooth/legendre.hpp"
#include "nonsmooth/registry.hpp"
#include "nonsmooth/subdiff.hpp"

namespace nonsmooth {

using ordered_json = nlohmann::ordered_json;

inline ordered_json json_vec(const Vec& v, int dim) {
    ordered_json a = ordered_json::array();
    for (int k = 0; k < dim; ++k) a.push_back(v[k]);
    return a;
}

inline ordered_json json_covector_set(const CovectorSet& s,
                                      const ordered_json& params = ordered_json::object()) {
    ordered_json j;
    j["x"] = json_vec(s.x, s.dim);
    ordered_json pts = ordered_json::array();
    for (const auto& p : s.points) pts.push_back(json_vec(p, s.dim));
    j["points"] = pts;
    j["pitch"] = s.pitch;
    j["provenance"] = provenance_name(s.provenance);
    j["params"] = params;
    return j;
}

inline ordered_json json_grid(const GridSpec& g) {
    ordered_json j;
    ordered_json lo = ordered_json::array(), hi = ordered_json::array(),
                 res = ordered_json::array();
    for (int k = 0; k < g.dim(); ++k) {
        lo.push_back(g.box.lo[k]);
        hi.push_back(g.box.hi[k]);
        res.push_back(g.res[k]);
    }
    j["lo"] = lo;
    j["hi"] = hi;
    j["res"] = res;
    return j;
}

inline ordered_json json_germ_table(const GermTable& t) {
    ordered_json j;
    j["y_grid"] = json_grid(t.y_grid);
    j["t_grid"] = json_grid(t.t_grid);
    ordered_json box;
    box["lo"] = json_vec(t.box.lo, t.box.dim);
    box["hi"] = json_vec(t.box.hi, t.box.dim);
    j["box"] = box;
    j["degrees"] = t.degrees;
    ordered_json cells = ordered_json::array();
    ordered_json flags = ordered_json::array();
    for (int ti = 0; ti < t.nt(); ++ti)
        for (int yi = 0; yi < t.ny(); ++yi) {
            ordered_json c = ordered_json::array();
            for (int k = 0; k < t.degrees; ++k) c.push_back(t.cell(yi, ti)[k]);
            cells.push_back(c);
            flags.push_back(t.flag(yi, ti));
        }
    j["cells"] = cells;
    j["flags"] = flags;
    return j;
}

inline ordered_json json_front(const Front& f) {
    ordered_json edges = ordered_json::array();
    for (const auto& e : f.edges) {
        ordered_json je;
        je["y"] = e.y;
        je["t"] = e.t;
        je["axis"] = e.axis;
        je["betti_lo"] = e.betti_lo;
        je["betti_hi"] = e.betti_hi;
        je["box_artifact"] = e.box_artifact;
        edges.push_back(je);
    }
    ordered_json j;
    j["edges"] = edges;
    return j;
}

inline ordered_json json_registry_manifest() {
    ordered_json arr = ordered_json::array();
    for (const auto& e : registry_manifest()) {
        ordered_json j;
        j["name"] = e.name;
        j["dim"] = e.dim;
        j["arity"] = e.arity;
        j["params"] = e.params_desc;
        if (e.lipschitz)
            j["lipschitz"] = *e.lipschitz;
        else
            j["lipschitz"] = nullptr;
        j["locus"] = e.locus_desc;
        arr.push_back(j);
    }
    return arr;
}

inline ordered_json json_inclusion_report(const std::string& check,
                                          const std::string& fields, const Vec& x,
                                          int dim, const InclusionReport& rep,
                                          const ordered_json& params = ordered_json::object()) {
    ordered_json j;
    j["check"] = check;
    j["fields"] = fields;
    j["point"] = json_vec(x, dim);
    j["params"] = params;
    j["holds"] = rep.holds;
    j["worst_violation"] = rep.worst_violation;
    ordered_json w = ordered_json::array();
    for (const auto& v : rep.witnesses) w.push_back(json_vec(v, dim));
    j["witnesses"] = w;
    return j;
}

inline ordered_json json_complex(const CubicalComplex& cx) {
    ordered_json cells = ordered_json::array();
    for (int cj = 0; cj < cx.nc[1]; ++cj)
        for (int ci = 0; ci < cx.nc[0]; ++ci)
            if (cx.has_cell(ci, cj)) {
                ordered_json c = ordered_json::array();
                c.push_back(ci);
                if (cx.dim() == 2) c.push_back(cj);
                cells.push_back(c);
            }
    ordered_json j;
    j["interleaved_cells"] = cells;
    j["cells_by_dim"] = {cx.cells_by_dim[0], cx.cells_by_dim[1], cx.cells_by_dim[2]};
    return j;
}

}  // namespace nonsmooth
