#pragma once

#include "lattice_points.hpp"
#include "tropical.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace arrvar {

struct EllData {
    Int ell;    // sum of the weights minus k times the block exponent product
    size_t k;   // relations vanishing identically on V(T_{i j_i}; i in I)
};

// A relation dies on the stratum iff each of its monomials contains one of
// the chosen variables; block monomials are supported on whole blocks, so
// that happens exactly when the relation support lies inside I.
inline EllData ell_sigma(const VarietyData& v, const ElementaryCone& e) {
    const CoxRing& ring = v.gr.ring;
    EllData d{Int(0), 0};
    for (const Int& w : e.weights) d.ell += w;
    Int prod = e.weights[0] * ring.exp.l[e.blocks[0]][e.js[0]];
    for (size_t t = 0; t < ring.nrelations(); ++t) {
        auto supp = ring.relation_support(t);
        if (std::includes(e.blocks.begin(), e.blocks.end(), supp.begin(), supp.end())) ++d.k;
    }
    d.ell -= Int(d.k) * prod;
    return d;
}

enum class RaySource { original, elementary };

struct RayDiscrepancy {
    IVec ray;  // primitive generator
    RaySource source = RaySource::original;
    Int ell = 0;      // ell_sigma, elementary source only
    Int c = 1;        // gcd of the entries of v_sigma
    Rat a = Rat(0);   // discrepancy; 0 on original rays
    QVec vertex;      // point where the ray leaves the complex, when a > -1
    bool bounded = true;
};

struct ACCell {
    Cone cone;  // maximal cell of the refined fan
    QVec u;     // chart functional with <u, ray> = -(a+1) on every ray
    bool bounded = true;
};

struct ACComplex {
    Fan refined;
    std::vector<RayDiscrepancy> rays;
    std::vector<ACCell> cells;
    std::vector<QVec> vertices;
    bool bounded = true;
};

// Anticanonical complex over the tropical refinement of the fan: one cell
// per maximal refined cone, truncated at the supporting functional.
inline ACComplex anticanonical_complex(const VarietyData& v) {
    TropicalData trop = trop_quasifan(v.gr.ring.arr, v.gr.s(), true);
    ACComplex ac;

    std::map<IVec, size_t> index_of;
    for (const IVec& col : v.columns) {
        if (index_of.count(col)) continue;
        RayDiscrepancy rd;
        rd.ray = col;
        rd.vertex = to_rat(col);
        index_of.emplace(col, ac.rays.size());
        ac.rays.push_back(std::move(rd));
    }
    for (const ElementaryCone& e : elementary_cones(v, trop)) {
        EllData d = ell_sigma(v, e);
        RayDiscrepancy rd;
        rd.ray = e.rho;
        rd.source = RaySource::elementary;
        rd.ell = d.ell;
        rd.c = e.c_sigma;
        rd.a = Rat(Int(d.ell - e.c_sigma)) / Rat(e.c_sigma);
        rd.bounded = d.ell > 0;
        if (rd.bounded) {
            rd.vertex = QVec(e.v_sigma.size());
            for (size_t i = 0; i < e.v_sigma.size(); ++i)
                rd.vertex[i] = Rat(e.v_sigma[i]) / Rat(d.ell);
        }
        auto [it, fresh] = index_of.emplace(e.rho, ac.rays.size());
        if (fresh) {
            ac.rays.push_back(std::move(rd));
        } else {
            const RayDiscrepancy& old = ac.rays[it->second];
            if (old.source == RaySource::original || old.a != rd.a)
                throw error("inconsistent discrepancy data on a refinement ray");
        }
    }

    ac.refined = refine_fan(v.fan, trop_fan(trop));
    for (const Cone& cell : ac.refined.max_cones) {
        if (cell.is_zero()) continue;
        QMat m(cell.rays.size(), cell.ambient);
        QVec b(cell.rays.size());
        for (size_t i = 0; i < cell.rays.size(); ++i) {
            auto it = index_of.find(cell.rays[i]);
            if (it == index_of.end()) throw error("refinement ray without discrepancy data");
            for (size_t j = 0; j < cell.ambient; ++j) m.a[i][j] = Rat(cell.rays[i][j]);
            b[i] = Rat(-1) - ac.rays[it->second].a;
        }
        auto u = solve(m, b);
        if (!u)
            throw error("not Q-Gorenstein on chart " + std::to_string(ac.cells.size()));
        ACCell c{cell, std::move(*u), true};
        for (const IVec& r : cell.rays)
            if (dot(r, c.u) >= 0) c.bounded = false;
        ac.bounded = ac.bounded && c.bounded;
        ac.cells.push_back(std::move(c));
    }

    for (const RayDiscrepancy& rd : ac.rays)
        if (rd.bounded) ac.vertices.push_back(rd.vertex);
    return ac;
}

enum class Singularity { terminal, canonical, log_terminal, not_log_terminal };

inline const char* singularity_name(Singularity s) {
    switch (s) {
        case Singularity::terminal: return "terminal";
        case Singularity::canonical: return "canonical";
        case Singularity::log_terminal: return "log terminal";
        default: return "not log terminal";
    }
}

struct SingularityVerdict {
    Singularity type = Singularity::terminal;
    // Interior lattice points for a log-terminal verdict; boundary points
    // outside the ray generators for a canonical one.
    std::vector<IVec> lattice_witnesses;
    std::vector<IVec> unbounded_rays;
};

// Ladder of §6-style criteria on the lattice points of the complex. The
// functional value of a point agrees across all cells containing it, since
// neighbouring charts match on shared rays.
inline SingularityVerdict singularity_type(const VarietyData& v) {
    ACComplex ac = anticanonical_complex(v);
    SingularityVerdict verdict;
    if (!ac.bounded) {
        verdict.type = Singularity::not_log_terminal;
        for (const RayDiscrepancy& rd : ac.rays)
            if (!rd.bounded) verdict.unbounded_rays.push_back(rd.ray);
        return verdict;
    }
    std::set<IVec> columns(v.columns.begin(), v.columns.end());
    std::set<IVec> interior, extra_boundary;
    for (const ACCell& cell : ac.cells) {
        for (const IVec& p : lattice_points({cell.cone, cell.u})) {
            if (is_zero(p)) continue;
            Rat val(0);
            for (size_t i = 0; i < p.size(); ++i) val += cell.u[i] * Rat(p[i]);
            if (val > -1) {
                interior.insert(p);
            } else if (!columns.count(p)) {
                extra_boundary.insert(p);
            }
        }
    }
    if (!interior.empty()) {
        verdict.type = Singularity::log_terminal;
        verdict.lattice_witnesses.assign(interior.begin(), interior.end());
    } else if (!extra_boundary.empty()) {
        verdict.type = Singularity::canonical;
        verdict.lattice_witnesses.assign(extra_boundary.begin(), extra_boundary.end());
    } else {
        verdict.type = Singularity::terminal;
    }
    return verdict;
}

struct ChartGorenstein {
    size_t chart = 0;  // index into the fan's maximal cones
    bool ok = true;    // the canonical class is Q-Cartier on the chart
    Int index = 1;     // least k with <u, ray> = -k integrally solvable
    QVec u;            // a rational solution when ok
};

struct GorensteinReport {
    bool q_gorenstein = true;
    Int index = 1;  // lcm over charts; 0 when some chart fails
    std::vector<ChartGorenstein> charts;
};

namespace detail {

// Least positive k such that <u, ray> = -k has an integral solution u, via
// the Smith form of the ray matrix; nullopt when already the rational system
// is inconsistent.
inline std::optional<Int> chart_index(const IMat& rays) {
    SmithForm s = smith(rays);
    IVec ub(rays.rows, 0);
    for (size_t i = 0; i < rays.rows; ++i)
        for (size_t j = 0; j < rays.rows; ++j) ub[i] += s.u.a[i][j];
    for (size_t i = s.rank; i < rays.rows; ++i)
        if (ub[i] != 0) return std::nullopt;
    Int k = 1;
    for (size_t i = 0; i < s.rank; ++i) {
        Int g = gcd(s.diag[i], ub[i]);
        Int need = s.diag[i] / g;
        k = k / gcd(k, need) * need;
    }
    return k;
}

}  // namespace detail

// Chart-by-chart Cartier test of the canonical class on the original fan.
inline GorensteinReport gorenstein_check(const VarietyData& v) {
    GorensteinReport rep;
    for (size_t ci = 0; ci < v.fan.max_cones.size(); ++ci) {
        const Cone& sigma = v.fan.max_cones[ci];
        ChartGorenstein chart;
        chart.chart = ci;
        IMat rays(sigma.rays.size(), sigma.ambient);
        for (size_t i = 0; i < sigma.rays.size(); ++i) rays.a[i] = sigma.rays[i];
        auto k = detail::chart_index(rays);
        chart.ok = k.has_value();
        if (chart.ok) {
            chart.index = *k;
            QVec b(sigma.rays.size(), Rat(-1));
            chart.u = *solve(rays, b);
            rep.index = rep.index / gcd(rep.index, chart.index) * chart.index;
        } else {
            chart.index = 0;
            rep.q_gorenstein = false;
        }
        rep.charts.push_back(std::move(chart));
    }
    if (!rep.q_gorenstein) rep.index = 0;
    return rep;
}

}  // namespace arrvar
