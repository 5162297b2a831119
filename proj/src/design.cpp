#include "iz/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

namespace iz {

namespace {

// unit tables for an explicit index assignment, bypassing designation lookups
void unit_tables_for(const BeamSystem& sys, const SectionCatalog& cat, const Material& mat,
                     const std::vector<int>& sec, SystemTables& t) {
    BeamSystem assigned = sys;
    assigned.sections.resize(sec.size());
    for (std::size_t i = 0; i < sec.size(); ++i)
        assigned.sections[i] = cat.at(sec[i]).designation;
    auto tables = response_tables(assigned, cat, mat);
    t.m = sys.member_count();
    t.moment_unit.resize(t.m);
    t.shear_unit.resize(t.m);
    for (int d = 0; d < t.m; ++d) {
        t.moment_unit[d] = tables[d].moment_unit;
        t.shear_unit[d] = tables[d].shear_unit;
    }
}

Eigen::MatrixXd factored_matrix(const BeamSystem& sys, const LoadCombination& combo,
                                const ArrangementSet& arrangements,
                                const std::vector<double>& self_weight) {
    const int m = sys.member_count();
    const int p = static_cast<int>(arrangements.size());
    Eigen::MatrixXd W(p, m);
    for (int j = 0; j < p; ++j) {
        const auto& act = arrangements.arrangements[j].activation;
        if (static_cast<int>(act.size()) != m)
            throw ValidationError("arrangement length does not match member count");
        for (int i = 0; i < m; ++i)
            W(j, i) = combo.gamma_permanent * (sys.permanent_udl[i] + self_weight[i]) +
                      combo.gamma_variable * sys.variable_udl[i] * (act[i] ? 1.0 : 0.0);
    }
    return W;
}

// absolute (M, V) demands of member d over all stations and arrangements
struct DemandCloud {
    Eigen::MatrixXd M, V;  // 11 x p, absolute values
    double m_max = 0.0, v_max = 0.0;
};

DemandCloud demand_cloud(const SystemTables& t, int d) {
    DemandCloud c;
    c.M = (t.moment_unit[d] * t.factored.transpose()).cwiseAbs();
    c.V = (t.shear_unit[d] * t.factored.transpose()).cwiseAbs();
    c.m_max = c.M.maxCoeff();
    c.v_max = c.V.maxCoeff();
    return c;
}

// Exact feasibility with cheap bounds. The full point scan only runs when the
// candidate lands in the band where the bending-shear interaction decides.
bool section_feasible(const DemandCloud& c, const Resistances& r) {
    if (c.v_max > r.shear_resistance) return false;
    if (c.m_max > r.moment_resistance) return false;
    if (c.v_max <= 0.5 * r.shear_resistance) return true;  // no interaction anywhere
    const double* M = c.M.data();
    const double* V = c.V.data();
    for (Eigen::Index i = 0; i < c.M.size(); ++i)
        if (utilisation(M[i], V[i], r) > 1.0) return false;
    return true;
}

}  // namespace

Resistances resistances(const SteelSection& sec, const Material& mat, double gamma_m0) {
    if (gamma_m0 <= 0) throw ValidationError("gamma_M0 must be positive");
    Resistances r;
    r.moment_resistance = sec.plastic_modulus_major * mat.yield_strength / gamma_m0 / 1e3;
    r.shear_resistance =
        sec.shear_area_major * mat.yield_strength / (std::sqrt(3.0) * gamma_m0) / 1e3;
    return r;
}

double utilisation(double M, double V, const Resistances& r) {
    const double aM = std::abs(M);
    const double aV = std::abs(V);
    const double uv = aV / r.shear_resistance;
    double mrd = r.moment_resistance;
    if (uv > 0.5) {
        const double rho = (2.0 * uv - 1.0) * (2.0 * uv - 1.0);
        mrd *= 1.0 - rho;
    }
    // mrd hits zero at uv = 1, where the shear ratio already reads 1
    const double um = aM > 0.0 ? (mrd > 0.0 ? aM / mrd
                                            : std::numeric_limits<double>::infinity())
                               : 0.0;
    return std::max(um, uv);
}

SystemTables build_tables(const BeamSystem& sys, const SectionCatalog& cat,
                          const Material& mat, const LoadCombination& combo,
                          const ArrangementSet& arrangements) {
    auto idx = resolve_sections(sys, cat);
    SystemTables t;
    unit_tables_for(sys, cat, mat, idx, t);
    t.self_weight.resize(idx.size());
    t.resist.resize(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        t.self_weight[i] = cat.at(idx[i]).self_weight();
        t.resist[i] = resistances(cat.at(idx[i]), mat);
    }
    t.factored = factored_matrix(sys, combo, arrangements, t.self_weight);
    return t;
}

GoverningCase governing_case(const SystemTables& t, int d) {
    Eigen::MatrixXd M = t.moment_unit[d] * t.factored.transpose();  // 11 x p
    Eigen::MatrixXd V = t.shear_unit[d] * t.factored.transpose();
    GoverningCase g;
    g.u = -1.0;
    for (int j = 0; j < M.cols(); ++j)
        for (int s = 0; s < M.rows(); ++s) {
            const double u = utilisation(M(s, j), V(s, j), t.resist[d]);
            if (u > g.u) {
                g.u = u;
                g.arrangement = j;
                g.station = s;
            }
        }
    return g;
}

DesignResult design_system(const BeamSystem& sys, const SectionCatalog& cat,
                           const Material& mat, const LoadCombination& combo,
                           const ArrangementSet& arrangements, SelectionPolicy policy) {
    if (arrangements.size() == 0) throw ValidationError("design needs arrangements");
    if (cat.size() == 0) throw ValidationError("design needs a catalog");
    if (auto v = validate_system(sys, cat); !v.empty())
        throw ValidationError("system invalid: " + v.front());

    const int m = sys.member_count();
    const int nc = static_cast<int>(cat.size());
    std::vector<int> sec(m, 0);
    std::vector<int> prev;

    std::vector<Resistances> rcat(nc);
    for (int c = 0; c < nc; ++c) rcat[c] = resistances(cat.at(c), mat);

    SystemTables t;
    int it = 0;
    const int cap = 20;
    for (; it < cap; ++it) {
        unit_tables_for(sys, cat, mat, sec, t);
        t.self_weight.resize(m);
        for (int i = 0; i < m; ++i) t.self_weight[i] = cat.at(sec[i]).self_weight();
        t.factored = factored_matrix(sys, combo, arrangements, t.self_weight);

        std::vector<int> next(m);
        for (int d = 0; d < m; ++d) {
            auto cloud = demand_cloud(t, d);
            int pick = -1;
            for (int c = 0; c < nc; ++c)
                if (section_feasible(cloud, rcat[c])) {
                    pick = c;
                    break;
                }
            if (pick < 0) {
                if (policy == SelectionPolicy::strict)
                    throw InfeasibleDesign("no catalog section works for member " +
                                           std::to_string(d));
                pick = nc - 1;
            }
            next[d] = pick;
        }

        if (next == sec) break;
        if (!prev.empty() && next == prev) {
            // assignment oscillates between two states; keep the heavier one
            for (int d = 0; d < m; ++d) sec[d] = std::max(next[d], sec[d]);
            ++it;
            break;
        }
        prev = sec;
        sec = next;
    }
    if (it == cap && policy == SelectionPolicy::strict)
        throw InfeasibleDesign("section selection did not reach a fixed point");

    DesignResult res;
    res.section_index = sec;
    res.iterations = it + 1;
    res.designed = sys;
    res.designed.sections.resize(m);
    for (int i = 0; i < m; ++i) res.designed.sections[i] = cat.at(sec[i]).designation;

    res.tables = build_tables(res.designed, cat, mat, combo, arrangements);
    res.u_true.resize(m);
    res.governing_arrangement.resize(m);
    res.governing_station.resize(m);
    for (int d = 0; d < m; ++d) {
        auto g = governing_case(res.tables, d);
        if (g.u > 1.0 + 1e-9 && policy == SelectionPolicy::strict)
            throw InfeasibleDesign("fixed point left member " + std::to_string(d) +
                                   " above capacity");
        res.u_true[d] = g.u;
        res.governing_arrangement[d] = g.arrangement;
        res.governing_station[d] = g.station;
    }
    return res;
}

std::vector<int> brute_force_critical(const BeamSystem& designed, const SectionCatalog& cat,
                                      const Material& mat, const LoadCombination& combo) {
    const int m = designed.member_count();
    if (m > 12) throw ValidationError("brute force capped at m = 12");
    auto naive = naive_set(m);
    auto t = build_tables(designed, cat, mat, combo, naive);
    std::vector<int> winner(m);
    for (int d = 0; d < m; ++d) winner[d] = governing_case(t, d).arrangement;
    return winner;
}

void write_design_json(const DesignResult& result, const ArrangementSet& arrangements,
                       std::ostream& out) {
    nlohmann::json j;
    j["iterations"] = result.iterations;
    nlohmann::json members = nlohmann::json::array();
    for (std::size_t d = 0; d < result.u_true.size(); ++d) {
        nlohmann::json e;
        e["member"] = d;
        e["designation"] = result.designed.sections[d];
        e["u_true"] = result.u_true[d];
        e["governing_arrangement"] =
            bits_string(arrangements.arrangements[result.governing_arrangement[d]]);
        e["governing_station"] = result.governing_station[d];
        members.push_back(e);
    }
    j["members"] = members;
    out << j.dump(2) << "\n";
}

}  // namespace iz
