#include "iz/solver.hpp"

#include <cmath>
#include <ostream>

namespace iz {

namespace {

struct MemberProps {
    std::vector<double> EI;   // N*m^2
    std::vector<double> GAz;  // N
};

MemberProps member_props(const BeamSystem& sys, const SectionCatalog& cat,
                         const Material& mat) {
    if (auto v = validate_material(mat); !v.empty())
        throw ValidationError("material: " + v.front());
    auto idx = resolve_sections(sys, cat);
    MemberProps p;
    p.EI.reserve(idx.size());
    p.GAz.reserve(idx.size());
    for (int k : idx) {
        const auto& s = cat.at(k);
        p.EI.push_back(mat.elastic_modulus * s.second_moment_major);
        p.GAz.push_back(mat.shear_modulus * s.shear_area_major);
    }
    return p;
}

// Assemble and solve the rotation system (translations fixed at supports).
// Loads and stiffness are scaled to kN so end forces come out in kN directly.
struct Assembled {
    Eigen::VectorXd u;                        // all DOFs, [v0,th0,v1,th1,...]
    std::vector<Eigen::Matrix4d> ke;          // per member, kN units
    std::vector<Eigen::Vector4d> feq;         // per member, kN units
};

Assembled assemble_and_solve(const std::vector<double>& spans, const MemberProps& props,
                             const std::vector<double>& udl_kn,
                             const Eigen::VectorXd* extra_rotation_load = nullptr) {
    const int m = static_cast<int>(spans.size());
    const int nfree = m + 1;  // one rotation per node
    Eigen::MatrixXd Kff = Eigen::MatrixXd::Zero(nfree, nfree);
    Eigen::VectorXd ff = Eigen::VectorXd::Zero(nfree);

    Assembled out;
    out.ke.resize(m);
    out.feq.resize(m);
    for (int e = 0; e < m; ++e) {
        const double L = spans[e];
        const double phi = 12.0 * props.EI[e] / (props.GAz[e] * L * L);
        // scale stiffness to kN; phi is unit-free so this is just 1e-3
        out.ke[e] = element_stiffness(props.EI[e], 1.0, props.GAz[e], L) * 1e-3;
        out.feq[e] = fixed_end_forces(udl_kn[e], L, phi);
        // rotation DOFs of this member are nodes e and e+1
        Kff(e, e) += out.ke[e](1, 1);
        Kff(e, e + 1) += out.ke[e](1, 3);
        Kff(e + 1, e) += out.ke[e](3, 1);
        Kff(e + 1, e + 1) += out.ke[e](3, 3);
        ff(e) += out.feq[e](1);
        ff(e + 1) += out.feq[e](3);
    }
    if (extra_rotation_load) ff += *extra_rotation_load;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(Kff);
    if (ldlt.info() != Eigen::Success)
        throw SolverError("rotation system factorization failed");
    Eigen::VectorXd th = ldlt.solve(ff);
    if ((Kff * th - ff).norm() > 1e-9 * std::max(1.0, ff.norm()))
        throw SolverError("rotation system solve did not converge");

    out.u = Eigen::VectorXd::Zero(2 * (m + 1));
    for (int n = 0; n <= m; ++n) out.u(2 * n + 1) = th(n);
    return out;
}

}  // namespace

StationGrid station_grid(int design_beam) {
    StationGrid g;
    g.design_beam = design_beam;
    for (int s = 0; s < kStationCount; ++s)
        g.stations[s] = static_cast<double>(s) / (kStationCount - 1);
    return g;
}

Eigen::Matrix4d element_stiffness(double E, double I, double GAz, double L) {
    if (E <= 0 || I <= 0 || GAz <= 0 || L <= 0)
        throw ValidationError("element_stiffness requires positive E, I, GAz, L");
    const double EI = E * I;
    const double phi = 12.0 * EI / (GAz * L * L);
    const double f = EI / ((1.0 + phi) * L * L * L);
    const double L2 = L * L;
    Eigen::Matrix4d k;
    k << 12.0, 6.0 * L, -12.0, 6.0 * L,
        6.0 * L, (4.0 + phi) * L2, -6.0 * L, (2.0 - phi) * L2,
        -12.0, -6.0 * L, 12.0, -6.0 * L,
        6.0 * L, (2.0 - phi) * L2, -6.0 * L, (4.0 + phi) * L2;
    return f * k;
}

Eigen::Vector4d fixed_end_forces(double w, double L, double /*phi*/) {
    if (L <= 0) throw ValidationError("fixed_end_forces requires positive L");
    Eigen::Vector4d f;
    f << -w * L / 2.0, -w * L * L / 12.0, -w * L / 2.0, w * L * L / 12.0;
    return f;
}

SolveResult solve(const BeamSystem& sys, const SectionCatalog& cat, const Material& mat,
                  const std::vector<double>& udl) {
    const int m = sys.member_count();
    if (static_cast<int>(udl.size()) != m)
        throw ValidationError("udl vector length does not match member count");
    if (auto v = validate_system(sys, cat); !v.empty())
        throw ValidationError("system invalid: " + v.front());

    auto props = member_props(sys, cat, mat);
    auto a = assemble_and_solve(sys.spans, props, udl);

    SolveResult res;
    res.displacements = a.u;
    res.end_forces.resize(m);
    for (int e = 0; e < m; ++e) {
        Eigen::Vector4d ue;
        ue << a.u(2 * e), a.u(2 * e + 1), a.u(2 * e + 2), a.u(2 * e + 3);
        res.end_forces[e] = a.ke[e] * ue - a.feq[e];
    }
    return res;
}

void member_station_forces(const Eigen::Vector4d& end_forces, double span, double udl,
                           Eigen::Ref<Eigen::Matrix<double, kStationCount, 1>> M,
                           Eigen::Ref<Eigen::Matrix<double, kStationCount, 1>> V) {
    const double p1 = end_forces(0);
    const double m1 = end_forces(1);
    for (int s = 0; s < kStationCount; ++s) {
        const double x = span * static_cast<double>(s) / (kStationCount - 1);
        V(s) = p1 - udl * x;
        M(s) = p1 * x - m1 - udl * x * x / 2.0;
    }
}

std::vector<ResponseTable> response_tables(const BeamSystem& sys, const SectionCatalog& cat,
                                           const Material& mat) {
    const int m = sys.member_count();
    std::vector<ResponseTable> tables(m);
    for (int d = 0; d < m; ++d) {
        tables[d].design_beam = d;
        tables[d].moment_unit.resize(kStationCount, m);
        tables[d].shear_unit.resize(kStationCount, m);
    }
    std::vector<double> udl(m, 0.0);
    for (int i = 0; i < m; ++i) {
        udl[i] = 1.0;
        auto res = solve(sys, cat, mat, udl);
        udl[i] = 0.0;
        for (int d = 0; d < m; ++d) {
            Eigen::Matrix<double, kStationCount, 1> M, V;
            member_station_forces(res.end_forces[d], sys.spans[d], d == i ? 1.0 : 0.0, M, V);
            tables[d].moment_unit.col(i) = M;
            tables[d].shear_unit.col(i) = V;
        }
    }
    return tables;
}

ResponseTable response_table(const BeamSystem& sys, const SectionCatalog& cat,
                             const Material& mat, int design_beam, const StationGrid& grid) {
    if (design_beam < 0 || design_beam >= sys.member_count())
        throw ValidationError("design beam index out of range");
    (void)grid;  // the standard 11-point grid is the only one supported
    return response_tables(sys, cat, mat)[design_beam];
}

PolaritySequence polarity_sequence(const ResponseTable& table, int station, Quantity q) {
    const auto& mat = q == Quantity::moment ? table.moment_unit : table.shear_unit;
    const double tol = 1e-10 * mat.cwiseAbs().maxCoeff();
    PolaritySequence seq;
    seq.design_beam = table.design_beam;
    seq.station = station;
    seq.quantity = q;
    seq.signs.resize(mat.cols());
    for (int i = 0; i < mat.cols(); ++i) {
        const double v = mat(station, i);
        seq.signs[i] = std::abs(v) <= tol ? 0 : (v > 0 ? 1 : -1);
    }
    return seq;
}

void write_response_csv(const ResponseTable& table, std::ostream& out) {
    out << "station,member,M_unit,V_unit\n";
    char buf[96];
    for (int s = 0; s < kStationCount; ++s)
        for (int i = 0; i < table.moment_unit.cols(); ++i) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.12g,%.12g\n", s, i,
                          table.moment_unit(s, i), table.shear_unit(s, i));
            out << buf;
        }
}

Eigen::VectorXd rotations_under_nodal_moment(const BeamSystem& sys, const SectionCatalog& cat,
                                             const Material& mat, int node) {
    const int m = sys.member_count();
    if (node < 0 || node > m) throw ValidationError("node index out of range");
    auto props = member_props(sys, cat, mat);
    std::vector<double> udl(m, 0.0);
    Eigen::VectorXd load = Eigen::VectorXd::Zero(m + 1);
    load(node) = 1.0;  // kN*m
    auto a = assemble_and_solve(sys.spans, props, udl, &load);
    Eigen::VectorXd th(m + 1);
    for (int n = 0; n <= m; ++n) th(n) = a.u(2 * n + 1);
    return th;
}

void subdivided_station_forces(const BeamSystem& sys, const SectionCatalog& cat,
                               const Material& mat, const std::vector<double>& udl,
                               int subdivisions, Eigen::MatrixXd& M, Eigen::MatrixXd& V) {
    const int m = sys.member_count();
    const int k = subdivisions;
    if (k < 1) throw ValidationError("subdivisions must be >= 1");
    auto props = member_props(sys, cat, mat);

    // nodes: m*k + 1; v fixed only at the original supports (every k-th node)
    const int nn = m * k + 1;
    const int ndof = 2 * nn;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(ndof, ndof);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(ndof);

    std::vector<Eigen::Matrix4d> ke(m * k);
    std::vector<Eigen::Vector4d> feq(m * k);
    for (int e = 0; e < m; ++e) {
        const double Ls = sys.spans[e] / k;
        const double phi = 12.0 * props.EI[e] / (props.GAz[e] * Ls * Ls);
        for (int s = 0; s < k; ++s) {
            const int el = e * k + s;
            ke[el] = element_stiffness(props.EI[e], 1.0, props.GAz[e], Ls) * 1e-3;
            feq[el] = fixed_end_forces(udl[e], Ls, phi);
            const int n0 = el;  // sub-element connects nodes el, el+1
            int dofs[4] = {2 * n0, 2 * n0 + 1, 2 * n0 + 2, 2 * n0 + 3};
            for (int a = 0; a < 4; ++a) {
                f(dofs[a]) += feq[el](a);
                for (int b = 0; b < 4; ++b) K(dofs[a], dofs[b]) += ke[el](a, b);
            }
        }
    }

    std::vector<int> free_dofs;
    for (int n = 0; n < nn; ++n) {
        if (n % k != 0) free_dofs.push_back(2 * n);  // interior translation
        free_dofs.push_back(2 * n + 1);
    }
    const int nf = static_cast<int>(free_dofs.size());
    Eigen::MatrixXd Kff(nf, nf);
    Eigen::VectorXd ff(nf);
    for (int a = 0; a < nf; ++a) {
        ff(a) = f(free_dofs[a]);
        for (int b = 0; b < nf; ++b) Kff(a, b) = K(free_dofs[a], free_dofs[b]);
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Kff);
    if (ldlt.info() != Eigen::Success) throw SolverError("subdivided factorization failed");
    Eigen::VectorXd uf = ldlt.solve(ff);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(ndof);
    for (int a = 0; a < nf; ++a) u(free_dofs[a]) = uf(a);

    M.resize(m, kStationCount);
    V.resize(m, kStationCount);
    for (int e = 0; e < m; ++e) {
        const double Ls = sys.spans[e] / k;
        for (int s = 0; s < kStationCount; ++s) {
            const double x = sys.spans[e] * static_cast<double>(s) / (kStationCount - 1);
            // sub-element containing x; push x = L onto the last one
            int sub = std::min(static_cast<int>(x / Ls), k - 1);
            const double xl = x - sub * Ls;
            const int el = e * k + sub;
            Eigen::Vector4d ue;
            ue << u(2 * el), u(2 * el + 1), u(2 * el + 2), u(2 * el + 3);
            Eigen::Vector4d p = ke[el] * ue - feq[el];
            V(e, s) = p(0) - udl[e] * xl;
            M(e, s) = p(0) * xl - p(1) - udl[e] * xl * xl / 2.0;
        }
    }
}

}  // namespace iz
