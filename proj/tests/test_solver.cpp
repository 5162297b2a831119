#include <doctest.h>

#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>

#include "iz/solver.hpp"

namespace fs = std::filesystem;
using namespace iz;

namespace {

struct TempFile {
    fs::path path;
    TempFile(const std::string& name, const std::string& content) {
        path = fs::temp_directory_path() /
               ("iz_solver_" + std::to_string(::getpid()) + "_" + name);
        std::ofstream f(path);
        f << content;
    }
    ~TempFile() {
        std::error_code ec;
        fs::remove(path, ec);
    }
};

SectionCatalog default_cat() { return load_catalog_csv(default_catalog_path()); }

// section with a huge shear area relative to its second moment, pushing the
// shear parameter to ~1e-7 so classical Euler results apply to ~1e-6
SectionCatalog proxy_catalog() {
    TempFile f("proxy.csv",
               "designation,mass_kg_m,depth_mm,Iyy_cm4,Wply_cm3,Avz_cm2,A_cm2\n"
               "proxy,50.0,200.0,10.0,100.0,900.0,1000.0\n");
    return load_catalog_csv(f.path.string());
}

BeamSystem assigned_system(const std::vector<double>& spans, const std::string& designation) {
    BeamSystem sys;
    sys.spans = spans;
    sys.permanent_udl.assign(spans.size(), 0.0);
    sys.variable_udl.assign(spans.size(), 0.0);
    sys.sections.assign(spans.size(), designation);
    return sys;
}

Eigen::Matrix4d euler_stiffness(double EI, double L) {
    Eigen::Matrix4d k;
    const double a = EI / (L * L * L);
    k << 12 * a, 6 * a * L, -12 * a, 6 * a * L,
         6 * a * L, 4 * a * L * L, -6 * a * L, 2 * a * L * L,
         -12 * a, -6 * a * L, 12 * a, -6 * a * L,
         6 * a * L, 2 * a * L * L, -6 * a * L, 4 * a * L * L;
    return k;
}

}  // namespace

TEST_CASE("element stiffness matches the closed form") {
    const double E = 210e9, I = 2e-4, GAz = 210e9 / 2.6 * 5e-3, L = 6.0;
    const double phi = 12.0 * E * I / (GAz * L * L);
    auto k = element_stiffness(E, I, GAz, L);
    CHECK(k(0, 0) == doctest::Approx(12.0 * E * I / ((1 + phi) * L * L * L)));
    CHECK(k(1, 1) == doctest::Approx((4 + phi) * E * I / ((1 + phi) * L)));
    CHECK(k(1, 3) == doctest::Approx((2 - phi) * E * I / ((1 + phi) * L)));
    CHECK((k - k.transpose()).norm() == doctest::Approx(0.0));

    // frozen hand values: phi ~ 0.156, k11 ~ 2.725e7 N/m
    auto kh = element_stiffness(210e9, 1e-4, 403.85e6, 2.0);
    const double phi_h = 12.0 * 210e9 * 1e-4 / (403.85e6 * 4.0);
    CHECK(phi_h == doctest::Approx(0.156).epsilon(1e-3));
    CHECK(kh(0, 0) == doctest::Approx(2.725e7).epsilon(1e-3));
}

TEST_CASE("element stiffness recovers Euler as shear stiffness grows") {
    const double E = 210e9, I = 2e-4, L = 4.0;
    auto k = element_stiffness(E, I, 1e18, L);
    auto ke = euler_stiffness(E * I, L);
    CHECK(((k - ke).cwiseAbs().maxCoeff() / ke.cwiseAbs().maxCoeff()) < 1e-6);
}

TEST_CASE("rigid body motions produce no force") {
    const double L = 5.0;
    auto k = element_stiffness(210e9, 3e-4, 1e8, L);
    Eigen::Vector4d translate(1, 0, 1, 0);
    Eigen::Vector4d rotate(-L / 2, 1, L / 2, 1);
    CHECK((k * translate).norm() < 1e-9 * k.norm());
    CHECK((k * rotate).norm() < 1e-9 * k.norm());
}

TEST_CASE("fixed end forces are the clamped-clamped solution for any phi") {
    const double w = 7.0, L = 5.0;
    for (double phi : {0.0, 0.3, 2.0, 10.0}) {
        auto f = fixed_end_forces(w, L, phi);
        CHECK(f(0) == doctest::Approx(-w * L / 2).epsilon(1e-12));
        CHECK(f(1) == doctest::Approx(-w * L * L / 12).epsilon(1e-12));
        CHECK(f(2) == doctest::Approx(-w * L / 2).epsilon(1e-12));
        CHECK(f(3) == doctest::Approx(w * L * L / 12).epsilon(1e-12));
    }
}

TEST_CASE("single span is statically determinate") {
    auto cat = default_cat();
    auto sys = assigned_system({6.0}, "305x165x40");
    const double w = 10.0;
    auto res = solve(sys, cat, default_material(), {w});
    Eigen::Matrix<double, kStationCount, 1> M, V;
    member_station_forces(res.end_forces[0], 6.0, w, M, V);
    CHECK(M(5) == doctest::Approx(w * 36.0 / 8).epsilon(1e-12));
    CHECK(M(0) == doctest::Approx(0.0).scale(w * 36.0 / 8));
    CHECK(M(10) == doctest::Approx(0.0).scale(w * 36.0 / 8));
    CHECK(V(0) == doctest::Approx(w * 3.0).epsilon(1e-12));
    CHECK(V(10) == doctest::Approx(-w * 3.0).epsilon(1e-12));
}

TEST_CASE("two equal spans match the classical support moments") {
    auto cat = proxy_catalog();
    auto sys = assigned_system({3.0, 3.0}, "proxy");
    const double w = 4.0;
    Eigen::Matrix<double, kStationCount, 1> M, V;

    // both spans loaded: -wL^2/8 over the middle support
    auto res = solve(sys, cat, default_material(), {w, w});
    member_station_forces(res.end_forces[0], 3.0, w, M, V);
    CHECK(M(10) == doctest::Approx(-w * 9.0 / 8).epsilon(1e-6));

    // left span only: -wL^2/16
    res = solve(sys, cat, default_material(), {w, 0.0});
    member_station_forces(res.end_forces[0], 3.0, w, M, V);
    CHECK(M(10) == doctest::Approx(-w * 9.0 / 16).epsilon(1e-6));
}

TEST_CASE("random systems satisfy the three-moment equation in the Euler regime") {
    auto cat = proxy_catalog();
    auto mat = default_material();
    const double EI = mat.elastic_modulus * cat.at(0).second_moment_major;
    std::mt19937 rng(20240501);
    std::uniform_real_distribution<double> span_d(3.0, 8.0), w_d(5.0, 25.0);
    std::uniform_int_distribution<int> m_d(2, 6);

    for (int trial = 0; trial < 40; ++trial) {
        const int m = m_d(rng);
        std::vector<double> spans(m), w(m);
        for (auto& s : spans) s = span_d(rng);
        for (auto& x : w) x = w_d(rng);
        auto sys = assigned_system(spans, "proxy");
        auto res = solve(sys, cat, mat, w);

        // solve for the m-1 interior support moments independently;
        // EI is uniform here but kept explicit per span
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m - 1, m - 1);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(m - 1);
        for (int i = 0; i < m - 1; ++i) {
            const double li = spans[i] / EI, lr = spans[i + 1] / EI;
            if (i > 0) A(i, i - 1) = li;
            A(i, i) = 2.0 * (li + lr);
            if (i < m - 2) A(i, i + 1) = lr;
            b(i) = -(w[i] * std::pow(spans[i], 3) / (4.0 * EI) +
                     w[i + 1] * std::pow(spans[i + 1], 3) / (4.0 * EI));
        }
        Eigen::VectorXd Msup = A.fullPivLu().solve(b);

        double scale = 1.0;
        for (int i = 0; i < m - 1; ++i) scale = std::max(scale, std::abs(Msup(i)));
        // forces come back in kN*m, the oracle is in kN*m too (w in kN/m)
        for (int i = 0; i < m; ++i) {
            const double m_left = -res.end_forces[i](1);
            const double m_right = res.end_forces[i](0) * spans[i] - res.end_forces[i](1) -
                                   w[i] * spans[i] * spans[i] / 2;
            const double expect_left = i == 0 ? 0.0 : Msup(i - 1);
            const double expect_right = i == m - 1 ? 0.0 : Msup(i);
            CHECK(std::abs(m_left - expect_left) < 1e-6 * scale);
            CHECK(std::abs(m_right - expect_right) < 1e-6 * scale);
        }
    }
}

TEST_CASE("nodal moment flexibilities are symmetric") {
    auto cat = default_cat();
    auto mat = default_material();
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> span_d(2.0, 10.0);
    std::uniform_int_distribution<int> m_d(2, 6), sec_d(0, static_cast<int>(cat.size()) - 1);

    for (int trial = 0; trial < 25; ++trial) {
        const int m = m_d(rng);
        std::vector<double> spans(m);
        for (auto& s : spans) s = span_d(rng);
        BeamSystem sys;
        sys.spans = spans;
        sys.permanent_udl.assign(m, 0.0);
        sys.variable_udl.assign(m, 0.0);
        for (int i = 0; i < m; ++i) sys.sections.push_back(cat.at(sec_d(rng)).designation);

        std::vector<Eigen::VectorXd> theta(m + 1);
        for (int node = 0; node <= m; ++node)
            theta[node] = rotations_under_nodal_moment(sys, cat, mat, node);
        double scale = 0.0;
        for (const auto& t : theta) scale = std::max(scale, t.cwiseAbs().maxCoeff());
        for (int a = 0; a <= m; ++a)
            for (int bnode = 0; bnode <= m; ++bnode)
                CHECK(std::abs(theta[a](bnode) - theta[bnode](a)) < 1e-9 * scale);
    }
}

TEST_CASE("station forces are independent of sub-meshing") {
    auto cat = default_cat();
    auto mat = default_material();
    auto sys = assigned_system({4.0, 2.5, 6.0, 3.0}, "305x165x40");
    sys.sections[1] = "610x229x101";
    sys.sections[3] = "203x133x25";
    const std::vector<double> w{12.0, 30.0, 8.0, 20.0};

    auto res = solve(sys, cat, mat, w);
    // reference in the (member, station) layout the sub-meshed path returns
    Eigen::MatrixXd Mref(4, kStationCount), Vref(4, kStationCount);
    for (int i = 0; i < 4; ++i) {
        Eigen::Matrix<double, kStationCount, 1> M, V;
        member_station_forces(res.end_forces[i], sys.spans[i], w[i], M, V);
        Mref.row(i) = M.transpose();
        Vref.row(i) = V.transpose();
    }
    for (int k : {2, 4, 8}) {
        Eigen::MatrixXd M, V;
        subdivided_station_forces(sys, cat, mat, w, k, M, V);
        CHECK((M - Mref).cwiseAbs().maxCoeff() < 1e-9 * Mref.cwiseAbs().maxCoeff());
        CHECK((V - Vref).cwiseAbs().maxCoeff() < 1e-9 * Vref.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("unit tables superpose to the direct solution") {
    auto cat = default_cat();
    auto mat = default_material();
    auto sys = assigned_system({5.0, 3.0, 7.0}, "254x146x43");
    const std::vector<double> w{14.0, 22.0, 9.0};

    auto tables = response_tables(sys, cat, mat);
    REQUIRE(tables.size() == 3);
    auto res = solve(sys, cat, mat, w);
    for (int d = 0; d < 3; ++d) {
        Eigen::Matrix<double, kStationCount, 1> M, V;
        member_station_forces(res.end_forces[d], sys.spans[d], w[d], M, V);
        Eigen::VectorXd Msum = Eigen::VectorXd::Zero(kStationCount);
        Eigen::VectorXd Vsum = Eigen::VectorXd::Zero(kStationCount);
        for (int i = 0; i < 3; ++i) {
            Msum += tables[d].moment_unit.col(i) * w[i];
            Vsum += tables[d].shear_unit.col(i) * w[i];
        }
        CHECK((Msum - M).cwiseAbs().maxCoeff() < 1e-9 * M.cwiseAbs().maxCoeff());
        CHECK((Vsum - V).cwiseAbs().maxCoeff() < 1e-9 * V.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("single-table accessor agrees with the batch") {
    auto cat = default_cat();
    auto mat = default_material();
    auto sys = assigned_system({5.0, 3.0, 7.0}, "254x146x43");
    auto all = response_tables(sys, cat, mat);
    auto one = response_table(sys, cat, mat, 1, station_grid(1));
    CHECK((all[1].moment_unit - one.moment_unit).cwiseAbs().maxCoeff() <
          1e-12 * one.moment_unit.cwiseAbs().maxCoeff());
    CHECK((all[1].shear_unit - one.shear_unit).cwiseAbs().maxCoeff() <
          1e-12 * one.shear_unit.cwiseAbs().maxCoeff());
}

TEST_CASE("midspan moment polarity alternates away from the design beam") {
    auto cat = default_cat();
    auto mat = default_material();
    auto sys = assigned_system({4.0, 4.0, 4.0, 4.0, 4.0}, "305x165x40");
    auto table = response_table(sys, cat, mat, 2, station_grid(2));
    auto pol = polarity_sequence(table, 5, Quantity::moment);
    CHECK(pol.signs == std::vector<int>{1, -1, 1, -1, 1});
    // loading the design beam itself always adds sagging at its midspan
    CHECK(table.moment_unit(5, 2) > 0.0);
}

TEST_CASE("a short deep member flips the polarity of its outward neighbour") {
    auto cat = default_cat();
    auto mat = default_material();
    auto base = assigned_system({3.0, 3.0, 3.0, 3.0, 3.0}, "457x191x82");
    auto variant = base;
    variant.spans[1] = 1.5;  // below the catalog shear span limit
    variant.sections[1] = "914x419x388";

    auto tb = response_table(base, cat, mat, 2, station_grid(2));
    auto tv = response_table(variant, cat, mat, 2, station_grid(2));
    bool flipped = false;
    for (int s = 0; s < kStationCount; ++s) {
        const double b = tb.moment_unit(s, 0), v = tv.moment_unit(s, 0);
        flipped = flipped || (b != 0.0 && v != 0.0 && (b > 0.0) != (v > 0.0));
    }
    CHECK(flipped);
}

TEST_CASE("a loaded neighbour hogs the adjacent midspan") {
    auto cat = default_cat();
    auto mat = default_material();
    auto sys = assigned_system({5.0, 5.0}, "305x165x40");
    auto table = response_table(sys, cat, mat, 0, station_grid(0));
    CHECK(table.moment_unit(5, 1) < 0.0);
    CHECK(table.moment_unit(5, 0) > 0.0);
}

TEST_CASE("station grid is the unit interval in tenths") {
    auto g = station_grid(3);
    CHECK(g.design_beam == 3);
    CHECK(g.stations[0] == doctest::Approx(0.0));
    CHECK(g.stations[5] == doctest::Approx(0.5));
    CHECK(g.stations[10] == doctest::Approx(1.0));
}

TEST_CASE("solver rejects unknown sections and bad spans") {
    auto cat = default_cat();
    auto sys = assigned_system({4.0}, "does-not-exist");
    CHECK_THROWS_AS(solve(sys, cat, default_material(), {1.0}), ValidationError);
    sys = assigned_system({-4.0}, "305x165x40");
    CHECK_THROWS_AS(solve(sys, cat, default_material(), {1.0}), ValidationError);
    sys = assigned_system({4.0}, "305x165x40");
    CHECK_THROWS_AS(solve(sys, cat, default_material(), {1.0, 2.0}), ValidationError);
}
