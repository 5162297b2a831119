#include <doctest.h>

#include <json.hpp>
#include <limits>
#include <sstream>

#include "iz/design.hpp"

using namespace iz;

namespace {

SectionCatalog default_cat() { return load_catalog_csv(default_catalog_path()); }

BeamSystem uniform_system(int m, double span, double g, double q) {
    BeamSystem sys;
    sys.spans.assign(m, span);
    sys.permanent_udl.assign(m, g);
    sys.variable_udl.assign(m, q);
    return sys;
}

double table_peak_utilisation(const SystemTables& t, int d, const Resistances& r) {
    Eigen::MatrixXd M = (t.moment_unit[d] * t.factored.transpose()).cwiseAbs();
    Eigen::MatrixXd V = (t.shear_unit[d] * t.factored.transpose()).cwiseAbs();
    double peak = 0.0;
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        for (Eigen::Index i = 0; i < M.rows(); ++i)
            peak = std::max(peak, utilisation(M(i, j), V(i, j), r));
    return peak;
}

}  // namespace

TEST_CASE("plastic resistances follow the partial factor") {
    SteelSection sec;
    sec.designation = "hand";
    sec.depth = 0.3;
    sec.mass_per_length = 50.0;
    sec.second_moment_major = 1e-4;
    sec.plastic_modulus_major = 1e-3;
    sec.shear_area_major = 2e-3;
    sec.cross_area = 6e-3;
    Material mat = default_material();

    auto r = resistances(sec, mat);
    CHECK(r.moment_resistance == doctest::Approx(355.0).epsilon(1e-12));
    CHECK(r.shear_resistance == doctest::Approx(2e-3 * 355e6 / std::sqrt(3.0) / 1e3).epsilon(1e-12));

    auto r2 = resistances(sec, mat, 2.0);
    CHECK(r2.moment_resistance == doctest::Approx(r.moment_resistance / 2).epsilon(1e-12));
    CHECK(r2.shear_resistance == doctest::Approx(r.shear_resistance / 2).epsilon(1e-12));

    // frozen hand value: 50 cm^2 of shear area carries about 1025 kN
    sec.shear_area_major = 50e-4;
    CHECK(resistances(sec, mat).shear_resistance == doctest::Approx(1025.0).epsilon(1e-3));
}

TEST_CASE("utilisation applies the shear interaction only above half capacity") {
    Resistances r{100.0, 100.0};
    CHECK(utilisation(177.5, 0.0, Resistances{355.0, 1000.0}) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(utilisation(80.0, 0.0, r) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(utilisation(0.0, 100.0, r) == doctest::Approx(1.0).epsilon(1e-12));
    // at exactly half the shear capacity there is no reduction yet
    CHECK(utilisation(80.0, 50.0, r) == doctest::Approx(0.8).epsilon(1e-12));
    // rho = (2*0.75 - 1)^2 = 0.25 knocks a quarter off the moment capacity
    CHECK(utilisation(60.0, 75.0, r) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(utilisation(30.0, 75.0, r) == doctest::Approx(0.75).epsilon(1e-12));
    // signs are irrelevant
    CHECK(utilisation(-60.0, -75.0, r) == doctest::Approx(utilisation(60.0, 75.0, r)));
    // fully consumed moment capacity dominates everything
    CHECK(utilisation(1.0, 0.0, Resistances{0.0, 100.0}) > 1e9);
}

TEST_CASE("self-weight alone picks the lightest section everywhere") {
    auto cat = default_cat();
    auto sys = uniform_system(3, 6.0, 0.0, 0.0);
    auto res = design_system(sys, cat, default_material(), LoadCombination{},
                             critical_set(sys, default_material(), cat));
    for (int idx : res.section_index) CHECK(idx == 0);
    for (double u : res.u_true) CHECK(u <= 1.0);
    CHECK(res.designed.sections_assigned());
}

TEST_CASE("selection is minimal: one section down always violates") {
    auto cat = default_cat();
    auto mat = default_material();
    auto sys = uniform_system(5, 6.0, 3.0, 30.0);
    auto res = design_system(sys, cat, mat, LoadCombination{}, critical_set(sys, mat, cat));

    for (int d = 0; d < 5; ++d) {
        CHECK(res.u_true[d] <= 1.0);
        CHECK(res.u_true[d] == doctest::Approx(table_peak_utilisation(
                                   res.tables, d, res.tables.resist[d])).epsilon(1e-12));
        const int s = res.section_index[d];
        REQUIRE(s > 0);  // this load level must not be satisfied by the lightest entry
        auto smaller = resistances(cat.at(s - 1), mat);
        CHECK(table_peak_utilisation(res.tables, d, smaller) > 1.0);
    }
}

TEST_CASE("symmetric systems design symmetrically") {
    auto cat = default_cat();
    auto mat = default_material();
    auto sys = uniform_system(6, 5.0, 5.0, 25.0);
    auto res = design_system(sys, cat, mat, LoadCombination{}, critical_set(sys, mat, cat));
    for (int d = 0; d < 6; ++d) {
        CHECK(res.section_index[d] == res.section_index[5 - d]);
        CHECK(res.u_true[d] == doctest::Approx(res.u_true[5 - d]).epsilon(1e-9));
    }
}

TEST_CASE("design is deterministic") {
    auto cat = default_cat();
    auto mat = default_material();
    auto sys = uniform_system(4, 7.0, 2.0, 18.0);
    auto crit = critical_set(sys, mat, cat);
    auto a = design_system(sys, cat, mat, LoadCombination{}, crit);
    auto b = design_system(sys, cat, mat, LoadCombination{}, crit);
    CHECK(a.section_index == b.section_index);
    CHECK(a.u_true == b.u_true);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("strict policy refuses what no section can carry") {
    auto cat = default_cat();
    auto mat = default_material();
    auto sys = uniform_system(2, 12.0, 3.0, 5000.0);
    auto crit = critical_set(sys, mat, cat);
    CHECK_THROWS_AS(design_system(sys, cat, mat, LoadCombination{}, crit), InfeasibleDesign);

    auto res = design_system(sys, cat, mat, LoadCombination{}, crit,
                             SelectionPolicy::clamp_to_largest);
    const int last = static_cast<int>(cat.size()) - 1;
    CHECK(res.section_index == std::vector<int>{last, last});
    CHECK(res.u_true[0] > 1.0);
    CHECK(res.designed.sections_assigned());
}

TEST_CASE("factored load matrix combines permanent, self-weight and pattern") {
    auto cat = default_cat();
    auto mat = default_material();
    auto sys = uniform_system(5, 4.0, 3.0, 30.0);
    sys.sections.assign(5, "305x165x40");
    auto crit = critical_set(sys, mat, cat);
    auto t = build_tables(sys, cat, mat, LoadCombination{}, crit);

    REQUIRE(t.factored.rows() == static_cast<Eigen::Index>(crit.size()));
    REQUIRE(t.factored.cols() == 5);
    const double sw = cat.at(cat.find("305x165x40")).self_weight();
    for (std::size_t j = 0; j < crit.size(); ++j)
        for (int i = 0; i < 5; ++i) {
            const double expect = 1.35 * (3.0 + sw) +
                                  (crit.arrangements[j].activation[i] ? 1.5 * 30.0 : 0.0);
            CHECK(t.factored(static_cast<Eigen::Index>(j), i) ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
}

TEST_CASE("heavier loads never lower the governing utilisation at fixed sections") {
    auto cat = default_cat();
    auto mat = default_material();
    auto crit_of = [&](const BeamSystem& s) { return critical_set(s, mat, cat); };

    auto sys = uniform_system(4, 5.0, 3.0, 15.0);
    sys.sections.assign(4, "356x171x67");
    auto before = build_tables(sys, cat, mat, LoadCombination{}, crit_of(sys));

    for (int bump = 0; bump < 4; ++bump) {
        auto heavier = sys;
        heavier.variable_udl[bump] += 10.0;
        auto after = build_tables(heavier, cat, mat, LoadCombination{}, crit_of(heavier));
        for (int d = 0; d < 4; ++d)
            CHECK(governing_case(after, d).u >= governing_case(before, d).u - 1e-12);
    }
}

TEST_CASE("governing case ties resolve to the lowest arrangement") {
    auto cat = default_cat();
    auto mat = default_material();
    // no variable load: every arrangement produces the same forces
    auto sys = uniform_system(1, 6.0, 10.0, 0.0);
    sys.sections.assign(1, "305x165x40");
    auto t = build_tables(sys, cat, mat, LoadCombination{}, flexural_set(1));
    auto g = governing_case(t, 0);
    CHECK(g.arrangement == 0);
    CHECK(g.u > 0.0);
}

TEST_CASE("single-member brute force crowns the loaded arrangement") {
    auto cat = default_cat();
    auto mat = default_material();
    auto sys = uniform_system(1, 6.0, 3.0, 20.0);
    auto res = design_system(sys, cat, mat, LoadCombination{}, critical_set(sys, mat, cat));
    auto winners = brute_force_critical(res.designed, cat, mat, LoadCombination{});
    REQUIRE(winners.size() == 1);
    auto naive = naive_set(1);
    CHECK(bits_string(naive.arrangements[winners[0]]) == "1");
}

TEST_CASE("brute force winners live inside the critical set on an easy system") {
    auto cat = default_cat();
    auto mat = default_material();
    auto sys = uniform_system(5, 6.0, 3.0, 25.0);
    auto crit = critical_set(sys, mat, cat);
    auto res = design_system(sys, cat, mat, LoadCombination{}, crit);
    auto winners = brute_force_critical(res.designed, cat, mat, LoadCombination{});

    auto naive = naive_set(5);
    for (int d = 0; d < 5; ++d) {
        const auto& win = naive.arrangements[winners[d]];
        bool found = false;
        for (const auto& a : crit.arrangements) found = found || a == win;
        CHECK(found);
    }
    CHECK_THROWS_AS(brute_force_critical(uniform_system(13, 4.0, 3.0, 10.0), cat, mat,
                                         LoadCombination{}),
                    ValidationError);
}

TEST_CASE("design json lists one entry per member") {
    auto cat = default_cat();
    auto mat = default_material();
    auto sys = uniform_system(3, 5.0, 3.0, 15.0);
    auto crit = critical_set(sys, mat, cat);
    auto res = design_system(sys, cat, mat, LoadCombination{}, crit);
    std::ostringstream out;
    write_design_json(res, crit, out);

    auto j = nlohmann::json::parse(out.str());
    CHECK(j["iterations"].get<int>() >= 1);
    REQUIRE(j["members"].size() == 3);
    for (int d = 0; d < 3; ++d) {
        const auto& e = j["members"][d];
        CHECK(e["member"].get<int>() == d);
        CHECK(e["designation"].get<std::string>() == res.designed.sections[d]);
        CHECK(e["u_true"].get<double>() == doctest::Approx(res.u_true[d]));
        CHECK(e["governing_arrangement"].get<std::string>().size() == 3);
        CHECK(e["governing_station"].get<int>() >= 0);
        CHECK(e["governing_station"].get<int>() < kStationCount);
    }
}
