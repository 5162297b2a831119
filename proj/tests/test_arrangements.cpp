#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "iz/arrangements.hpp"

using namespace iz;

namespace {

std::set<std::string> bit_set(const ArrangementSet& s) {
    std::set<std::string> out;
    for (const auto& a : s.arrangements) out.insert(bits_string(a));
    return out;
}

LoadArrangement from(const std::string& bits) { return arrangement_from_bits(bits); }

std::string complement(const std::string& bits) {
    std::string out = bits;
    for (char& c : out) c = c == '1' ? '0' : '1';
    return out;
}

}  // namespace

TEST_CASE("flexural set has size 2m with unique members of the right arity") {
    for (int m = 1; m <= 12; ++m) {
        auto s = flexural_set(m);
        CHECK(s.kind == ArrangementKind::flexural);
        CHECK(s.size() == static_cast<std::size_t>(2 * m));
        CHECK(bit_set(s).size() == s.size());
        for (const auto& a : s.arrangements)
            CHECK(a.activation.size() == static_cast<std::size_t>(m));
    }
}

TEST_CASE("flexural set for five members is the known ten") {
    auto s = flexural_set(5);
    CHECK(bits_string(s.arrangements[0]) == "10101");
    std::set<std::string> expect{"10101", "11010", "01101", "10110", "01011",
                                 "01010", "00101", "10010", "01001", "10100"};
    CHECK(bit_set(s) == expect);
}

TEST_CASE("flexural set is closed under complement") {
    for (int m : {2, 3, 7, 11}) {
        auto bits = bit_set(flexural_set(m));
        for (const auto& b : bits) CHECK(bits.count(complement(b)) == 1);
    }
}

TEST_CASE("shear transform rewrites the walk across shear beams") {
    // copy runs through the shear beam and one member past it, then alternation resumes
    auto out = shear_transform(from("01101"), {3}, 1);
    CHECK(bits_string(out) == "01100");
    out = shear_transform(from("01011"), {1}, 3);
    CHECK(bits_string(out) == "11011");
}

TEST_CASE("shear transform leaves its input untouched") {
    auto in = from("01101");
    auto copy = in;
    (void)shear_transform(in, {3}, 1);
    CHECK(in == copy);
}

TEST_CASE("shear set respects the size bound and avoids the flexural set") {
    std::mt19937 rng(424242);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> m_d(2, 12);
        const int m = m_d(rng);
        std::uniform_int_distribution<int> n_d(0, std::min(m, 5));
        std::vector<int> pool(m);
        for (int i = 0; i < m; ++i) pool[i] = i;
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<int> shear(pool.begin(), pool.begin() + n_d(rng));
        std::sort(shear.begin(), shear.end());

        auto flex = flexural_set(m);
        ShearSetStats stats{};
        auto s = shear_set(m, flex, shear, false, &stats);
        CHECK(s.kind == ArrangementKind::shear);
        const std::size_t n = shear.size();
        const std::size_t bound = n == 0 ? 0 : 2 * (m - 1) * ((1u << n) - 1);
        CHECK(s.size() <= bound);
        CHECK(s.size() == stats.unique_outputs);
        CHECK(stats.raw_outputs >= stats.unique_outputs);

        auto flex_bits = bit_set(flex);
        auto shear_bits = bit_set(s);
        CHECK(shear_bits.size() == s.size());
        for (const auto& b : shear_bits) CHECK(flex_bits.count(b) == 0);
    }
}

TEST_CASE("no shear beams means the critical set is exactly the flexural set") {
    auto flex = flexural_set(10);
    auto s = shear_set(10, flex, {});
    CHECK(s.size() == 0);
    auto crit = critical_set(flex, s);
    CHECK(crit.size() == 20);
    CHECK(bit_set(crit) == bit_set(flex));
}

TEST_CASE("critical set keeps the flexural block first and deduplicates") {
    const int m = 6;
    auto flex = flexural_set(m);
    auto shear = shear_set(m, flex, {1, 2});
    auto crit = critical_set(flex, shear);
    CHECK(crit.kind == ArrangementKind::critical);
    CHECK(crit.size() == flex.size() + shear.size());
    for (std::size_t i = 0; i < flex.size(); ++i)
        CHECK(crit.arrangements[i] == flex.arrangements[i]);
    CHECK(bit_set(crit).size() == crit.size());
}

TEST_CASE("span limit reflects the worst catalog section") {
    auto cat = load_catalog_csv(default_catalog_path());
    auto mat = default_material();
    const double limit = shear_span_limit(mat, cat);
    const double expect = std::sqrt(6.0 * (mat.elastic_modulus / mat.shear_modulus) *
                                    cat.max_shear_ratio);
    CHECK(limit == doctest::Approx(expect).epsilon(1e-12));
    CHECK(limit > 2.0);
    CHECK(limit < 3.0);
}

TEST_CASE("susceptible members are those shorter than the limit") {
    auto cat = load_catalog_csv(default_catalog_path());
    auto mat = default_material();
    const double limit = shear_span_limit(mat, cat);
    BeamSystem sys;
    sys.spans = {limit * 0.8, limit * 1.2, limit * 0.96, limit * 2.0};
    sys.permanent_udl.assign(4, 0.0);
    sys.variable_udl.assign(4, 0.0);
    CHECK(shear_susceptible(sys, mat, cat) == std::vector<int>{0, 2});
}

TEST_CASE("system-level critical set matches the two-step construction") {
    auto cat = load_catalog_csv(default_catalog_path());
    auto mat = default_material();
    BeamSystem sys;
    sys.spans = {2.0, 6.0, 1.5, 6.0, 6.0};
    sys.permanent_udl.assign(5, 0.0);
    sys.variable_udl.assign(5, 0.0);

    auto flex = flexural_set(5);
    auto shear = shear_set(5, flex, shear_susceptible(sys, mat, cat));
    auto expect = critical_set(flex, shear);
    auto got = critical_set(sys, mat, cat);
    CHECK(bit_set(got) == bit_set(expect));
    CHECK(got.size() == expect.size());
    CHECK(got.size() > flex.size());  // short spans must add shear arrangements

    // same inputs, same set, same order
    auto again = critical_set(sys, mat, cat);
    CHECK(again.arrangements == got.arrangements);
}

TEST_CASE("naive set enumerates every pattern, flexural block first") {
    auto s = naive_set(3);
    CHECK(s.kind == ArrangementKind::naive);
    CHECK(s.size() == 8);
    CHECK(bit_set(s).size() == 8);
    auto flex_bits = bit_set(flexural_set(3));
    for (std::size_t i = 0; i < flex_bits.size(); ++i)
        CHECK(flex_bits.count(bits_string(s.arrangements[i])) == 1);
    // remainder in ascending binary order with bit i = member i
    CHECK(bits_string(s.arrangements[6]) == "000");
    CHECK(bits_string(s.arrangements[7]) == "111");

    for (int m : {1, 2, 5, 10})
        CHECK(naive_set(m).size() == (1u << m));
    CHECK_THROWS_AS(naive_set(21), ValidationError);
}

TEST_CASE("arrangement csv lists index, kind and bits") {
    auto flex = flexural_set(3);
    auto crit = critical_set(flex, shear_set(3, flex, {0}));
    std::ostringstream out;
    write_arrangement_csv(crit, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "index,kind,bits");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CHECK(line.find("critical") != std::string::npos);
        CHECK(line.substr(0, line.find(',')) == std::to_string(rows));
        ++rows;
    }
    CHECK(rows == crit.size());
}
