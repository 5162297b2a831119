#include "iz/model.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace iz {

namespace {

constexpr double kGravity = 9.81;  // m/s^2

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_positive(const std::string& s, const std::string& what, int line_no) {
    double v = 0.0;
    try {
        v = std::stod(s);
    } catch (const std::exception&) {
        throw ValidationError("catalog line " + std::to_string(line_no) +
                              ": bad number for " + what + ": '" + s + "'");
    }
    if (v <= 0.0)
        throw ValidationError("catalog line " + std::to_string(line_no) + ": " + what +
                              " must be positive");
    return v;
}

}  // namespace

Material default_material() {
    Material mat;
    mat.elastic_modulus = 210e9;
    mat.shear_modulus = mat.elastic_modulus / 2.6;
    mat.yield_strength = 355e6;
    mat.unit_weight = 7850.0 * kGravity;
    return mat;
}

std::vector<std::string> validate_material(const Material& mat) {
    std::vector<std::string> v;
    if (mat.elastic_modulus <= 0) v.push_back("elastic_modulus must be positive");
    if (mat.shear_modulus <= 0) v.push_back("shear_modulus must be positive");
    if (mat.yield_strength <= 0) v.push_back("yield_strength must be positive");
    if (mat.unit_weight <= 0) v.push_back("unit_weight must be positive");
    if (mat.elastic_modulus > 0 && mat.shear_modulus > 0) {
        double ratio = mat.elastic_modulus / mat.shear_modulus;
        if (ratio < 2.0 || ratio > 3.0)
            v.push_back("E/G ratio " + std::to_string(ratio) + " outside [2, 3]");
    }
    return v;
}

double SteelSection::self_weight() const { return mass_per_length * kGravity / 1000.0; }

int SectionCatalog::find(const std::string& designation) const {
    for (std::size_t i = 0; i < sections.size(); ++i)
        if (sections[i].designation == designation) return static_cast<int>(i);
    return -1;
}

SectionCatalog load_catalog_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open catalog file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty catalog file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string expected = "designation,mass_kg_m,depth_mm,Iyy_cm4,Wply_cm3,Avz_cm2,A_cm2";
    if (line != expected)
        throw ValidationError("catalog header mismatch, expected '" + expected + "'");

    SectionCatalog cat;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 7)
            throw ValidationError("catalog line " + std::to_string(line_no) +
                                  ": expected 7 fields, got " + std::to_string(f.size()));
        SteelSection s;
        s.designation = f[0];
        if (s.designation.empty())
            throw ValidationError("catalog line " + std::to_string(line_no) +
                                  ": empty designation");
        s.mass_per_length = parse_positive(f[1], "mass_kg_m", line_no);
        s.depth = parse_positive(f[2], "depth_mm", line_no) / 1e3;
        s.second_moment_major = parse_positive(f[3], "Iyy_cm4", line_no) / 1e8;
        s.plastic_modulus_major = parse_positive(f[4], "Wply_cm3", line_no) / 1e6;
        s.shear_area_major = parse_positive(f[5], "Avz_cm2", line_no) / 1e4;
        s.cross_area = parse_positive(f[6], "A_cm2", line_no) / 1e4;
        if (s.shear_area_major >= s.cross_area)
            throw ValidationError("catalog line " + std::to_string(line_no) +
                                  ": shear area must be smaller than cross area");
        cat.sections.push_back(std::move(s));
    }
    if (cat.sections.empty()) throw ValidationError("catalog has no sections: " + path);

    std::sort(cat.sections.begin(), cat.sections.end(),
              [](const SteelSection& a, const SteelSection& b) {
                  return std::tie(a.depth, a.plastic_modulus_major, a.mass_per_length,
                                  a.designation) <
                         std::tie(b.depth, b.plastic_modulus_major, b.mass_per_length,
                                  b.designation);
              });
    for (std::size_t i = 1; i < cat.sections.size(); ++i)
        if (cat.sections[i].designation == cat.sections[i - 1].designation)
            throw ValidationError("duplicate catalog designation: " +
                                  cat.sections[i].designation);

    for (const auto& s : cat.sections)
        cat.max_shear_ratio =
            std::max(cat.max_shear_ratio, s.second_moment_major / s.shear_area_major);
    return cat;
}

std::string default_catalog_path() {
    if (const char* env = std::getenv("IZ_CATALOG"); env && *env) return env;
#ifdef IZ_DATA_DIR
    return std::string(IZ_DATA_DIR) + "/ukb_catalog.csv";
#else
    return "data/ukb_catalog.csv";
#endif
}

bool BeamSystem::sections_assigned() const {
    if (sections.size() != spans.size()) return false;
    for (const auto& s : sections)
        if (s.empty()) return false;
    return !spans.empty();
}

BeamSystem system_from_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open system file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError("bad JSON in " + path + ": " + e.what());
    }

    BeamSystem sys;
    try {
        sys.spans = j.at("spans").get<std::vector<double>>();
        sys.permanent_udl = j.at("permanent_udl").get<std::vector<double>>();
        sys.variable_udl = j.at("variable_udl").get<std::vector<double>>();
        if (j.contains("sections") && !j["sections"].is_null()) {
            for (const auto& e : j["sections"])
                sys.sections.push_back(e.is_null() ? "" : e.get<std::string>());
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception& e) {
        throw ValidationError("system document " + path + ": " + e.what());
    }
    return sys;
}

void system_to_json(const BeamSystem& sys, const std::string& path) {
    nlohmann::json j;
    j["spans"] = sys.spans;
    j["permanent_udl"] = sys.permanent_udl;
    j["variable_udl"] = sys.variable_udl;
    if (sys.sections.empty()) {
        j["sections"] = nullptr;
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& s : sys.sections) {
            if (s.empty())
                arr.push_back(nullptr);
            else
                arr.push_back(s);
        }
        j["sections"] = arr;
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write system file: " + path);
    out << j.dump(2) << "\n";
}

std::vector<int> resolve_sections(const BeamSystem& sys, const SectionCatalog& cat) {
    if (!sys.sections_assigned())
        throw ValidationError("system has unassigned sections");
    std::vector<int> idx(sys.sections.size());
    for (std::size_t i = 0; i < sys.sections.size(); ++i) {
        int k = cat.find(sys.sections[i]);
        if (k < 0)
            throw ValidationError("member " + std::to_string(i) + ": section '" +
                                  sys.sections[i] + "' not in catalog");
        idx[i] = k;
    }
    return idx;
}

std::vector<std::string> validate_system(const BeamSystem& sys, const SectionCatalog& cat) {
    std::vector<std::string> v;
    const std::size_t m = sys.spans.size();
    if (m == 0) v.push_back("system has no members");
    if (sys.permanent_udl.size() != m)
        v.push_back("permanent_udl has " + std::to_string(sys.permanent_udl.size()) +
                    " entries, expected " + std::to_string(m));
    if (sys.variable_udl.size() != m)
        v.push_back("variable_udl has " + std::to_string(sys.variable_udl.size()) +
                    " entries, expected " + std::to_string(m));
    if (!sys.sections.empty() && sys.sections.size() != m)
        v.push_back("sections has " + std::to_string(sys.sections.size()) +
                    " entries, expected " + std::to_string(m));

    for (std::size_t i = 0; i < m; ++i)
        if (sys.spans[i] <= 0.0)
            v.push_back("member " + std::to_string(i) + ": span must be positive");
    for (std::size_t i = 0; i < sys.permanent_udl.size(); ++i)
        if (sys.permanent_udl[i] < 0.0)
            v.push_back("member " + std::to_string(i) + ": permanent UDL must be >= 0");
    for (std::size_t i = 0; i < sys.variable_udl.size(); ++i)
        if (sys.variable_udl[i] < 0.0)
            v.push_back("member " + std::to_string(i) + ": variable UDL must be >= 0");
    for (std::size_t i = 0; i < sys.sections.size(); ++i)
        if (!sys.sections[i].empty() && cat.find(sys.sections[i]) < 0)
            v.push_back("member " + std::to_string(i) + ": section '" + sys.sections[i] +
                        "' not in catalog");
    return v;
}

std::string bits_string(const LoadArrangement& arr) {
    std::string s;
    s.reserve(arr.activation.size());
    for (auto b : arr.activation) s.push_back(b ? '1' : '0');
    return s;
}

LoadArrangement arrangement_from_bits(const std::string& bits) {
    if (bits.empty()) throw ValidationError("arrangement bits must not be empty");
    LoadArrangement arr;
    arr.activation.reserve(bits.size());
    for (char c : bits) {
        if (c != '0' && c != '1')
            throw ValidationError("arrangement bits must be 0/1, got '" + bits + "'");
        arr.activation.push_back(c == '1' ? 1 : 0);
    }
    return arr;
}

double factored_udl(const BeamSystem& sys, int member, const LoadArrangement& arr,
                    const LoadCombination& combo, double self_weight) {
    if (member < 0 || member >= sys.member_count())
        throw ValidationError("member index " + std::to_string(member) + " out of range");
    if (static_cast<int>(arr.activation.size()) != sys.member_count())
        throw ValidationError("arrangement length does not match member count");
    double g = sys.permanent_udl[member] + self_weight;
    double q = sys.variable_udl[member] * (arr.activation[member] ? 1.0 : 0.0);
    return combo.gamma_permanent * g + combo.gamma_variable * q;
}

}  // namespace iz
