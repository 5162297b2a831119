#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace iz {

// Error categories, mapped to CLI exit codes (2 input, 3 numerical, 4 infeasible).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleDesign : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Material {
    double elastic_modulus = 0.0;   // Pa
    double shear_modulus = 0.0;     // Pa
    double yield_strength = 0.0;    // Pa
    double unit_weight = 0.0;       // N/m^3
};

// S355 rolled steel: E = 210 GPa, G = E/2.6, fy = 355 MPa
Material default_material();

// empty iff all fields positive and E/G within [2, 3]
std::vector<std::string> validate_material(const Material& mat);

struct SteelSection {
    std::string designation;
    double depth = 0.0;                  // m
    double mass_per_length = 0.0;        // kg/m
    double second_moment_major = 0.0;    // m^4
    double plastic_modulus_major = 0.0;  // m^3
    double shear_area_major = 0.0;       // m^2
    double cross_area = 0.0;             // m^2

    double self_weight() const;          // kN/m
};

struct SectionCatalog {
    // ascending (depth, plastic modulus, mass, designation)
    std::vector<SteelSection> sections;
    // max Iyy/Avz over the catalog, m^2; feeds the shear span limit
    double max_shear_ratio = 0.0;

    std::size_t size() const { return sections.size(); }
    const SteelSection& at(std::size_t i) const { return sections[i]; }
    // index of a designation, -1 when absent
    int find(const std::string& designation) const;
};

// Header: designation,mass_kg_m,depth_mm,Iyy_cm4,Wply_cm3,Avz_cm2,A_cm2
// Converts to SI, sorts, rejects duplicates and non-positive values.
SectionCatalog load_catalog_csv(const std::string& path);

// $IZ_CATALOG when set, otherwise the bundled data file
std::string default_catalog_path();

struct BeamSystem {
    std::vector<double> spans;           // m
    std::vector<double> permanent_udl;   // kN/m, excluding self-weight
    std::vector<double> variable_udl;    // kN/m
    // designation per member, "" = unassigned; empty vector = none assigned
    std::vector<std::string> sections;

    int member_count() const { return static_cast<int>(spans.size()); }
    bool sections_assigned() const;
};

// {"spans":[...], "permanent_udl":[...], "variable_udl":[...], "sections":[...|null]}
BeamSystem system_from_json(const std::string& path);
void system_to_json(const BeamSystem& sys, const std::string& path);

// catalog index per member; throws ValidationError on unknown or missing sections
std::vector<int> resolve_sections(const BeamSystem& sys, const SectionCatalog& cat);

// empty list iff the system is well formed and all assigned sections exist
std::vector<std::string> validate_system(const BeamSystem& sys, const SectionCatalog& cat);

struct LoadArrangement {
    std::vector<std::uint8_t> activation;  // 0/1 per member

    bool operator==(const LoadArrangement&) const = default;
};

std::string bits_string(const LoadArrangement& arr);
LoadArrangement arrangement_from_bits(const std::string& bits);

struct LoadCombination {
    double gamma_permanent = 1.35;
    double gamma_variable = 1.5;
};

// gamma_G*(G_k + self_weight) + gamma_Q*Q_k*activation, kN/m.
// Permanent load is always active; only the variable part is patterned.
double factored_udl(const BeamSystem& sys, int member, const LoadArrangement& arr,
                    const LoadCombination& combo, double self_weight);

}  // namespace iz
