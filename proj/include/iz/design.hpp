#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "iz/arrangements.hpp"
#include "iz/model.hpp"
#include "iz/solver.hpp"

namespace iz {

struct Resistances {
    double moment_resistance = 0.0;  // kN*m
    double shear_resistance = 0.0;   // kN
};

// plastic resistances: Wpl*fy/gamma_M0 and Avz*fy/(sqrt(3)*gamma_M0)
Resistances resistances(const SteelSection& sec, const Material& mat, double gamma_m0 = 1.0);

// Cross-section check. Bending and shear ratios, with the moment resistance
// reduced by (1 - rho), rho = (2|V|/Vrd - 1)^2, when |V| exceeds half the
// shear resistance. Signs of M and V do not matter.
double utilisation(double M, double V, const Resistances& r);

// Everything needed to evaluate any member under any arrangement by
// superposition: unit response tables, factored UDL matrix, resistances.
// Built once per section assignment and shared by the design iteration,
// the brute-force validation and the influence-zone curves.
struct SystemTables {
    int m = 0;
    std::vector<double> self_weight;  // kN/m per member
    std::vector<Eigen::Matrix<double, kStationCount, Eigen::Dynamic>> moment_unit;
    std::vector<Eigen::Matrix<double, kStationCount, Eigen::Dynamic>> shear_unit;
    Eigen::MatrixXd factored;         // p x m, kN/m
    std::vector<Resistances> resist;  // per member
};

SystemTables build_tables(const BeamSystem& sys, const SectionCatalog& cat,
                          const Material& mat, const LoadCombination& combo,
                          const ArrangementSet& arrangements);

struct GoverningCase {
    double u = 0.0;
    int arrangement = 0;
    int station = 0;
};

// max utilisation of member d over all stations and arrangements; ties go to
// the lowest arrangement index, then the lowest station
GoverningCase governing_case(const SystemTables& t, int d);

struct DesignResult {
    std::vector<int> section_index;          // into the catalog
    std::vector<double> u_true;              // governing utilisation per member
    std::vector<int> governing_arrangement;  // into the arrangement set used
    std::vector<int> governing_station;
    int iterations = 0;
    BeamSystem designed;   // input system with designations filled in
    SystemTables tables;   // final-pass tables, reused by the zone evaluation
};

// strict: a member no section satisfies is a design failure. clamp_to_largest
// assigns the last catalog entry instead and accepts utilisations above 1;
// the governing-arrangement search stays meaningful on loads beyond the
// catalog, which is what the exhaustive validation runs on.
enum class SelectionPolicy { strict, clamp_to_largest };

// Minimum-depth selection: per member, the first catalog section (ascending
// depth/capacity order) whose utilisation stays <= 1 under every arrangement,
// iterated with self-weight to a fixed point. Throws InfeasibleDesign when
// even the largest section fails (strict policy only).
DesignResult design_system(const BeamSystem& sys, const SectionCatalog& cat,
                           const Material& mat, const LoadCombination& combo,
                           const ArrangementSet& arrangements,
                           SelectionPolicy policy = SelectionPolicy::strict);

// Winner index into naive_set(m) per member, on a system with sections
// already assigned. Guarded at m <= 12.
std::vector<int> brute_force_critical(const BeamSystem& designed, const SectionCatalog& cat,
                                      const Material& mat, const LoadCombination& combo);

// per-member designation, u_true, governing arrangement bits and station
void write_design_json(const DesignResult& result, const ArrangementSet& arrangements,
                       std::ostream& out);

}  // namespace iz
