#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <vector>

#include "iz/model.hpp"

namespace iz {

inline constexpr int kStationCount = 11;

struct StationGrid {
    int design_beam = 0;
    std::array<double, kStationCount> stations{};  // normalized abscissae 0..1
};

StationGrid station_grid(int design_beam);

// Exact 2-node Timoshenko bending element in SI units (N, m).
// DOFs (v1, th1, v2, th2); v up and theta counterclockwise positive.
// Shear parameter phi = 12EI/(GAz L^2); phi -> 0 recovers Euler-Bernoulli.
Eigen::Matrix4d element_stiffness(double E, double I, double GAz, double L);

// Consistent nodal loads of a downward UDL w on a clamped member:
// [-wL/2, -wL^2/12, -wL/2, +wL^2/12]. Independent of phi.
Eigen::Vector4d fixed_end_forces(double w, double L, double phi);

struct SolveResult {
    // [v0, th0, v1, th1, ...]; m and rad
    Eigen::VectorXd displacements;
    // per member (p1, m1, p2, m2) = Ke*ue - feq, kN and kN*m
    std::vector<Eigen::Vector4d> end_forces;
};

// Continuous beam with a vertical support at every node, rotations free.
// udl is downward, kN/m per member. Forces come back in kN / kN*m.
SolveResult solve(const BeamSystem& sys, const SectionCatalog& cat, const Material& mat,
                  const std::vector<double>& udl);

// M (sagging positive) and V at the 11 stations of one member, recovered from
// its end forces and the local UDL: V(x) = p1 - w*x, M(x) = p1*x - m1 - w*x^2/2.
void member_station_forces(const Eigen::Vector4d& end_forces, double span, double udl,
                           Eigen::Ref<Eigen::Matrix<double, kStationCount, 1>> M,
                           Eigen::Ref<Eigen::Matrix<double, kStationCount, 1>> V);

struct ResponseTable {
    int design_beam = 0;
    // column i: response at the stations of the design beam to a unit UDL
    // (1 kN/m) on member i alone; kN*m and kN
    Eigen::Matrix<double, kStationCount, Eigen::Dynamic> moment_unit;
    Eigen::Matrix<double, kStationCount, Eigen::Dynamic> shear_unit;
};

// One unit-UDL solve per member fills column i of every design beam's table.
std::vector<ResponseTable> response_tables(const BeamSystem& sys, const SectionCatalog& cat,
                                           const Material& mat);
ResponseTable response_table(const BeamSystem& sys, const SectionCatalog& cat,
                             const Material& mat, int design_beam, const StationGrid& grid);

enum class Quantity { moment, shear };

struct PolaritySequence {
    int design_beam = 0;
    int station = 0;
    Quantity quantity = Quantity::moment;
    std::vector<int> signs;  // -1 / 0 / +1 per member
};

// Elementwise sign of a table row; |entry| below 1e-10 * max|table| maps to 0.
PolaritySequence polarity_sequence(const ResponseTable& table, int station, Quantity q);

// station,member,M_unit,V_unit
void write_response_csv(const ResponseTable& table, std::ostream& out);

// Nodal rotations under a unit moment (1 kN*m, ccw) at one node. Used for
// reciprocity checks; the flexibility entries must come out symmetric.
Eigen::VectorXd rotations_under_nodal_moment(const BeamSystem& sys, const SectionCatalog& cat,
                                             const Material& mat, int node);

// Same solve with each member meshed into `subdivisions` sub-elements and the
// interior sub-nodes left free. The element is exact under UDL, so station
// forces must not depend on this. Testing hook, not used by the pipeline.
void subdivided_station_forces(const BeamSystem& sys, const SectionCatalog& cat,
                               const Material& mat, const std::vector<double>& udl,
                               int subdivisions, Eigen::MatrixXd& M, Eigen::MatrixXd& V);

}  // namespace iz
