#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "iz/zone.hpp"

namespace iz {

// one parametric design study: ranges with their discretization lattice,
// sample counts and the seed that makes a run reproducible
struct DesignSetConfig {
    int set_id = 0;  // 1..4 presets, 0 for custom configs
    int members = 15;
    double span_min = 1.0, span_max = 12.0, span_step = 0.5;  // m
    double q_min = 0.0, q_max = 60.0, q_step = 5.0;           // kN/m variable
    double g_base = 3.0;                                      // kN/m permanent
    int span_samples = 32, q_samples = 32;                    // ignored when grid
    std::uint64_t seed = 0;
    bool uniform_per_system = false;  // one span and one Q repeated over all members
    bool grid = false;                // enumerate the lattice instead of sampling
};

// Presets 1..4. Set 1 is the exhaustive uniform grid; 2..4 sample per member
// from progressively wider ranges.
DesignSetConfig preset_config(int set_id, std::uint64_t seed, int span_samples = 32,
                              int q_samples = 32);

// High-load configuration used to exercise the arrangement sets: 10 members,
// variable load 200..400 kN/m over the full span range.
DesignSetConfig stress_test_config(std::uint64_t seed, int span_samples = 8, int q_samples = 8);

// lo, lo+step, ... up to hi (hi included when it lands on the lattice)
std::vector<double> lattice_values(double lo, double hi, double step);

// Deterministic for a given config. Sampled sets draw all span vectors first,
// then all UDL vectors, and pair them as a full cross product; the system id
// is span_draw * q_samples + q_draw. Grid sets enumerate spans outer, Q inner.
std::vector<BeamSystem> generate(const DesignSetConfig& config);

// one JSON per system (sys_00000.json, ...) plus manifest.csv
void write_dataset(const std::filesystem::path& dir, const DesignSetConfig& config,
                   const std::vector<BeamSystem>& systems);
std::vector<BeamSystem> load_dataset(const std::filesystem::path& dir);

struct DesignRow {
    int system_id = 0;
    int beam_index = 0;
    std::string designation;
    double u_true = 0.0;
};

void write_design_csv(std::ostream& out, const std::vector<DesignRow>& rows);
std::vector<DesignRow> read_design_csv(std::istream& in);

struct StudyOptions {
    int jobs = 1;
    std::filesystem::path checkpoint_dir;  // empty disables checkpointing
};

struct StudyResult {
    std::vector<ZoneResult> zones;    // ordered by system, then beam
    std::vector<DesignRow> designs;   // same order
    std::vector<std::pair<int, std::string>> skipped;  // system id, reason
    std::size_t designed_systems = 0;
};

// Designs every system against its explicit critical arrangements, captures
// the window curves and extracts k_max over the grid. Infeasible systems are
// skipped and listed, never fatal. With a checkpoint directory, finished
// systems are written atomically and picked up again on the next run.
StudyResult run_study(const std::vector<BeamSystem>& systems, const SectionCatalog& catalog,
                      const Material& material, const LoadCombination& combo,
                      const std::vector<double>& eps_grid, const StudyOptions& options = {});

struct ContainmentRow {
    int system_id = 0;
    int beam_index = 0;
    int shear_count = 0;     // short-span members in this system
    long winner_index = 0;   // into the ordered exhaustive enumeration
    bool contained = false;  // winner sits inside the explicit critical prefix
    std::size_t critical_size = 0;
};

struct ContainmentReport {
    std::size_t beams = 0;
    std::size_t contained = 0;
    std::size_t skipped_systems = 0;
    std::vector<ContainmentRow> rows;  // sorted by shear_count, then winner index
    double rate() const {
        return beams ? static_cast<double>(contained) / static_cast<double>(beams) : 1.0;
    }
};

// Exhaustive check that every brute-force governing arrangement lies in the
// explicit set. Designs each generated system, then re-evaluates it against
// all 2^m arrangements ordered with the explicit set as a prefix.
ContainmentReport validate_containment(const DesignSetConfig& config,
                                       const SectionCatalog& catalog, const Material& material,
                                       const LoadCombination& combo, int jobs = 1);

// example_rank,arrangement_index,shear_count first, then provenance columns
void write_containment_csv(std::ostream& out, const ContainmentReport& report);

}  // namespace iz
