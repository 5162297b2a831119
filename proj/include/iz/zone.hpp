#pragma once

#include <iosfwd>
#include <vector>

#include "iz/design.hpp"

namespace iz {

// Utilisation of one design beam as the design window grows. Entry k holds
// the utilisation when only members [d-k, d+k] contribute load; the last
// entry always equals the full-system value, so ratios end at exactly 1.
struct CapturedCurve {
    int design_beam = 0;
    std::vector<double> utilisations;  // u_cap for k = 0..m
    std::vector<double> ratios;        // u_cap / u_true
    double u_true = 0.0;
};

// Curve for design beam d from prebuilt system tables. The window sum is
// evaluated incrementally: each k adds at most two member columns.
CapturedCurve captured_curve(const SystemTables& tables, int d);

// Convenience form that builds the tables first.
CapturedCurve captured_curve(const BeamSystem& designed, int d, const SectionCatalog& catalog,
                             const Material& material, const LoadCombination& combo,
                             const ArrangementSet& arrangements);

// Smallest k whose whole suffix stays within eps_max of ratio 1. Curves can
// oscillate back out of the band, so this is not the first crossing.
int extract_k_max(const CapturedCurve& curve, double eps_max);

// First k within the band, ignoring later excursions. Kept as the reference
// for how much the naive rule underestimates.
int first_crossing_k(const CapturedCurve& curve, double eps_max);

struct ZoneResult {
    int system_id = 0;
    int beam_index = 0;
    std::vector<int> k_max;  // one entry per threshold in the eps grid
    double u_true = 0.0;
};

// k_max across the eps grid for every member of one designed system
std::vector<ZoneResult> zone_results(const SystemTables& tables, int system_id,
                                     const std::vector<double>& eps_grid);

struct ZoneStats {
    double eps = 0.0;
    double mean_k = 0.0;
    int max_k = 0;
    std::size_t count = 0;              // beams aggregated
    std::vector<std::size_t> histogram; // index k, counts
};

// Aggregate per threshold. Every result must carry one k_max per grid entry.
std::vector<ZoneStats> zone_statistics(const std::vector<ZoneResult>& results,
                                       const std::vector<double>& eps_grid);

// Thresholds used throughout: 0.1%, 0.5%, 1%, 5%, 10%, 20%, 50%.
std::vector<double> default_eps_grid();

// Results CSV: system_id,beam_index,eps,k_max,u_true (one row per threshold).
void write_zone_csv(std::ostream& out, const std::vector<ZoneResult>& results,
                    const std::vector<double>& eps_grid);

// Flat row form of the results CSV, for re-aggregation.
struct ZoneRow {
    int system_id = 0;
    int beam_index = 0;
    double eps = 0.0;
    int k_max = 0;
    double u_true = 0.0;
};

std::vector<ZoneRow> read_zone_csv(std::istream& in);

// Stats over parsed rows, grouped by threshold, ascending eps.
std::vector<ZoneStats> stats_from_rows(const std::vector<ZoneRow>& rows);

// Summary CSV: eps,mean_k,max_k,count. Histogram CSV: k,count,share.
void write_stats_csv(std::ostream& out, const std::vector<ZoneStats>& stats);
void write_histogram_csv(std::ostream& out, const ZoneStats& stats);

}  // namespace iz
