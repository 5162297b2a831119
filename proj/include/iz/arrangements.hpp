#pragma once

#include <cstddef>
#include <vector>

#include "iz/model.hpp"

namespace iz {

enum class ArrangementKind { flexural, shear, critical, naive };

struct ArrangementSet {
    std::vector<LoadArrangement> arrangements;  // ordered, no duplicates
    ArrangementKind kind = ArrangementKind::flexural;

    std::size_t size() const { return arrangements.size(); }
};

// Alternating arrangement, the m-1 adjacent-pair arrangements, and the
// elementwise complement of each. Size is exactly 2m.
ArrangementSet flexural_set(int m);

// Span limit below which shear stiffness can dominate and flip downstream
// polarity: sqrt(6 * (E/G) * max(Iyy/Avz)). Catalog-wide maxima, so the
// answer does not depend on which sections end up assigned.
double shear_span_limit(const Material& mat, const SectionCatalog& cat);

// member indices with span < shear_span_limit
std::vector<int> shear_susceptible(const BeamSystem& sys, const Material& mat,
                                   const SectionCatalog& cat);

// Walk outward from `start` in both directions, rewriting the pattern as it
// crosses shear beams: activation is copied through a run of shear beams plus
// one member past it, then alternation resumes until the next shear beam
// re-arms the copy. Pure function; the input is not modified.
LoadArrangement shear_transform(const LoadArrangement& arrangement,
                                const std::vector<int>& shear_beams, int start);

struct ShearSetStats {
    std::size_t raw_outputs = 0;
    std::size_t unique_outputs = 0;  // after dedup and removal of flexural members
};

// Transform every adjacent-type arrangement (the 2(m-1) adjacents and their
// complements, start = left index of the pair) over every non-empty subset of
// shear_beams. Deduplicated first-seen; arrangements already in the flexural
// set are dropped. Size is bounded by 2(m-1)(2^n - 1).
// full_sweep additionally walks from every start index (research use).
ArrangementSet shear_set(int m, const ArrangementSet& flexural,
                         const std::vector<int>& shear_beams, bool full_sweep = false,
                         ShearSetStats* stats = nullptr);

// flexural arrangements first, then shear; deduplicated
ArrangementSet critical_set(const ArrangementSet& flexural, const ArrangementSet& shear);

// convenience: flexural + shear for this system's susceptible members
ArrangementSet critical_set(const BeamSystem& sys, const Material& mat,
                            const SectionCatalog& cat);

// All 2^m binary vectors, flexural block first, remainder in ascending binary
// order (bit i = member i). Guarded at m <= 20.
ArrangementSet naive_set(int m);

// index,kind,bits
void write_arrangement_csv(const ArrangementSet& set, std::ostream& out);

}  // namespace iz
