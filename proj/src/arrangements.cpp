#include "iz/arrangements.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_set>

namespace iz {

namespace {

const char* kind_name(ArrangementKind k) {
    switch (k) {
        case ArrangementKind::flexural: return "flexural";
        case ArrangementKind::shear: return "shear";
        case ArrangementKind::critical: return "critical";
        case ArrangementKind::naive: return "naive";
    }
    return "?";
}

// set membership working on the raw bit vectors
struct BitsHash {
    std::size_t operator()(const std::vector<std::uint8_t>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (auto b : v) {
            h ^= b;
            h *= 1099511628211ull;
        }
        return h;
    }
};
using BitsSet = std::unordered_set<std::vector<std::uint8_t>, BitsHash>;

BitsSet to_bits_set(const ArrangementSet& set) {
    BitsSet s;
    s.reserve(set.size() * 2);
    for (const auto& a : set.arrangements) s.insert(a.activation);
    return s;
}

std::vector<std::uint8_t> complement(const std::vector<std::uint8_t>& v) {
    std::vector<std::uint8_t> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] ? 0 : 1;
    return out;
}

}  // namespace

ArrangementSet flexural_set(int m) {
    if (m < 1) throw ValidationError("flexural_set requires m >= 1");
    std::vector<std::vector<std::uint8_t>> pos;

    // alternating pattern starting loaded
    std::vector<std::uint8_t> alt(m);
    for (int i = 0; i < m; ++i) alt[i] = (i % 2 == 0) ? 1 : 0;
    pos.push_back(alt);

    // adjacent pair at (i, i+1); alternation runs outward on both sides so
    // that the immediate neighbours of the pair are unloaded
    for (int i = 0; i + 1 < m; ++i) {
        std::vector<std::uint8_t> arr(m);
        arr[i] = arr[i + 1] = 1;
        for (int k = i - 1; k >= 0; --k) arr[k] = arr[k + 1] ? 0 : 1;
        for (int k = i + 2; k < m; ++k) arr[k] = arr[k - 1] ? 0 : 1;
        pos.push_back(arr);
    }

    ArrangementSet set;
    set.kind = ArrangementKind::flexural;
    set.arrangements.reserve(2 * m);
    for (auto& v : pos) set.arrangements.push_back({v});
    for (auto& v : pos) set.arrangements.push_back({complement(v)});
    return set;
}

double shear_span_limit(const Material& mat, const SectionCatalog& cat) {
    if (cat.size() == 0) throw ValidationError("shear_span_limit needs a catalog");
    return std::sqrt(6.0 * (mat.elastic_modulus / mat.shear_modulus) * cat.max_shear_ratio);
}

std::vector<int> shear_susceptible(const BeamSystem& sys, const Material& mat,
                                   const SectionCatalog& cat) {
    const double limit = shear_span_limit(mat, cat);
    std::vector<int> out;
    for (int i = 0; i < sys.member_count(); ++i)
        if (sys.spans[i] < limit) out.push_back(i);
    return out;
}

LoadArrangement shear_transform(const LoadArrangement& arrangement,
                                const std::vector<int>& shear_beams, int start) {
    const int m = static_cast<int>(arrangement.activation.size());
    if (start < 0 || start >= m) throw ValidationError("shear_transform start out of range");

    std::vector<std::uint8_t> arr = arrangement.activation;
    auto is_shear = [&](int i) {
        return std::find(shear_beams.begin(), shear_beams.end(), i) != shear_beams.end();
    };

    for (int direction : {-1, 1}) {
        bool updating = false;   // inside a run of shear beams, copying through
        bool finishing = false;  // run has ended, back to alternation
        std::uint8_t update_act = 0;
        int i = start;
        while (true) {
            i += direction;
            if (i < 0 || i >= m) break;
            if (!updating && !finishing) {
                // scanning: a shear beam arms the copy with its own activation
                if (is_shear(i)) {
                    updating = true;
                    update_act = arr[i];
                }
            } else if (updating) {
                // copy through the run and one member past it
                arr[i] = update_act;
                if (!is_shear(i)) {
                    updating = false;
                    finishing = true;
                }
            } else {
                // alternate off the previous member; a new shear beam re-arms
                arr[i] = arr[i - direction] ? 0 : 1;
                if (is_shear(i)) {
                    update_act = arr[i];
                    updating = true;
                    finishing = false;
                }
            }
        }
    }
    return {arr};
}

ArrangementSet shear_set(int m, const ArrangementSet& flexural,
                         const std::vector<int>& shear_beams, bool full_sweep,
                         ShearSetStats* stats) {
    ArrangementSet out;
    out.kind = ArrangementKind::shear;
    if (stats) *stats = {};
    if (shear_beams.empty()) return out;

    BitsSet flex_keys = to_bits_set(flexural);
    BitsSet seen;

    // adjacent-type arrangements live at positions 1..m-1 (pairs) and
    // m+1..2m-1 (their complements) of the flexural set
    const auto& flex = flexural.arrangements;
    const int n = static_cast<int>(shear_beams.size());

    // enumerate non-empty subsets of the susceptible members
    std::vector<int> subset;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        subset.clear();
        for (int b = 0; b < n; ++b)
            if (mask & (1u << b)) subset.push_back(shear_beams[b]);
        for (int idx = 0; idx + 1 < m; ++idx) {
            for (const LoadArrangement* base : {&flex[1 + idx], &flex[m + 1 + idx]}) {
                const int lo = full_sweep ? 0 : idx;
                const int hi = full_sweep ? m - 1 : idx;
                for (int s = lo; s <= hi; ++s) {
                    LoadArrangement t = shear_transform(*base, subset, s);
                    if (stats) ++stats->raw_outputs;
                    if (flex_keys.count(t.activation)) continue;
                    if (seen.insert(t.activation).second)
                        out.arrangements.push_back(std::move(t));
                }
            }
        }
    }
    if (stats) stats->unique_outputs = out.size();
    return out;
}

ArrangementSet critical_set(const ArrangementSet& flexural, const ArrangementSet& shear) {
    ArrangementSet out;
    out.kind = ArrangementKind::critical;
    out.arrangements.reserve(flexural.size() + shear.size());
    BitsSet seen;
    for (const auto* src : {&flexural, &shear})
        for (const auto& a : src->arrangements)
            if (seen.insert(a.activation).second) out.arrangements.push_back(a);
    return out;
}

ArrangementSet critical_set(const BeamSystem& sys, const Material& mat,
                            const SectionCatalog& cat) {
    auto flex = flexural_set(sys.member_count());
    auto shear = shear_set(sys.member_count(), flex, shear_susceptible(sys, mat, cat));
    return critical_set(flex, shear);
}

ArrangementSet naive_set(int m) {
    if (m < 1) throw ValidationError("naive_set requires m >= 1");
    if (m > 20) throw ValidationError("naive_set capped at m = 20 (2^m arrangements)");

    ArrangementSet out;
    out.kind = ArrangementKind::naive;
    out.arrangements.reserve(std::size_t{1} << m);

    auto flex = flexural_set(m);
    BitsSet seen;
    for (auto& a : flex.arrangements) {
        seen.insert(a.activation);
        out.arrangements.push_back(std::move(a));
    }
    for (std::uint32_t v = 0; v < (1u << m); ++v) {
        std::vector<std::uint8_t> bits(m);
        for (int i = 0; i < m; ++i) bits[i] = (v >> i) & 1u;
        if (!seen.count(bits)) out.arrangements.push_back({std::move(bits)});
    }
    return out;
}

void write_arrangement_csv(const ArrangementSet& set, std::ostream& out) {
    out << "index,kind,bits\n";
    for (std::size_t i = 0; i < set.size(); ++i)
        out << i << ',' << kind_name(set.kind) << ',' << bits_string(set.arrangements[i])
            << '\n';
}

}  // namespace iz
