#include "iz/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace iz {

namespace fs = std::filesystem;

namespace {

std::string sys_stem(int id) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "sys_%05d", id);
    return buf;
}

void validate_config(const DesignSetConfig& c) {
    if (c.members < 1) throw ValidationError("member count must be at least 1");
    if (c.span_step <= 0 || c.q_step <= 0) throw ValidationError("lattice steps must be positive");
    if (c.span_min <= 0) throw ValidationError("spans must be positive");
    if (c.q_min < 0) throw ValidationError("variable load must be non-negative");
    if (c.g_base < 0) throw ValidationError("permanent load must be non-negative");
    if (c.span_max < c.span_min || c.q_max < c.q_min)
        throw ValidationError("range upper bound below lower bound");
    if (!c.grid && (c.span_samples < 1 || c.q_samples < 1))
        throw ValidationError("sample counts must be at least 1");
}

// write-then-rename so a crash never leaves a half-written checkpoint
void atomic_write(const fs::path& target, const std::string& content) {
    fs::path tmp = target;
    tmp += ".partial";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw SolverError("cannot write " + tmp.string());
        f << content;
        if (!f.flush()) throw SolverError("cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
}

struct SystemOutcome {
    bool failed = false;
    std::string reason;
    std::vector<ZoneResult> zones;
    std::vector<DesignRow> designs;
};

bool eps_matches(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

// returns false when nothing (or something inconsistent) is stored, in which
// case the system is recomputed and the files rewritten
bool load_checkpoint(const fs::path& dir, int id, const std::vector<double>& eps_grid,
                     SystemOutcome& out) {
    const fs::path failed = dir / (sys_stem(id) + ".failed");
    if (fs::exists(failed)) {
        std::ifstream f(failed);
        std::string reason((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        while (!reason.empty() && (reason.back() == '\n' || reason.back() == '\r'))
            reason.pop_back();
        out.failed = true;
        out.reason = reason.empty() ? "design failed" : reason;
        return true;
    }

    const fs::path zpath = dir / (sys_stem(id) + "_zones.csv");
    const fs::path dpath = dir / (sys_stem(id) + "_design.csv");
    if (!fs::exists(zpath) || !fs::exists(dpath)) return false;

    try {
        std::ifstream zf(zpath);
        auto rows = read_zone_csv(zf);
        if (rows.empty()) return false;

        std::vector<ZoneResult> zones;
        for (const auto& row : rows) {
            if (row.beam_index == static_cast<int>(zones.size())) {
                ZoneResult r;
                r.system_id = row.system_id;
                r.beam_index = row.beam_index;
                r.u_true = row.u_true;
                r.k_max.assign(eps_grid.size(), -1);
                zones.push_back(std::move(r));
            }
            if (zones.empty() || row.beam_index != zones.back().beam_index) return false;
            std::size_t e = 0;
            for (; e < eps_grid.size(); ++e)
                if (eps_matches(eps_grid[e], row.eps)) break;
            if (e == eps_grid.size()) return false;  // different threshold grid
            zones.back().k_max[e] = row.k_max;
        }
        for (const auto& z : zones)
            for (int k : z.k_max)
                if (k < 0) return false;

        std::ifstream df(dpath);
        auto designs = read_design_csv(df);
        if (designs.size() != zones.size()) return false;

        out.zones = std::move(zones);
        out.designs = std::move(designs);
        return true;
    } catch (const ValidationError&) {
        return false;  // unreadable checkpoint, recompute
    }
}

void store_checkpoint(const fs::path& dir, int id, const std::vector<double>& eps_grid,
                      const SystemOutcome& out) {
    std::ostringstream z;
    write_zone_csv(z, out.zones, eps_grid);
    atomic_write(dir / (sys_stem(id) + "_zones.csv"), z.str());
    std::ostringstream d;
    write_design_csv(d, out.designs);
    atomic_write(dir / (sys_stem(id) + "_design.csv"), d.str());
}

// exhaustive enumeration with the explicit critical set as its prefix;
// bit i of the pattern counter is member i
ArrangementSet ordered_full_set(int m, const ArrangementSet& critical) {
    ArrangementSet full;
    full.kind = ArrangementKind::naive;
    std::set<std::vector<std::uint8_t>> seen;
    for (const auto& a : critical.arrangements)
        if (seen.insert(a.activation).second) full.arrangements.push_back(a);
    const std::uint32_t total = 1u << m;
    for (std::uint32_t mask = 0; mask < total; ++mask) {
        LoadArrangement a;
        a.activation.resize(m);
        for (int i = 0; i < m; ++i) a.activation[i] = (mask >> i) & 1u;
        if (seen.insert(a.activation).second) full.arrangements.push_back(std::move(a));
    }
    return full;
}

// runs fn(i) over [0, n) on `jobs` threads; first non-skip exception aborts
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    const int nt = std::max(1, std::min<int>(jobs, static_cast<int>(n ? n : 1)));
    if (nt == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> fatal{false};
    std::exception_ptr first_error;
    std::mutex error_mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || fatal.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(error_mu);
                if (!fatal.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

DesignSetConfig preset_config(int set_id, std::uint64_t seed, int span_samples, int q_samples) {
    DesignSetConfig c;
    c.set_id = set_id;
    c.seed = seed;
    c.members = 15;
    c.span_samples = span_samples;
    c.q_samples = q_samples;
    switch (set_id) {
        case 1:
            c.grid = true;
            c.uniform_per_system = true;
            c.span_min = 1.0;
            c.span_max = 12.0;
            c.q_min = 0.0;
            c.q_max = 60.0;
            break;
        case 2:
            c.span_min = 4.0;
            c.span_max = 8.0;
            c.q_min = 20.0;
            c.q_max = 40.0;
            break;
        case 3:
            c.span_min = 2.0;
            c.span_max = 10.0;
            c.q_min = 10.0;
            c.q_max = 50.0;
            break;
        case 4:
            c.span_min = 1.0;
            c.span_max = 12.0;
            c.q_min = 0.0;
            c.q_max = 60.0;
            break;
        default:
            throw ValidationError("preset set id must be 1..4");
    }
    return c;
}

DesignSetConfig stress_test_config(std::uint64_t seed, int span_samples, int q_samples) {
    DesignSetConfig c;
    c.set_id = 0;
    c.seed = seed;
    c.members = 10;
    c.span_min = 1.0;
    c.span_max = 12.0;
    c.q_min = 200.0;
    c.q_max = 400.0;
    c.span_samples = span_samples;
    c.q_samples = q_samples;
    return c;
}

std::vector<double> lattice_values(double lo, double hi, double step) {
    if (step <= 0) throw ValidationError("lattice step must be positive");
    if (hi < lo) throw ValidationError("lattice range is empty");
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + i * step;
    return v;
}

std::vector<BeamSystem> generate(const DesignSetConfig& config) {
    validate_config(config);
    const int m = config.members;
    const auto spans = lattice_values(config.span_min, config.span_max, config.span_step);
    const auto qs = lattice_values(config.q_min, config.q_max, config.q_step);

    auto make_system = [&](const std::vector<double>& span_vec, const std::vector<double>& q_vec) {
        BeamSystem sys;
        sys.spans = span_vec;
        sys.variable_udl = q_vec;
        sys.permanent_udl.assign(m, config.g_base);
        return sys;
    };

    std::vector<BeamSystem> out;
    if (config.grid) {
        out.reserve(spans.size() * qs.size());
        for (double s : spans)
            for (double q : qs)
                out.push_back(make_system(std::vector<double>(m, s), std::vector<double>(m, q)));
        return out;
    }

    std::mt19937_64 rng(config.seed);
    auto draw_vector = [&](const std::vector<double>& lattice) {
        std::vector<double> v(m);
        if (config.uniform_per_system) {
            v.assign(m, lattice[rng() % lattice.size()]);
        } else {
            for (int i = 0; i < m; ++i) v[i] = lattice[rng() % lattice.size()];
        }
        return v;
    };

    std::vector<std::vector<double>> span_draws(config.span_samples);
    for (auto& v : span_draws) v = draw_vector(spans);
    std::vector<std::vector<double>> q_draws(config.q_samples);
    for (auto& v : q_draws) v = draw_vector(qs);

    out.reserve(span_draws.size() * q_draws.size());
    for (const auto& sv : span_draws)
        for (const auto& qv : q_draws) out.push_back(make_system(sv, qv));
    return out;
}

void write_dataset(const fs::path& dir, const DesignSetConfig& config,
                   const std::vector<BeamSystem>& systems) {
    fs::create_directories(dir);
    std::ostringstream manifest;
    manifest << "system_id,set_id,seed";
    const int m = config.members;
    for (int i = 0; i < m; ++i) manifest << ",span_" << i;
    for (int i = 0; i < m; ++i) manifest << ",Q_" << i;
    manifest << '\n';

    char buf[32];
    for (std::size_t id = 0; id < systems.size(); ++id) {
        const BeamSystem& sys = systems[id];
        system_to_json(sys, (dir / (sys_stem(static_cast<int>(id)) + ".json")).string());
        manifest << id << ',' << config.set_id << ',' << config.seed;
        for (double s : sys.spans) {
            std::snprintf(buf, sizeof buf, ",%g", s);
            manifest << buf;
        }
        for (double q : sys.variable_udl) {
            std::snprintf(buf, sizeof buf, ",%g", q);
            manifest << buf;
        }
        manifest << '\n';
    }
    atomic_write(dir / "manifest.csv", manifest.str());
}

std::vector<BeamSystem> load_dataset(const fs::path& dir) {
    std::vector<BeamSystem> systems;
    for (int id = 0;; ++id) {
        const fs::path p = dir / (sys_stem(id) + ".json");
        if (!fs::exists(p)) break;
        systems.push_back(system_from_json(p.string()));
    }
    if (systems.empty()) throw ValidationError("no systems found in " + dir.string());
    return systems;
}

void write_design_csv(std::ostream& out, const std::vector<DesignRow>& rows) {
    out << "system_id,beam_index,designation,u_true\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, ",%.17g\n", r.u_true);
        out << r.system_id << ',' << r.beam_index << ',' << r.designation << buf;
    }
}

std::vector<DesignRow> read_design_csv(std::istream& in) {
    std::vector<DesignRow> rows;
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty design file");
    if (trim(line) != "system_id,beam_index,designation,u_true")
        throw ValidationError("unexpected design header: " + trim(line));
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::istringstream ss(line);
        std::string f;
        DesignRow r;
        try {
            std::getline(ss, f, ',');
            r.system_id = std::stoi(f);
            std::getline(ss, f, ',');
            r.beam_index = std::stoi(f);
            std::getline(ss, r.designation, ',');
            std::getline(ss, f, ',');
            r.u_true = std::stod(f);
        } catch (const std::exception&) {
            throw ValidationError("bad design row at line " + std::to_string(lineno));
        }
        if (r.designation.empty())
            throw ValidationError("bad design row at line " + std::to_string(lineno));
        rows.push_back(std::move(r));
    }
    return rows;
}

StudyResult run_study(const std::vector<BeamSystem>& systems, const SectionCatalog& catalog,
                      const Material& material, const LoadCombination& combo,
                      const std::vector<double>& eps_grid, const StudyOptions& options) {
    if (eps_grid.empty()) throw ValidationError("empty threshold grid");
    const bool checkpoints = !options.checkpoint_dir.empty();
    if (checkpoints) fs::create_directories(options.checkpoint_dir);

    std::vector<SystemOutcome> outcomes(systems.size());

    parallel_for(systems.size(), options.jobs, [&](std::size_t i) {
        const int id = static_cast<int>(i);
        SystemOutcome& out = outcomes[i];
        if (checkpoints && load_checkpoint(options.checkpoint_dir, id, eps_grid, out)) return;
        try {
            const BeamSystem& sys = systems[i];
            auto arrangements = critical_set(sys, material, catalog);
            auto design = design_system(sys, catalog, material, combo, arrangements);
            out.zones = zone_results(design.tables, id, eps_grid);
            out.designs.reserve(sys.member_count());
            // take u_true from the curve so both CSVs agree to the last bit
            for (int d = 0; d < sys.member_count(); ++d)
                out.designs.push_back(
                    {id, d, design.designed.sections[d], out.zones[d].u_true});
            if (checkpoints) store_checkpoint(options.checkpoint_dir, id, eps_grid, out);
        } catch (const InfeasibleDesign& e) {
            out.failed = true;
            out.reason = e.what();
            out.zones.clear();
            out.designs.clear();
            if (checkpoints)
                atomic_write(options.checkpoint_dir / (sys_stem(id) + ".failed"),
                             out.reason + "\n");
        }
    });

    StudyResult res;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        auto& out = outcomes[i];
        if (out.failed) {
            res.skipped.emplace_back(static_cast<int>(i), out.reason);
            continue;
        }
        for (auto& z : out.zones) res.zones.push_back(std::move(z));
        for (auto& d : out.designs) res.designs.push_back(std::move(d));
    }
    res.designed_systems = systems.size() - res.skipped.size();
    return res;
}

ContainmentReport validate_containment(const DesignSetConfig& config,
                                       const SectionCatalog& catalog, const Material& material,
                                       const LoadCombination& combo, int jobs) {
    if (config.members > 12)
        throw ValidationError("exhaustive validation is capped at 12 members");
    auto systems = generate(config);

    struct Slot {
        bool skipped = false;
        std::vector<ContainmentRow> rows;
    };
    std::vector<Slot> slots(systems.size());

    parallel_for(systems.size(), jobs, [&](std::size_t i) {
        const BeamSystem& sys = systems[i];
        const int m = sys.member_count();
        auto susceptible = shear_susceptible(sys, material, catalog);
        const int n = static_cast<int>(susceptible.size());
        auto critical = critical_set(sys, material, catalog);
        // clamped selection keeps over-catalog members at the deepest section,
        // so every generated beam contributes to the containment count
        BeamSystem designed = design_system(sys, catalog, material, combo, critical,
                                            SelectionPolicy::clamp_to_largest)
                                  .designed;
        auto full = ordered_full_set(m, critical);
        auto tables = build_tables(designed, catalog, material, combo, full);
        for (int d = 0; d < m; ++d) {
            ContainmentRow row;
            row.system_id = static_cast<int>(i);
            row.beam_index = d;
            row.shear_count = n;
            row.winner_index = governing_case(tables, d).arrangement;
            row.critical_size = critical.size();
            row.contained = row.winner_index < static_cast<long>(critical.size());
            slots[i].rows.push_back(row);
        }
    });

    ContainmentReport rep;
    for (const auto& s : slots) {
        if (s.skipped) {
            ++rep.skipped_systems;
            continue;
        }
        for (const auto& r : s.rows) {
            ++rep.beams;
            if (r.contained) ++rep.contained;
            rep.rows.push_back(r);
        }
    }
    std::sort(rep.rows.begin(), rep.rows.end(), [](const ContainmentRow& a,
                                                   const ContainmentRow& b) {
        if (a.shear_count != b.shear_count) return a.shear_count < b.shear_count;
        if (a.winner_index != b.winner_index) return a.winner_index < b.winner_index;
        if (a.system_id != b.system_id) return a.system_id < b.system_id;
        return a.beam_index < b.beam_index;
    });
    return rep;
}

void write_containment_csv(std::ostream& out, const ContainmentReport& report) {
    out << "example_rank,arrangement_index,shear_count,system_id,beam_index,contained,"
           "critical_size\n";
    std::size_t rank = 0;
    for (const auto& r : report.rows) {
        out << rank++ << ',' << r.winner_index << ',' << r.shear_count << ',' << r.system_id
            << ',' << r.beam_index << ',' << (r.contained ? 1 : 0) << ',' << r.critical_size
            << '\n';
    }
}

}  // namespace iz
