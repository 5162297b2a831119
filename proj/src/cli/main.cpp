#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iz/dataset.hpp"
#include "iz/report.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string catalog;
    std::string out;
    int jobs = 1;
};

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

iz::SectionCatalog open_catalog(const std::string& path) {
    return iz::load_catalog_csv(path.empty() ? iz::default_catalog_path() : path);
}

// output stream helper: file when a path is given, stdout otherwise
struct OutFile {
    std::ofstream file;
    std::ostream& stream(const std::string& path) {
        if (path.empty()) return std::cout;
        file.open(path, std::ios::binary | std::ios::trunc);
        if (!file) throw iz::ValidationError("cannot write " + path);
        return file;
    }
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw iz::ValidationError("cannot write " + path.string());
    f << text;
}

std::pair<int, int> parse_samples(const std::string& s) {
    const auto x = s.find_first_of("xX");
    if (x == std::string::npos || x == 0 || x + 1 == s.size())
        throw iz::ValidationError("samples must look like 8x8 (spans x UDL draws)");
    try {
        const int a = std::stoi(s.substr(0, x));
        const int b = std::stoi(s.substr(x + 1));
        if (a < 1 || b < 1) throw iz::ValidationError("sample counts must be positive");
        return {a, b};
    } catch (const iz::ValidationError&) {
        throw;
    } catch (const std::exception&) {
        throw iz::ValidationError("samples must look like 8x8 (spans x UDL draws)");
    }
}

std::vector<double> parse_eps(const std::string& list) {
    if (list.empty()) return iz::default_eps_grid();
    std::vector<double> out;
    std::istringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            const double e = std::stod(tok);
            if (e < 0) throw iz::ValidationError("thresholds must be non-negative");
            out.push_back(e);
        } catch (const iz::ValidationError&) {
            throw;
        } catch (const std::exception&) {
            throw iz::ValidationError("bad threshold: " + tok);
        }
    }
    if (out.empty()) throw iz::ValidationError("empty threshold list");
    return out;
}

void emit_manifest(const fs::path& dir, const std::string& command,
                   const std::string& config_text, std::uint64_t seed,
                   const std::string& catalog_path, std::vector<std::string> outputs) {
    auto m = iz::make_manifest(command, config_text, seed,
                               catalog_path.empty() ? iz::default_catalog_path() : catalog_path);
    m.outputs = std::move(outputs);
    iz::write_manifest(dir / "manifest.json", m);
}

int cmd_analyze(const std::string& system_file, const std::string& bits, int station,
                const CommonOpts& common) {
    auto sys = iz::system_from_json(system_file);
    auto cat = open_catalog(common.catalog);
    auto mat = iz::default_material();
    iz::LoadCombination combo;
    const int m = sys.member_count();
    auto idx = iz::resolve_sections(sys, cat);

    iz::LoadArrangement arr;
    if (bits.empty())
        arr.activation.assign(m, 1);
    else
        arr = iz::arrangement_from_bits(bits);
    if (static_cast<int>(arr.activation.size()) != m)
        throw iz::ValidationError("arrangement length does not match member count");
    if (station < -1 || station >= iz::kStationCount)
        throw iz::ValidationError("station must be 0..10");

    std::vector<double> w(m);
    for (int i = 0; i < m; ++i)
        w[i] = iz::factored_udl(sys, i, arr, combo, cat.at(idx[i]).self_weight());
    auto res = iz::solve(sys, cat, mat, w);

    OutFile of;
    std::ostream& out = of.stream(common.out);
    out << "member,station,x,M,V\n";
    const auto grid = iz::station_grid(0);
    char buf[96];
    for (int i = 0; i < m; ++i) {
        Eigen::Matrix<double, iz::kStationCount, 1> M, V;
        iz::member_station_forces(res.end_forces[i], sys.spans[i], w[i], M, V);
        for (int s = 0; s < iz::kStationCount; ++s) {
            if (station >= 0 && s != station) continue;
            std::snprintf(buf, sizeof buf, "%d,%d,%.9g,%.9g,%.9g\n", i, s,
                          grid.stations[s] * sys.spans[i], M(s), V(s));
            out << buf;
        }
    }
    return 0;
}

int cmd_arrangements(const std::string& system_file, int members, const CommonOpts& common) {
    auto mat = iz::default_material();
    iz::ArrangementSet flex, crit;
    std::vector<int> susceptible;
    int m = members;
    double limit = 0.0;

    if (!system_file.empty()) {
        auto sys = iz::system_from_json(system_file);
        auto cat = open_catalog(common.catalog);
        m = sys.member_count();
        limit = iz::shear_span_limit(mat, cat);
        flex = iz::flexural_set(m);
        susceptible = iz::shear_susceptible(sys, mat, cat);
        auto shear = iz::shear_set(m, flex, susceptible);
        crit = iz::critical_set(flex, shear);
    } else {
        if (m < 1) throw iz::ValidationError("pass --system FILE or --members N");
        flex = iz::flexural_set(m);
        crit = flex;
        crit.kind = iz::ArrangementKind::critical;
    }

    const std::size_t n = susceptible.size();
    const std::size_t bound =
        m > 1 && n > 0 ? 2u * (m - 1) * ((1u << std::min<std::size_t>(n, 20)) - 1) : 0;

    OutFile of;
    std::ostream& out = of.stream(common.out);
    out << "index,kind,bits\n";
    for (std::size_t i = 0; i < crit.size(); ++i)
        out << i << ',' << (i < flex.size() ? "flexural" : "shear") << ','
            << iz::bits_string(crit.arrangements[i]) << '\n';

    std::ostringstream note;
    note << "members=" << m << " shear_span_limit=" << limit << " susceptible=[";
    for (std::size_t i = 0; i < n; ++i) note << (i ? " " : "") << susceptible[i];
    note << "] flexural=" << flex.size() << " (predicted " << 2 * m << ")"
         << " shear=" << crit.size() - flex.size() << " (bound " << bound << ")"
         << " critical=" << crit.size() << "\n";
    std::cerr << note.str();
    return 0;
}

int cmd_design(const std::string& system_file, const CommonOpts& common) {
    auto sys = iz::system_from_json(system_file);
    auto cat = open_catalog(common.catalog);
    auto mat = iz::default_material();
    iz::LoadCombination combo;
    auto arrangements = iz::critical_set(sys, mat, cat);
    auto result = iz::design_system(sys, cat, mat, combo, arrangements);
    OutFile of;
    iz::write_design_json(result, arrangements, of.stream(common.out));
    return 0;
}

int cmd_zone(const std::string& system_file, const std::string& data_dir,
             const std::string& eps_list, const std::string& checkpoint,
             const CommonOpts& common, const std::string& command_line) {
    auto cat = open_catalog(common.catalog);
    auto mat = iz::default_material();
    iz::LoadCombination combo;
    const auto eps = parse_eps(eps_list);

    std::vector<iz::ZoneResult> zones;
    std::vector<iz::DesignRow> designs;
    std::vector<std::pair<int, std::string>> skipped;

    if (!system_file.empty()) {
        auto sys = iz::system_from_json(system_file);
        auto arrangements = iz::critical_set(sys, mat, cat);
        iz::SystemTables tables;
        iz::BeamSystem designed;
        if (sys.sections_assigned()) {
            designed = sys;
            tables = iz::build_tables(sys, cat, mat, combo, arrangements);
        } else {
            auto result = iz::design_system(sys, cat, mat, combo, arrangements);
            designed = result.designed;
            tables = std::move(result.tables);
        }
        zones = iz::zone_results(tables, 0, eps);
        for (int d = 0; d < designed.member_count(); ++d)
            designs.push_back({0, d, designed.sections[d], zones[d].u_true});
    } else {
        auto systems = iz::load_dataset(data_dir);
        iz::StudyOptions opt;
        opt.jobs = common.jobs;
        if (!checkpoint.empty()) opt.checkpoint_dir = checkpoint;
        auto study = iz::run_study(systems, cat, mat, combo, eps, opt);
        zones = std::move(study.zones);
        designs = std::move(study.designs);
        skipped = std::move(study.skipped);
        std::cerr << "designed " << study.designed_systems << " of " << systems.size()
                  << " systems, skipped " << skipped.size() << "\n";
    }

    if (common.out.empty()) {
        iz::write_zone_csv(std::cout, zones, eps);
        return 0;
    }
    fs::create_directories(common.out);
    {
        std::ostringstream s;
        iz::write_zone_csv(s, zones, eps);
        write_text(fs::path(common.out) / "results.csv", s.str());
    }
    {
        std::ostringstream s;
        iz::write_design_csv(s, designs);
        write_text(fs::path(common.out) / "design.csv", s.str());
    }
    {
        std::ostringstream s;
        s << "system_id,reason\n";
        for (const auto& [id, reason] : skipped) s << id << ',' << reason << '\n';
        write_text(fs::path(common.out) / "skipped.csv", s.str());
    }
    emit_manifest(common.out, command_line, command_line, 0, common.catalog,
                  {"results.csv", "design.csv", "skipped.csv"});
    return 0;
}

int cmd_dataset(int set_id, bool stress, std::uint64_t seed, const std::string& samples,
                int members, const CommonOpts& common, const std::string& command_line) {
    if (common.out.empty()) throw iz::ValidationError("dataset needs --out DIR");
    auto [ns, nq] = parse_samples(samples.empty() ? "32x32" : samples);
    iz::DesignSetConfig cfg;
    if (stress) {
        cfg = iz::stress_test_config(seed, ns, nq);
    } else {
        cfg = iz::preset_config(set_id, seed, ns, nq);
    }
    if (members > 0) cfg.members = members;
    auto systems = iz::generate(cfg);
    iz::write_dataset(common.out, cfg, systems);
    emit_manifest(common.out, command_line, command_line, seed, "", {"manifest.csv"});
    std::cerr << "wrote " << systems.size() << " systems to " << common.out << "\n";
    return 0;
}

int cmd_validate(std::uint64_t seed, const std::string& samples, int members,
                 const CommonOpts& common, const std::string& command_line) {
    auto cat = open_catalog(common.catalog);
    auto mat = iz::default_material();
    iz::LoadCombination combo;
    auto [ns, nq] = parse_samples(samples.empty() ? "8x8" : samples);
    auto cfg = iz::stress_test_config(seed, ns, nq);
    if (members > 0) cfg.members = members;
    auto report = iz::validate_containment(cfg, cat, mat, combo, common.jobs);

    if (!common.out.empty()) {
        fs::create_directories(common.out);
        std::ostringstream s;
        iz::write_containment_csv(s, report);
        write_text(fs::path(common.out) / "containment.csv", s.str());
        emit_manifest(common.out, command_line, command_line, seed, common.catalog,
                      {"containment.csv"});
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "containment %.1f%% (%zu/%zu beams, %zu systems skipped)\n",
                  report.rate() * 100.0, report.contained, report.beams, report.skipped_systems);
    std::cout << buf;
    return 0;
}

int cmd_stats(const std::vector<std::string>& inputs, const CommonOpts& common,
              const std::string& command_line) {
    if (inputs.empty()) throw iz::ValidationError("stats needs at least one results CSV");

    struct Labeled {
        std::string label;
        std::vector<iz::ZoneStats> stats;
    };
    std::vector<Labeled> sets;
    for (const auto& in : inputs) {
        std::ifstream f(in);
        if (!f) throw iz::ValidationError("cannot open " + in);
        auto rows = iz::read_zone_csv(f);
        sets.push_back({fs::path(in).stem().string(), iz::stats_from_rows(rows)});
    }

    std::map<double, std::vector<const iz::ZoneStats*>> table;  // eps -> per set
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (const auto& s : sets[i].stats) {
            auto& row = table[s.eps];
            row.resize(sets.size(), nullptr);
            row[i] = &s;
        }

    std::ostringstream csv;
    csv << "eps";
    for (const auto& s : sets) csv << ',' << s.label << "_mean," << s.label << "_max";
    csv << '\n';
    char buf[64];
    for (const auto& [eps, row] : table) {
        std::snprintf(buf, sizeof buf, "%g", eps);
        csv << buf;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            if (i < row.size() && row[i]) {
                std::snprintf(buf, sizeof buf, ",%.4f,%d", row[i]->mean_k, row[i]->max_k);
                csv << buf;
            } else {
                csv << ",,";
            }
        }
        csv << '\n';
    }

    if (common.out.empty()) {
        std::cout << csv.str();
        return 0;
    }
    fs::create_directories(common.out);
    write_text(fs::path(common.out) / "stats.csv", csv.str());
    std::vector<std::string> outputs{"stats.csv"};
    for (const auto& s : sets)
        for (const auto& st : s.stats) {
            std::snprintf(buf, sizeof buf, "%g", st.eps);
            const std::string name = "hist_" + s.label + "_" + buf + ".csv";
            std::ostringstream h;
            iz::write_histogram_csv(h, st);
            write_text(fs::path(common.out) / name, h.str());
            outputs.push_back(name);
        }
    emit_manifest(common.out, command_line, command_line, 0, "", std::move(outputs));
    std::cout << csv.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous-beam design and influence-zone studies"};
    app.require_subcommand(1);
    app.set_version_flag("--version", iz::kToolVersion);
    const std::string command_line = join_args(argc, argv);

    CommonOpts common;
    std::string system_file, data_dir, bits, eps_list, samples, checkpoint;
    std::vector<std::string> stats_inputs;
    int station = -1, members = 0, set_id = 0;
    bool stress = false;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub, bool with_jobs = false) {
        sub->add_option("--catalog", common.catalog, "section catalog CSV (default $IZ_CATALOG)");
        sub->add_option("--out", common.out, "output file or directory");
        if (with_jobs) sub->add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);
    };

    auto* analyze = app.add_subcommand("analyze", "forces at all stations for one arrangement");
    analyze->add_option("--system", system_file, "system JSON with sections assigned")->required();
    analyze->add_option("--arrangement", bits, "activation bits, default all on");
    analyze->add_option("--station", station, "restrict output to one station (0..10)");
    add_common(analyze);

    auto* arrangements = app.add_subcommand("arrangements", "explicit critical arrangement set");
    auto* arr_sys = arrangements->add_option("--system", system_file,
                                             "system JSON (enables shear detection)");
    arrangements->add_option("--members", members, "member count for a span-free flexural set")
        ->excludes(arr_sys);
    add_common(arrangements);

    auto* design = app.add_subcommand("design", "size sections against the critical set");
    design->add_option("--system", system_file, "system JSON")->required();
    add_common(design);

    auto* zone = app.add_subcommand("zone", "captured curves and influence-zone sizes");
    zone->add_option("--system", system_file, "single system JSON");
    zone->add_option("--data", data_dir, "dataset directory from `dataset`");
    zone->add_option("--eps", eps_list, "comma-separated thresholds, default 0.001,...,0.5");
    zone->add_option("--checkpoint", checkpoint, "directory for per-system checkpoints");
    add_common(zone, true);

    auto* dataset = app.add_subcommand("dataset", "generate a seeded design study");
    dataset->add_option("--set", set_id, "preset 1..4");
    dataset->add_flag("--stress", stress, "high-load validation configuration");
    dataset->add_option("--seed", seed, "RNG seed");
    dataset->add_option("--samples", samples, "span x UDL draws, e.g. 32x32 (ignored by set 1)");
    dataset->add_option("--members", members, "override member count");
    add_common(dataset);

    auto* validate = app.add_subcommand("validate", "exhaustive containment check");
    validate->add_option("--seed", seed, "RNG seed");
    validate->add_option("--samples", samples, "span x UDL draws, default 8x8");
    validate->add_option("--members", members, "override member count (max 12)");
    add_common(validate, true);

    auto* stats = app.add_subcommand("stats", "aggregate results CSVs into summary tables");
    stats->add_option("--in", stats_inputs, "results.csv files")->required();
    add_common(stats);

    try {
        app.parse(argc, argv);
        if (*analyze) return cmd_analyze(system_file, bits, station, common);
        if (*arrangements) return cmd_arrangements(system_file, members, common);
        if (*design) return cmd_design(system_file, common);
        if (*zone) {
            if (system_file.empty() == data_dir.empty())
                throw iz::ValidationError("zone needs exactly one of --system or --data");
            return cmd_zone(system_file, data_dir, eps_list, checkpoint, common, command_line);
        }
        if (*dataset) {
            if (stress == (set_id != 0))
                throw iz::ValidationError("dataset needs exactly one of --set or --stress");
            return cmd_dataset(set_id, stress, seed, samples, members, common, command_line);
        }
        if (*validate) return cmd_validate(seed, samples, members, common, command_line);
        if (*stats) return cmd_stats(stats_inputs, common, command_line);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const iz::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const iz::InfeasibleDesign& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const iz::SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
