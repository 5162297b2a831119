#include "iz/zone.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace iz {

namespace {

double max_utilisation(const Eigen::MatrixXd& M, const Eigen::MatrixXd& V,
                       const Resistances& r) {
    double u = 0.0;
    const double* pm = M.data();
    const double* pv = V.data();
    for (Eigen::Index i = 0; i < M.size(); ++i)
        u = std::max(u, utilisation(pm[i], pv[i], r));
    return u;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

CapturedCurve captured_curve(const SystemTables& t, int d) {
    const int m = t.m;
    if (d < 0 || d >= m) throw ValidationError("design beam index out of range");
    if (t.factored.rows() == 0) throw ValidationError("tables carry no arrangements");

    const Eigen::MatrixXd& mu = t.moment_unit[d];
    const Eigen::MatrixXd& vu = t.shear_unit[d];
    const Eigen::MatrixXd wt = t.factored.transpose();  // m x p

    CapturedCurve c;
    c.design_beam = d;
    c.utilisations.resize(m + 1);

    // forces with only the window members loaded, grown two columns at a time
    Eigen::MatrixXd Mw = mu.col(d) * wt.row(d);
    Eigen::MatrixXd Vw = vu.col(d) * wt.row(d);
    c.utilisations[0] = max_utilisation(Mw, Vw, t.resist[d]);

    for (int k = 1; k <= m; ++k) {
        bool grew = false;
        for (int i : {d - k, d + k}) {
            if (i < 0 || i >= m) continue;
            Mw.noalias() += mu.col(i) * wt.row(i);
            Vw.noalias() += vu.col(i) * wt.row(i);
            grew = true;
        }
        c.utilisations[k] = grew ? max_utilisation(Mw, Vw, t.resist[d])
                                 : c.utilisations[k - 1];
    }

    c.u_true = c.utilisations[m];
    if (!(c.u_true > 0.0))
        throw ValidationError("degenerate input: design beam carries no load");
    c.ratios.resize(m + 1);
    for (int k = 0; k <= m; ++k) c.ratios[k] = c.utilisations[k] / c.u_true;
    return c;
}

CapturedCurve captured_curve(const BeamSystem& designed, int d, const SectionCatalog& catalog,
                             const Material& material, const LoadCombination& combo,
                             const ArrangementSet& arrangements) {
    auto t = build_tables(designed, catalog, material, combo, arrangements);
    return captured_curve(t, d);
}

int extract_k_max(const CapturedCurve& curve, double eps_max) {
    if (curve.ratios.empty()) throw ValidationError("empty curve");
    if (eps_max < 0) throw ValidationError("threshold must be non-negative");
    const int m = static_cast<int>(curve.ratios.size()) - 1;
    int k = 0;
    for (int kk = m; kk >= 0; --kk)
        if (std::abs(1.0 - curve.ratios[kk]) > eps_max) {
            k = kk + 1;
            break;
        }
    return std::min(k, m);
}

int first_crossing_k(const CapturedCurve& curve, double eps_max) {
    if (curve.ratios.empty()) throw ValidationError("empty curve");
    const int m = static_cast<int>(curve.ratios.size()) - 1;
    for (int k = 0; k <= m; ++k)
        if (std::abs(1.0 - curve.ratios[k]) <= eps_max) return k;
    return m;
}

std::vector<ZoneResult> zone_results(const SystemTables& tables, int system_id,
                                     const std::vector<double>& eps_grid) {
    if (eps_grid.empty()) throw ValidationError("empty threshold grid");
    std::vector<ZoneResult> out;
    out.reserve(tables.m);
    for (int d = 0; d < tables.m; ++d) {
        auto curve = captured_curve(tables, d);
        ZoneResult r;
        r.system_id = system_id;
        r.beam_index = d;
        r.u_true = curve.u_true;
        r.k_max.reserve(eps_grid.size());
        for (double eps : eps_grid) r.k_max.push_back(extract_k_max(curve, eps));
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ZoneStats> zone_statistics(const std::vector<ZoneResult>& results,
                                       const std::vector<double>& eps_grid) {
    if (results.empty()) throw ValidationError("no zone results to aggregate");
    if (eps_grid.empty()) throw ValidationError("empty threshold grid");
    for (const auto& r : results)
        if (r.k_max.size() != eps_grid.size())
            throw ValidationError("zone result arity does not match the threshold grid");

    std::vector<ZoneStats> stats(eps_grid.size());
    for (std::size_t e = 0; e < eps_grid.size(); ++e) {
        ZoneStats& s = stats[e];
        s.eps = eps_grid[e];
        s.count = results.size();
        long long sum = 0;
        for (const auto& r : results) {
            const int k = r.k_max[e];
            sum += k;
            s.max_k = std::max(s.max_k, k);
            if (static_cast<std::size_t>(k) >= s.histogram.size())
                s.histogram.resize(static_cast<std::size_t>(k) + 1, 0);
            ++s.histogram[static_cast<std::size_t>(k)];
        }
        s.mean_k = static_cast<double>(sum) / static_cast<double>(results.size());
    }
    return stats;
}

std::vector<double> default_eps_grid() {
    return {0.001, 0.005, 0.01, 0.05, 0.1, 0.2, 0.5};
}

void write_zone_csv(std::ostream& out, const std::vector<ZoneResult>& results,
                    const std::vector<double>& eps_grid) {
    out << "system_id,beam_index,eps,k_max,u_true\n";
    char buf[64];
    for (const auto& r : results) {
        if (r.k_max.size() != eps_grid.size())
            throw ValidationError("zone result arity does not match the threshold grid");
        for (std::size_t e = 0; e < eps_grid.size(); ++e) {
            // %.17g round-trips doubles, keeping checkpoint restores byte-exact
            std::snprintf(buf, sizeof buf, "%g,%d,%.17g\n", eps_grid[e], r.k_max[e], r.u_true);
            out << r.system_id << ',' << r.beam_index << ',' << buf;
        }
    }
}

std::vector<ZoneRow> read_zone_csv(std::istream& in) {
    std::vector<ZoneRow> rows;
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty results file");
    if (trim(line) != "system_id,beam_index,eps,k_max,u_true")
        throw ValidationError("unexpected results header: " + trim(line));
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::istringstream ss(line);
        std::string f;
        ZoneRow r;
        try {
            std::getline(ss, f, ',');
            r.system_id = std::stoi(f);
            std::getline(ss, f, ',');
            r.beam_index = std::stoi(f);
            std::getline(ss, f, ',');
            r.eps = std::stod(f);
            std::getline(ss, f, ',');
            r.k_max = std::stoi(f);
            std::getline(ss, f, ',');
            r.u_true = std::stod(f);
        } catch (const std::exception&) {
            throw ValidationError("bad results row at line " + std::to_string(lineno));
        }
        if (r.k_max < 0 || r.eps < 0)
            throw ValidationError("bad results row at line " + std::to_string(lineno));
        rows.push_back(r);
    }
    return rows;
}

std::vector<ZoneStats> stats_from_rows(const std::vector<ZoneRow>& rows) {
    if (rows.empty()) throw ValidationError("no zone results to aggregate");
    std::map<double, ZoneStats> by_eps;
    for (const auto& r : rows) {
        ZoneStats& s = by_eps[r.eps];
        s.eps = r.eps;
        ++s.count;
        s.max_k = std::max(s.max_k, r.k_max);
        if (static_cast<std::size_t>(r.k_max) >= s.histogram.size())
            s.histogram.resize(static_cast<std::size_t>(r.k_max) + 1, 0);
        ++s.histogram[static_cast<std::size_t>(r.k_max)];
        s.mean_k += r.k_max;  // running sum, divided below
    }
    std::vector<ZoneStats> stats;
    stats.reserve(by_eps.size());
    for (auto& [eps, s] : by_eps) {
        s.mean_k /= static_cast<double>(s.count);
        stats.push_back(std::move(s));
    }
    return stats;
}

void write_stats_csv(std::ostream& out, const std::vector<ZoneStats>& stats) {
    out << "eps,mean_k,max_k,count\n";
    char buf[96];
    for (const auto& s : stats) {
        std::snprintf(buf, sizeof buf, "%g,%.4f,%d,%zu\n", s.eps, s.mean_k, s.max_k, s.count);
        out << buf;
    }
}

void write_histogram_csv(std::ostream& out, const ZoneStats& stats) {
    out << "k,count,share\n";
    char buf[96];
    for (std::size_t k = 0; k < stats.histogram.size(); ++k) {
        const double share =
            stats.count ? static_cast<double>(stats.histogram[k]) / static_cast<double>(stats.count)
                        : 0.0;
        std::snprintf(buf, sizeof buf, "%zu,%zu,%.6f\n", k, stats.histogram[k], share);
        out << buf;
    }
}

}  // namespace iz
