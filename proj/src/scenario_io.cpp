#include "spax/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "spax/csv.hpp"

namespace spax {

namespace {

void check_fraction(const CsvTable& t, std::size_t row, int col, double v, const char* what) {
    if (std::isnan(v) || v < 0.0 || v > 1.0)
        throw InputError(t.where(row, col) + ": " + what + " out of range [0,1]");
}

}  // namespace

ScenarioInstance load_scenario_text(const std::string& tracts_csv,
                                    const std::string& physicians_csv,
                                    const std::optional<std::string>& distances_csv,
                                    const SystemParameters& params) {
    params.validate();
    ScenarioInstance s;
    s.params = params;

    // tracts
    CsvTable tt = CsvTable::from_string(tracts_csv, "tracts.csv");
    const int c_id = tt.required_column("id");
    const int c_lat = tt.required_column("lat");
    const int c_lon = tt.required_column("lon");
    const int c_pm = tt.required_column("pop_medicaid");
    const int c_po = tt.required_column("pop_other");
    const int c_mm = tt.required_column("mob_medicaid");
    const int c_mo = tt.required_column("mob_other");
    for (const auto& name : standard_covariate_names())
        if (tt.has_column(name)) s.covariate_names.push_back(name);

    std::map<std::int64_t, int> tract_of;
    for (std::size_t r = 0; r < tt.rows(); ++r) {
        CensusTract t;
        t.ext_id = tt.integer(r, c_id);
        t.idx = static_cast<int>(r);
        if (tract_of.count(t.ext_id))
            throw InputError(tt.where(r, c_id) + ": duplicate tract id");
        tract_of[t.ext_id] = t.idx;
        t.centroid = {tt.number(r, c_lat), tt.number(r, c_lon)};
        if (std::abs(t.centroid.lat) > 90 || std::abs(t.centroid.lon) > 180)
            throw InputError(tt.where(r, c_lat) + ": coordinate out of range");
        t.pop_medicaid = tt.number(r, c_pm);
        t.pop_other = tt.number(r, c_po);
        if (!(t.pop_medicaid >= 0) || !(t.pop_other >= 0))
            throw InputError(tt.where(r, c_pm) + ": negative population");
        t.mob_medicaid = tt.number(r, c_mm);
        check_fraction(tt, r, c_mm, t.mob_medicaid, "mobility fraction");
        t.mob_other = tt.number(r, c_mo);
        check_fraction(tt, r, c_mo, t.mob_other, "mobility fraction");
        for (const auto& name : s.covariate_names)
            t.covariates.push_back(tt.number(r, tt.column(name)));
        s.tracts.push_back(std::move(t));
    }
    if (s.tracts.empty()) throw InputError("tracts.csv: no tracts");

    // physicians
    CsvTable pt = CsvTable::from_string(physicians_csv, "physicians.csv");
    const int p_id = pt.required_column("id");
    const int p_lat = pt.required_column("lat");
    const int p_lon = pt.required_column("lon");
    const int p_tr = pt.required_column("tract_id");
    const int p_pam = pt.required_column("pam");
    const int p_mc = pt.required_column("mc");
    const int p_set = pt.required_column("setting");
    std::map<std::int64_t, int> phys_of;
    for (std::size_t r = 0; r < pt.rows(); ++r) {
        Physician p;
        p.ext_id = pt.integer(r, p_id);
        p.idx = static_cast<int>(r);
        if (phys_of.count(p.ext_id))
            throw InputError(pt.where(r, p_id) + ": duplicate physician id");
        phys_of[p.ext_id] = p.idx;
        p.location = {pt.number(r, p_lat), pt.number(r, p_lon)};
        const std::int64_t tid = pt.integer(r, p_tr);
        auto it = tract_of.find(tid);
        if (it == tract_of.end())
            throw InputError(pt.where(r, p_tr) + ": unknown tract id " + std::to_string(tid));
        p.tract_idx = it->second;
        p.setting = practice_setting_from_string(pt.cell(r, p_set));
        const double pam = pt.number(r, p_pam);
        check_fraction(pt, r, p_pam, pam, "pam");
        p.pam = pam;
        const double mc = pt.number(r, p_mc);
        if (std::isnan(mc)) {
            p.mc = default_mc(p.setting);  // per-setting default, overridable
        } else {
            check_fraction(pt, r, p_mc, mc, "mc");
            p.mc = mc;
        }
        s.tracts[p.tract_idx].local_physicians.push_back(p.idx);
        s.physicians.push_back(std::move(p));
    }

    // distances
    if (distances_csv) {
        CsvTable dt = CsvTable::from_string(*distances_csv, "distances.csv");
        const int d_t = dt.required_column("tract_id");
        const int d_p = dt.required_column("physician_id");
        const int d_m = dt.required_column("miles");
        std::vector<Arc> arcs;
        std::map<std::pair<int, int>, bool> seen;
        for (std::size_t r = 0; r < dt.rows(); ++r) {
            auto ti = tract_of.find(dt.integer(r, d_t));
            if (ti == tract_of.end())
                throw InputError(dt.where(r, d_t) + ": unknown tract id");
            auto pi = phys_of.find(dt.integer(r, d_p));
            if (pi == phys_of.end())
                throw InputError(dt.where(r, d_p) + ": unknown physician id");
            const double miles = dt.number(r, d_m);
            if (!(miles >= 0)) throw InputError(dt.where(r, d_m) + ": negative distance");
            if (seen[{ti->second, pi->second}])
                throw InputError(dt.where(r, d_t) + ": duplicate arc");
            seen[{ti->second, pi->second}] = true;
            if (miles <= params.mi_max) arcs.push_back(Arc{ti->second, pi->second, miles});
        }
        s.distances = DistanceMatrix(std::move(arcs), s.n_tracts(), s.n_physicians());
    } else {
        s.distances = build_distances_great_circle(s.tracts, s.physicians, params.mi_max);
    }

    s.validate();
    return s;
}

ScenarioInstance load_scenario(const std::string& tract_file, const std::string& physician_file,
                               const std::optional<std::string>& distance_file,
                               const SystemParameters& params) {
    std::optional<std::string> dtext;
    if (distance_file) dtext = read_text_file(*distance_file);
    return load_scenario_text(read_text_file(tract_file), read_text_file(physician_file), dtext,
                              params);
}

std::string tracts_to_csv(const ScenarioInstance& s) {
    std::vector<std::string> header = {"id",          "lat",        "lon",
                                       "pop_medicaid", "pop_other",  "mob_medicaid",
                                       "mob_other"};
    for (const auto& n : s.covariate_names) header.push_back(n);
    CsvWriter w(header);
    for (const auto& t : s.tracts) {
        w.begin_row();
        w.add(t.ext_id);
        w.add(t.centroid.lat);
        w.add(t.centroid.lon);
        w.add(t.pop_medicaid);
        w.add(t.pop_other);
        w.add(t.mob_medicaid);
        w.add(t.mob_other);
        for (double v : t.covariates) w.add(v);
    }
    return w.str();
}

std::string physicians_to_csv(const ScenarioInstance& s) {
    CsvWriter w({"id", "lat", "lon", "tract_id", "pam", "mc", "setting"});
    for (const auto& p : s.physicians) {
        w.begin_row();
        w.add(p.ext_id);
        w.add(p.location.lat);
        w.add(p.location.lon);
        w.add(s.tracts[p.tract_idx].ext_id);
        w.add(p.pam);
        w.add(p.mc);
        w.add(to_string(p.setting));
    }
    return w.str();
}

std::string distances_to_csv(const ScenarioInstance& s) {
    CsvWriter w({"tract_id", "physician_id", "miles"});
    for (const auto& a : s.distances.arcs()) {
        w.begin_row();
        w.add(s.tracts[a.tract].ext_id);
        w.add(s.physicians[a.physician].ext_id);
        w.add(a.miles);
    }
    return w.str();
}

void write_scenario(const ScenarioInstance& s, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    write_text_file(dir + "/tracts.csv", tracts_to_csv(s));
    write_text_file(dir + "/physicians.csv", physicians_to_csv(s));
    write_text_file(dir + "/distances.csv", distances_to_csv(s));
    write_text_file(dir + "/params.cfg", params_to_text(s.params));
}

SystemParameters params_from_text(const std::string& text, const std::string& name) {
    SystemParameters p;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError(name + " line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        auto num = [&] {
            char* end = nullptr;
            double v = std::strtod(val.c_str(), &end);
            if (end != val.c_str() + val.size())
                throw InputError(name + " line " + std::to_string(lineno) + ": bad number");
            return v;
        };
        if (key == "mi_max") p.mi_max = num();
        else if (key == "mi_max_limited") p.mi_max_limited = num();
        else if (key == "pc") p.pc = num();
        else if (key == "lc") p.lc = num();
        else if (key == "cc") p.cc = num();
        else if (key == "coverage_mode") {
            if (val == "max") {
                p.coverage = {CoverageMode::max_coverage, 1.0};
            } else if (val.rfind("fixed:", 0) == 0) {
                p.coverage.kind = CoverageMode::fixed_fraction;
                p.coverage.alpha = std::strtod(val.c_str() + 6, nullptr);
            } else {
                throw InputError(name + " line " + std::to_string(lineno) +
                                 ": coverage_mode must be 'max' or 'fixed:<alpha>'");
            }
        } else {
            throw InputError(name + " line " + std::to_string(lineno) + ": unknown key '" + key +
                             "'");
        }
    }
    p.validate();
    return p;
}

SystemParameters load_params(const std::string& path) {
    return params_from_text(read_text_file(path), path);
}

std::string params_to_text(const SystemParameters& p) {
    std::ostringstream os;
    os << "mi_max=" << format_double(p.mi_max) << "\n";
    os << "mi_max_limited=" << format_double(p.mi_max_limited) << "\n";
    os << "pc=" << format_double(p.pc) << "\n";
    os << "lc=" << format_double(p.lc) << "\n";
    os << "cc=" << format_double(p.cc) << "\n";
    if (p.coverage.kind == CoverageMode::max_coverage) {
        os << "coverage_mode=max\n";
    } else {
        os << "coverage_mode=fixed:" << format_double(p.coverage.alpha) << "\n";
    }
    return os.str();
}

}  // namespace spax
