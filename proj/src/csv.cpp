#include "clonesim/csv.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "clonesim/numerics.hpp"

namespace clonesim {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

void write_totals_csv(const std::string& path, const TotalsSeries& totals, long stride) {
    auto out = open_out(path);
    out << "t";
    for (int i = 1; i <= totals.num_stages; ++i) out << ",rho_" << i;
    out << ",signal\n";
    if (stride < 1) stride = 1;
    const std::size_t n = totals.size();
    auto write_row = [&](std::size_t r) {
        out << fmt17(totals.times[r]);
        for (int i = 0; i < totals.num_stages; ++i)
            out << ',' << fmt17(totals.rho[r * totals.num_stages + i]);
        out << ',' << fmt17(totals.signal[r]) << '\n';
    };
    std::size_t last_written = 0;
    for (std::size_t r = 0; r < n; r += stride) {
        write_row(r);
        last_written = r;
    }
    if (n > 0 && last_written != n - 1) write_row(n - 1);
}

void write_heatmap_csv(const std::string& path, const Trajectory& traj, const Grid& grid,
                       int stage, bool normalize,
                       const std::map<std::string, std::string>& markers) {
    if (stage < 1 || traj.snapshots.empty() ||
        stage > static_cast<int>(traj.snapshots.front().densities.size()))
        throw std::invalid_argument("write_heatmap_csv: stage out of range");
    auto out = open_out(path);
    out << "# stage = " << stage << "\n";
    out << "# normalization = " << (normalize ? "stage_total" : "none") << "\n";
    for (const auto& [k, v] : markers) out << "# " << k << " = " << v << "\n";
    out << "t,x,value\n";
    for (std::size_t j = 0; j < traj.snapshots.size(); ++j) {
        const auto& n = traj.snapshots[j].densities[stage - 1];
        double scale = 1.0;
        if (normalize) {
            const double rho = integrate(grid, n);
            scale = rho > 0.0 ? 1.0 / rho : 0.0;
        }
        const std::string t = fmt17(traj.times[j]);
        for (int k = 0; k < grid.num_points; ++k)
            out << t << ',' << fmt17(grid.points[k]) << ',' << fmt17(n[k] * scale) << '\n';
    }
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
    CsvTable tab;
    std::string line;
    bool have_header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos)
                tab.metadata[trim(line.substr(1, eq - 1))] = trim(line.substr(eq + 1));
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(trim(f));
        if (!have_header) {
            tab.header = fields;
            tab.columns.assign(fields.size(), {});
            have_header = true;
            continue;
        }
        if (fields.size() != tab.header.size())
            throw std::runtime_error("csv: '" + path + "' line " + std::to_string(lineno) +
                                     ": expected " + std::to_string(tab.header.size()) +
                                     " fields, got " + std::to_string(fields.size()));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            char* end = nullptr;
            const double v = std::strtod(fields[c].c_str(), &end);
            if (end == fields[c].c_str() || *end != '\0')
                throw std::runtime_error("csv: '" + path + "' line " + std::to_string(lineno) +
                                         ": not a number: '" + fields[c] + "'");
            tab.columns[c].push_back(v);
        }
    }
    if (!have_header) throw std::runtime_error("csv: '" + path + "' has no header row");
    return tab;
}

}  // namespace clonesim
