#include "clonesim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "clonesim/analysis.hpp"
#include "clonesim/numerics.hpp"

namespace clonesim {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

class KeyTable {
public:
    explicit KeyTable(const std::string& text) {
        std::istringstream in(text);
        std::string raw;
        int lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            const auto hash = raw.find('#');
            std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(lineno, "expected 'key = value', got '" + line + "'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError(lineno, "empty key");
            for (char c : key)
                if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' ||
                      c == '-'))
                    throw ConfigError(lineno, "invalid character in key '" + key + "'");
            if (value.empty()) throw ConfigError(lineno, "empty value for key '" + key + "'");
            auto [it, fresh] = entries_.emplace(key, Entry{value, lineno, false});
            if (!fresh)
                throw ConfigError(lineno, "duplicate key '" + key + "' (first at line " +
                                              std::to_string(it->second.line) + ")");
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    bool has_prefix(const std::string& prefix, int* first_line = nullptr) const {
        for (const auto& [k, e] : entries_)
            if (k.rfind(prefix, 0) == 0) {
                if (first_line) *first_line = e.line;
                return true;
            }
        return false;
    }

    std::optional<std::string> take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    int line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    std::string take_string(const std::string& key, const std::string& fallback) {
        auto v = take(key);
        return v ? *v : fallback;
    }

    std::string require_string(const std::string& key) {
        auto v = take(key);
        if (!v) throw ConfigError(0, "missing required key '" + key + "'");
        return *v;
    }

    double parse_double(const std::string& key, const std::string& text) {
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end == text.c_str() || *end != '\0' || !std::isfinite(v))
            throw ConfigError(line_of(key), "key '" + key + "': not a finite number: '" + text +
                                                "'");
        return v;
    }

    double take_double(const std::string& key, double fallback) {
        auto v = take(key);
        return v ? parse_double(key, *v) : fallback;
    }

    double require_double(const std::string& key) { return parse_double(key, require_string(key)); }

    long parse_long(const std::string& key, const std::string& text) {
        char* end = nullptr;
        const long v = std::strtol(text.c_str(), &end, 10);
        if (end == text.c_str() || *end != '\0')
            throw ConfigError(line_of(key), "key '" + key + "': not an integer: '" + text + "'");
        return v;
    }

    long take_long(const std::string& key, long fallback) {
        auto v = take(key);
        return v ? parse_long(key, *v) : fallback;
    }

    bool take_bool(const std::string& key, bool fallback) {
        auto v = take(key);
        if (!v) return fallback;
        if (*v == "true") return true;
        if (*v == "false") return false;
        throw ConfigError(line_of(key), "key '" + key + "': expected true or false, got '" + *v +
                                            "'");
    }

    void check(bool ok, const std::string& key, const std::string& what) {
        if (!ok) throw ConfigError(line_of(key), "key '" + key + "': " + what);
    }

    void reject_unused() const {
        const Entry* worst = nullptr;
        std::string worst_key;
        for (const auto& [k, e] : entries_)
            if (!e.used && (!worst || e.line < worst->line)) {
                worst = &e;
                worst_key = k;
            }
        if (worst) throw ConfigError(worst->line, "unknown key '" + worst_key + "'");
    }

private:
    std::map<std::string, Entry> entries_;
};

RateSpec parse_rate_spec(KeyTable& keys, const std::string& prefix) {
    const std::string form = keys.require_string(prefix + ".form");
    if (form == "linear") {
        LinearSpec lin;
        lin.alpha = keys.require_double(prefix + ".alpha");
        lin.beta = keys.take_double(prefix + ".beta", 0.0);
        return lin;
    }
    if (form == "gauss") {
        GaussSumSpec g;
        g.scale = keys.take_double(prefix + ".scale", 1.0);
        g.base = keys.take_double(prefix + ".base", 0.0);
        const long nterms = keys.take_long(prefix + ".terms", 0);
        keys.check(nterms >= 0, prefix + ".terms", "must be >= 0");
        for (long j = 1; j <= nterms; ++j) {
            const std::string tp = prefix + ".term" + std::to_string(j);
            GaussTerm t;
            t.amp = keys.require_double(tp + ".amp");
            t.center = keys.require_double(tp + ".center");
            t.width = keys.require_double(tp + ".width");
            keys.check(t.width > 0.0, tp + ".width", "must be > 0");
            g.terms.push_back(t);
        }
        return g;
    }
    throw ConfigError(keys.line_of(prefix + ".form"),
                      "key '" + prefix + ".form': expected linear or gauss, got '" + form + "'");
}

void serialize_rate_spec(std::ostream& out, const std::string& prefix, const RateSpec& spec) {
    if (const auto* lin = std::get_if<LinearSpec>(&spec)) {
        out << prefix << ".form = linear\n";
        out << prefix << ".alpha = " << fmt17(lin->alpha) << "\n";
        out << prefix << ".beta = " << fmt17(lin->beta) << "\n";
        return;
    }
    const auto& g = std::get<GaussSumSpec>(spec);
    out << prefix << ".form = gauss\n";
    out << prefix << ".scale = " << fmt17(g.scale) << "\n";
    out << prefix << ".base = " << fmt17(g.base) << "\n";
    out << prefix << ".terms = " << g.terms.size() << "\n";
    for (std::size_t j = 0; j < g.terms.size(); ++j) {
        const std::string tp = prefix + ".term" + std::to_string(j + 1);
        out << tp << ".amp = " << fmt17(g.terms[j].amp) << "\n";
        out << tp << ".center = " << fmt17(g.terms[j].center) << "\n";
        out << tp << ".width = " << fmt17(g.terms[j].width) << "\n";
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    KeyTable keys(text);
    RunConfig cfg;

    cfg.preset = keys.take_string("preset", "");
    cfg.grid_points = static_cast<int>(keys.take_long("grid.points", 200));
    keys.check(cfg.grid_points >= 1, "grid.points", "must be >= 1");
    const std::string layout = keys.take_string("grid.layout", "midpoint");
    if (layout == "midpoint")
        cfg.layout = GridLayout::Midpoint;
    else if (layout == "vertex")
        cfg.layout = GridLayout::Vertex;
    else
        throw ConfigError(keys.line_of("grid.layout"),
                          "key 'grid.layout': expected midpoint or vertex, got '" + layout + "'");

    cfg.solver.dt = keys.take_double("solver.dt", cfg.solver.dt);
    keys.check(cfg.solver.dt > 0.0, "solver.dt", "must be > 0");
    cfg.solver.horizon = keys.take_double("solver.horizon", cfg.solver.horizon);
    keys.check(cfg.solver.horizon > 0.0, "solver.horizon", "must be > 0");
    cfg.solver.record_every = keys.take_long("solver.record_every", cfg.solver.record_every);
    keys.check(cfg.solver.record_every >= 0, "solver.record_every", "must be >= 0 (0 = auto)");
    const std::string integ = keys.take_string("solver.integrator", "euler");
    if (integ == "euler")
        cfg.solver.integrator = Integrator::ForwardEuler;
    else if (integ == "rk4")
        cfg.solver.integrator = Integrator::RK4;
    else
        throw ConfigError(keys.line_of("solver.integrator"),
                          "key 'solver.integrator': expected euler or rk4, got '" + integ + "'");
    cfg.solver.positivity_tolerance =
        keys.take_double("solver.positivity_tolerance", cfg.solver.positivity_tolerance);
    keys.check(cfg.solver.positivity_tolerance <= 0.0, "solver.positivity_tolerance",
               "must be <= 0");

    cfg.paper_fidelity = keys.take_bool("run.paper_fidelity", false);
    cfg.out_dir = keys.take_string("output.dir", cfg.out_dir);
    cfg.full_totals = keys.take_bool("output.full_totals", false);

    cfg.delta = keys.take_double("analysis.delta", cfg.delta);
    keys.check(cfg.delta > 0.0, "analysis.delta", "must be > 0");
    cfg.support_threshold = keys.take_double("analysis.support_threshold", cfg.support_threshold);
    keys.check(cfg.support_threshold >= 0.0, "analysis.support_threshold", "must be >= 0");
    cfg.prominence_floor = keys.take_double("analysis.prominence_floor", cfg.prominence_floor);
    keys.check(cfg.prominence_floor >= 0.0, "analysis.prominence_floor", "must be >= 0");
    cfg.amplitude_floor = keys.take_double("analysis.amplitude_floor", cfg.amplitude_floor);
    keys.check(cfg.amplitude_floor >= 0.0, "analysis.amplitude_floor", "must be >= 0");

    int model_line = 0;
    const bool has_model = keys.has_prefix("model.", &model_line) ||
                           keys.has_prefix("initial.", &model_line);
    if (!cfg.preset.empty() && has_model)
        throw ConfigError(model_line, "both a preset and an inline model are given; pick one");
    if (cfg.preset.empty() && !has_model)
        throw ConfigError(0, "config needs either 'preset = <name>' or an inline model block");

    if (has_model) {
        InlineModel m;
        m.num_stages = static_cast<int>(keys.take_long("model.stages", 3));
        keys.check(m.num_stages >= 2, "model.stages", "must be >= 2");
        m.feedback_strength = keys.require_double("model.K");
        keys.check(m.feedback_strength > 0.0, "model.K", "must be > 0");
        m.clearance = keys.require_double("model.d");
        keys.check(m.clearance > 0.0, "model.d", "must be > 0");
        m.epsilon = keys.take_double("model.epsilon", 1.0);
        keys.check(m.epsilon > 0.0, "model.epsilon", "must be > 0");
        for (int i = 1; i < m.num_stages; ++i) {
            m.self_renewal.push_back(parse_rate_spec(keys, "model.a" + std::to_string(i)));
            m.proliferation.push_back(parse_rate_spec(keys, "model.p" + std::to_string(i)));
        }
        for (int i = 1; i <= m.num_stages; ++i) {
            const std::string key = "initial.N" + std::to_string(i);
            const double amp = keys.require_double(key);
            keys.check(amp >= 0.0, key, "must be >= 0");
            m.initial.amplitude.push_back(amp);
        }
        m.initial.width = keys.take_double("initial.width", 0.2);
        keys.check(m.initial.width > 0.0, "initial.width", "must be > 0");
        cfg.model = std::move(m);
    }

    keys.reject_unused();
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "# run configuration\n";
    if (!cfg.preset.empty()) out << "preset = " << cfg.preset << "\n";
    out << "grid.points = " << cfg.grid_points << "\n";
    out << "grid.layout = " << (cfg.layout == GridLayout::Midpoint ? "midpoint" : "vertex")
        << "\n";
    out << "solver.dt = " << fmt17(cfg.solver.dt) << "\n";
    out << "solver.horizon = " << fmt17(cfg.solver.horizon) << "\n";
    out << "solver.record_every = " << cfg.solver.record_every << "\n";
    out << "solver.integrator = "
        << (cfg.solver.integrator == Integrator::ForwardEuler ? "euler" : "rk4") << "\n";
    out << "solver.positivity_tolerance = " << fmt17(cfg.solver.positivity_tolerance) << "\n";
    out << "run.paper_fidelity = " << (cfg.paper_fidelity ? "true" : "false") << "\n";
    out << "output.dir = " << cfg.out_dir << "\n";
    out << "output.full_totals = " << (cfg.full_totals ? "true" : "false") << "\n";
    out << "analysis.delta = " << fmt17(cfg.delta) << "\n";
    out << "analysis.support_threshold = " << fmt17(cfg.support_threshold) << "\n";
    out << "analysis.prominence_floor = " << fmt17(cfg.prominence_floor) << "\n";
    out << "analysis.amplitude_floor = " << fmt17(cfg.amplitude_floor) << "\n";
    if (cfg.model) {
        const InlineModel& m = *cfg.model;
        out << "model.stages = " << m.num_stages << "\n";
        out << "model.K = " << fmt17(m.feedback_strength) << "\n";
        out << "model.d = " << fmt17(m.clearance) << "\n";
        out << "model.epsilon = " << fmt17(m.epsilon) << "\n";
        for (int i = 1; i < m.num_stages; ++i) {
            serialize_rate_spec(out, "model.a" + std::to_string(i), m.self_renewal[i - 1]);
            serialize_rate_spec(out, "model.p" + std::to_string(i), m.proliferation[i - 1]);
        }
        for (std::size_t i = 0; i < m.initial.amplitude.size(); ++i)
            out << "initial.N" << i + 1 << " = " << fmt17(m.initial.amplitude[i]) << "\n";
        out << "initial.width = " << fmt17(m.initial.width) << "\n";
    }
    return out.str();
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

SolverConfig effective_solver_config(const RunConfig& cfg) {
    SolverConfig s = cfg.solver;
    if (s.record_every <= 0) {
        const long steps = std::llround(s.horizon / s.dt);
        s.record_every = std::max(1L, steps / 2000);
    }
    return s;
}

Preset materialize(const RunConfig& cfg, const Grid& grid) {
    if (!cfg.preset.empty()) return build_preset(cfg.preset, grid);
    if (!cfg.model) throw std::invalid_argument("materialize: config has no preset and no model");
    const InlineModel& m = *cfg.model;
    Preset pr;
    pr.name = "inline";
    pr.params.num_stages = m.num_stages;
    pr.params.feedback_strength = m.feedback_strength;
    pr.params.clearance = m.clearance;
    pr.params.epsilon = m.epsilon;
    pr.self_renewal_specs = m.self_renewal;
    pr.proliferation_specs = m.proliferation;
    for (const auto& spec : m.self_renewal) pr.params.self_renewal.push_back(sample(spec, grid));
    for (const auto& spec : m.proliferation)
        pr.params.proliferation.push_back(sample(spec, grid));
    pr.initial_spec = m.initial;
    pr.initial = sample_initial(m.initial, grid);
    pr.solver = effective_solver_config(cfg);
    // selection targets read off the sampled top-stage self-renewal table:
    // local maxima, unless the table is flat to rounding
    const auto& a1 = pr.params.self_renewal.front().values;
    const double amax = *std::max_element(a1.begin(), a1.end());
    const double amin = *std::min_element(a1.begin(), a1.end());
    if (amax - amin > 1e-12 * std::abs(amax))
        for (int k : table_local_maxima(a1)) pr.expected.stem_centers.push_back(grid.points[k]);
    pr.expected.regime = Regime::Equilibrium;
    pr.expected.progenitor_center = -1.0;
    return pr;
}

}  // namespace clonesim
