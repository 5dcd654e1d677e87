#include "sgf/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sgf/sampling.hpp"

namespace sgf {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

struct KeyValue {
    std::string value;
    std::string where;  // "file:line" or "--set"
};

using KeyMap = std::map<std::string, KeyValue>;

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw ConfigError(where.empty() ? msg : where + ": " + msg);
}

double parse_double(const KeyMap& kv, const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        std::size_t pos = 0;
        double v = std::stod(it->second.value, &pos);
        if (pos != it->second.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(it->second.where, "key '" + key + "': not a number: '" + it->second.value + "'");
    }
}

long parse_int(const KeyMap& kv, const std::string& key, long fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        std::size_t pos = 0;
        long v = std::stol(it->second.value, &pos);
        if (pos != it->second.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(it->second.where, "key '" + key + "': not an integer: '" + it->second.value + "'");
    }
}

std::uint64_t parse_u64(const KeyMap& kv, const std::string& key, std::uint64_t fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(it->second.value, &pos);
        if (pos != it->second.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(it->second.where, "key '" + key + "': not an unsigned integer");
    }
}

std::string parse_string(const KeyMap& kv, const std::string& key, const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second.value;
}

WaveVector parse_wavevector(const std::string& text, const std::string& where,
                            const std::string& key) {
    auto parts = split(text, ',');
    if (parts.size() != 2) fail(where, "key '" + key + "': expected 'k1,k2'");
    try {
        return {std::stoi(parts[0]), std::stoi(parts[1])};
    } catch (const std::exception&) {
        fail(where, "key '" + key + "': expected integers 'k1,k2'");
    }
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "domain.alpha", "domain.mu",
        "galerkin.cutoff", "galerkin.modes", "galerkin.levels",
        "time.horizon", "time.dt", "time.scheme", "time.record_every", "time.w_cap",
        "coefficients.family",
        "coefficients.forcing_k", "coefficients.forcing_amp",
        "coefficients.diffusion_k", "coefficients.diffusion_amp",
        "coefficients.jump_k", "coefficients.jump_amp",
        "coefficients.kappa_forcing", "coefficients.kappa_diffusion", "coefficients.kappa_jump",
        "coefficients.lowpass",
        "marks.weights",
        "initial.kind", "initial.k", "initial.amplitude", "initial.decay",
        "run.seed", "run.paths", "run.workers", "run.samples", "run.contraction_offset",
        "run.decay_tolerance", "run.out",
    };
    return keys;
}

RunConfig from_keymap(const KeyMap& kv) {
    for (const auto& [key, val] : kv) {
        if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
            fail(val.where, "unknown key '" + key + "'");
    }

    RunConfig rc;
    rc.alpha = parse_double(kv, "domain.alpha", rc.alpha);
    rc.mu = parse_double(kv, "domain.mu", rc.mu);
    rc.cutoff = int(parse_int(kv, "galerkin.cutoff", rc.cutoff));
    rc.modes = int(parse_int(kv, "galerkin.modes", rc.modes));
    if (auto it = kv.find("galerkin.levels"); it != kv.end()) {
        for (const auto& item : split(it->second.value, ',')) {
            try {
                rc.levels.push_back(std::stoi(item));
            } catch (const std::exception&) {
                fail(it->second.where, "key 'galerkin.levels': expected integers");
            }
        }
    }
    rc.horizon = parse_double(kv, "time.horizon", rc.horizon);
    rc.dt = parse_double(kv, "time.dt", rc.dt);
    {
        const std::string s = parse_string(kv, "time.scheme", "exp_euler");
        if (s == "euler") rc.scheme = Scheme::euler;
        else if (s == "exp_euler") rc.scheme = Scheme::exp_euler;
        else fail(kv.at("time.scheme").where, "key 'time.scheme': expected euler or exp_euler");
    }
    rc.record_every = int(parse_int(kv, "time.record_every", rc.record_every));
    rc.w_cap = parse_double(kv, "time.w_cap", rc.w_cap);

    rc.family = parse_string(kv, "coefficients.family", rc.family);
    if (auto it = kv.find("coefficients.forcing_k"); it != kv.end())
        rc.forcing_k = parse_wavevector(it->second.value, it->second.where, "coefficients.forcing_k");
    rc.forcing_amp = parse_double(kv, "coefficients.forcing_amp", rc.forcing_amp);
    if (auto it = kv.find("coefficients.diffusion_k"); it != kv.end())
        rc.diffusion_k =
            parse_wavevector(it->second.value, it->second.where, "coefficients.diffusion_k");
    rc.diffusion_amp = parse_double(kv, "coefficients.diffusion_amp", rc.diffusion_amp);
    if (auto it = kv.find("coefficients.jump_k"); it != kv.end()) {
        for (const auto& item : split(it->second.value, ';'))
            rc.jump_k.push_back(parse_wavevector(item, it->second.where, "coefficients.jump_k"));
    }
    if (auto it = kv.find("coefficients.jump_amp"); it != kv.end()) {
        for (const auto& item : split(it->second.value, ',')) {
            try {
                rc.jump_amp.push_back(std::stod(item));
            } catch (const std::exception&) {
                fail(it->second.where, "key 'coefficients.jump_amp': expected numbers");
            }
        }
    }
    rc.kappa_forcing = parse_double(kv, "coefficients.kappa_forcing", rc.kappa_forcing);
    rc.kappa_diffusion = parse_double(kv, "coefficients.kappa_diffusion", rc.kappa_diffusion);
    rc.kappa_jump = parse_double(kv, "coefficients.kappa_jump", rc.kappa_jump);
    rc.lowpass = parse_double(kv, "coefficients.lowpass", rc.lowpass);

    if (auto it = kv.find("marks.weights"); it != kv.end()) {
        for (const auto& item : split(it->second.value, ',')) {
            try {
                rc.mark_weights.push_back(std::stod(item));
            } catch (const std::exception&) {
                fail(it->second.where, "key 'marks.weights': expected numbers");
            }
        }
    }

    rc.initial_kind = parse_string(kv, "initial.kind", rc.initial_kind);
    if (auto it = kv.find("initial.k"); it != kv.end())
        rc.initial_k = parse_wavevector(it->second.value, it->second.where, "initial.k");
    rc.initial_amp = parse_double(kv, "initial.amplitude", rc.initial_amp);
    rc.initial_decay = parse_double(kv, "initial.decay", rc.initial_decay);

    rc.seed = parse_u64(kv, "run.seed", rc.seed);
    rc.paths = int(parse_int(kv, "run.paths", rc.paths));
    rc.workers = int(parse_int(kv, "run.workers", rc.workers));
    rc.samples = int(parse_int(kv, "run.samples", rc.samples));
    rc.contraction_offset = parse_double(kv, "run.contraction_offset", rc.contraction_offset);
    rc.decay_tolerance = parse_double(kv, "run.decay_tolerance", rc.decay_tolerance);
    rc.out_dir = parse_string(kv, "run.out", rc.out_dir);

    // Range validation, naming the offending key.
    auto positive = [&](double v, const std::string& key) {
        if (!(v > 0.0)) {
            const std::string where = kv.count(key) ? kv.at(key).where : "";
            fail(where, "key '" + key + "': must be positive (got " + std::to_string(v) + ")");
        }
    };
    positive(rc.alpha, "domain.alpha");
    positive(rc.mu, "domain.mu");
    positive(rc.horizon, "time.horizon");
    positive(rc.dt, "time.dt");
    positive(rc.w_cap, "time.w_cap");
    if (rc.record_every < 1) fail("", "key 'time.record_every': must be >= 1");
    if (rc.cutoff < 0 || (rc.cutoff == 0 && rc.modes == 0 && rc.levels.empty()))
        fail("", "key 'galerkin.cutoff': a level (cutoff, modes or levels) is required");
    if (rc.cutoff > 0 && rc.modes > 0)
        fail("", "key 'galerkin.modes': give either cutoff or modes, not both");
    if (rc.family != "zero" && rc.family != "additive" && rc.family != "affine_lowpass")
        fail("", "key 'coefficients.family': unknown family '" + rc.family + "'");
    for (double w : rc.mark_weights)
        if (!(w > 0.0)) fail("", "key 'marks.weights': weights must be positive");
    if (rc.family != "zero" && !rc.mark_weights.empty() &&
        rc.jump_k.size() != rc.mark_weights.size() && !rc.jump_k.empty())
        fail("", "key 'coefficients.jump_k': one mode per mark required");
    if (rc.jump_amp.size() != rc.jump_k.size())
        fail("", "key 'coefficients.jump_amp': one amplitude per jump mode required");
    if (rc.lowpass < 1.0) fail("", "key 'coefficients.lowpass': must be >= 1");
    if (rc.paths < 1) fail("", "key 'run.paths': must be >= 1");
    if (rc.workers < 1) fail("", "key 'run.workers': must be >= 1");
    if (rc.samples < 1) fail("", "key 'run.samples': must be >= 1");
    if (!(rc.decay_tolerance > 0.0)) fail("", "key 'run.decay_tolerance': must be positive");
    if (rc.initial_kind != "zero" && rc.initial_kind != "mode" && rc.initial_kind != "single" &&
        rc.initial_kind != "smooth")
        fail("", "key 'initial.kind': expected zero, mode, single or smooth");
    return rc;
}

KeyMap read_keymap(std::istream& is, const std::string& origin) {
    KeyMap kv;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        std::string t = trim(line);
        if (auto hash = t.find('#'); hash != std::string::npos) t = trim(t.substr(0, hash));
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') fail(where, "malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) fail(where, "empty section name");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) fail(where, "expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) fail(where, "empty key");
        if (section.empty()) fail(where, "key outside of any section");
        kv[section + "." + key] = {value, where};
    }
    return kv;
}

void apply_overrides(KeyMap& kv, const std::vector<std::string>& overrides) {
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + ov + "'");
        std::string key = trim(ov.substr(0, eq));
        if (key.empty()) throw ConfigError("--set expects key=value, got '" + ov + "'");
        // Unqualified keys resolve by unique suffix match against the key set.
        if (key.find('.') == std::string::npos) {
            std::string resolved;
            for (const auto& known : known_keys()) {
                if (known.size() > key.size() && known.compare(known.size() - key.size(),
                                                               key.size(), key) == 0 &&
                    known[known.size() - key.size() - 1] == '.') {
                    if (!resolved.empty())
                        throw ConfigError("--set key '" + key + "' is ambiguous ('" + resolved +
                                          "' vs '" + known + "')");
                    resolved = known;
                }
            }
            if (resolved.empty()) throw ConfigError("--set: unknown key '" + key + "'");
            key = resolved;
        }
        kv[key] = {trim(ov.substr(eq + 1)), "--set " + ov};
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            const std::vector<std::string>& overrides) {
    std::istringstream is(text);
    KeyMap kv = read_keymap(is, origin);
    apply_overrides(kv, overrides);
    return from_keymap(kv);
}

RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    KeyMap kv = read_keymap(is, path);
    apply_overrides(kv, overrides);
    return from_keymap(kv);
}

GalerkinLevel RunConfig::level() const {
    if (modes > 0) return GalerkinLevel::first_modes(modes, alpha);
    if (cutoff > 0) return GalerkinLevel::full_box(cutoff, alpha);
    if (!levels.empty()) return GalerkinLevel::first_modes(levels.back(), alpha);
    throw ConfigError("no Galerkin level configured");
}

std::vector<GalerkinLevel> RunConfig::level_list() const {
    std::vector<GalerkinLevel> out;
    for (int n : levels) out.push_back(GalerkinLevel::first_modes(n, alpha));
    if (out.empty()) out.push_back(level());
    return out;
}

CoefficientsPtr RunConfig::coefficients() const {
    MarkSpace marks{mark_weights};
    ModeAmplitude forcing{forcing_k, forcing_amp};
    ModeAmplitude diffusion{diffusion_k, diffusion_amp};
    std::vector<ModeAmplitude> jumps;
    for (std::size_t j = 0; j < jump_k.size(); ++j)
        jumps.push_back({jump_k[j], jump_amp[j]});
    // Marks without explicit modes default to silent jumps on (1,0).
    while (int(jumps.size()) < marks.size()) jumps.push_back({WaveVector{1, 0}, 0.0});

    if (family == "zero") return make_zero_coefficients(alpha, marks);
    if (family == "additive")
        return make_additive_coefficients(alpha, marks, forcing, diffusion, std::move(jumps));
    return make_affine_lowpass_coefficients(alpha, marks, forcing, diffusion, std::move(jumps),
                                            kappa_forcing, kappa_diffusion, kappa_jump, lowpass);
}

SpectralField RunConfig::initial_field(const GalerkinLevel& lvl) const {
    if (initial_kind == "zero") return SpectralField(lvl.box(), alpha);
    if (initial_kind == "mode") return unit_real_mode(initial_k, lvl.box(), alpha, initial_amp);
    if (initial_kind == "single")
        return single_mode(initial_k, lvl.box(), alpha, Complex{initial_amp, 0.0});
    SpectralField u = smooth_phase_field(lvl, seed, 77, 0, initial_decay);
    const double w = norm(u, Space::W);
    if (w > 0.0) u *= initial_amp / w;  // normalized strong norm
    return project_level(u, lvl);
}

SimConfig RunConfig::sim_config() const {
    SimConfig cfg;
    cfg.params = domain();
    cfg.level = level();
    cfg.coeffs = coefficients();
    cfg.horizon = horizon;
    cfg.dt = dt;
    cfg.scheme = scheme;
    cfg.record_every = record_every;
    cfg.w_cap = w_cap;
    cfg.initial = project_level(initial_field(cfg.level), cfg.level);
    return cfg;
}

std::map<std::string, std::string> RunConfig::echo() const {
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    auto kfmt = [](WaveVector k) {
        return std::to_string(k.k1) + "," + std::to_string(k.k2);
    };
    std::map<std::string, std::string> m;
    m["domain.alpha"] = fmt(alpha);
    m["domain.mu"] = fmt(mu);
    if (cutoff > 0) m["galerkin.cutoff"] = std::to_string(cutoff);
    if (modes > 0) m["galerkin.modes"] = std::to_string(modes);
    if (!levels.empty()) {
        std::string s;
        for (int n : levels) s += (s.empty() ? "" : ",") + std::to_string(n);
        m["galerkin.levels"] = s;
    }
    m["time.horizon"] = fmt(horizon);
    m["time.dt"] = fmt(dt);
    m["time.scheme"] = to_string(scheme);
    m["time.record_every"] = std::to_string(record_every);
    m["time.w_cap"] = fmt(w_cap);
    m["coefficients.family"] = family;
    m["coefficients.forcing_k"] = kfmt(forcing_k);
    m["coefficients.forcing_amp"] = fmt(forcing_amp);
    m["coefficients.diffusion_k"] = kfmt(diffusion_k);
    m["coefficients.diffusion_amp"] = fmt(diffusion_amp);
    {
        std::string ks, as;
        for (std::size_t j = 0; j < jump_k.size(); ++j) {
            ks += (ks.empty() ? "" : ";") + kfmt(jump_k[j]);
            as += (as.empty() ? "" : ",") + fmt(jump_amp[j]);
        }
        if (!ks.empty()) {
            m["coefficients.jump_k"] = ks;
            m["coefficients.jump_amp"] = as;
        }
    }
    if (family == "affine_lowpass") {
        m["coefficients.kappa_forcing"] = fmt(kappa_forcing);
        m["coefficients.kappa_diffusion"] = fmt(kappa_diffusion);
        m["coefficients.kappa_jump"] = fmt(kappa_jump);
        m["coefficients.lowpass"] = fmt(lowpass);
    }
    {
        std::string s;
        for (double w : mark_weights) s += (s.empty() ? "" : ",") + fmt(w);
        if (!s.empty()) m["marks.weights"] = s;
    }
    m["initial.kind"] = initial_kind;
    m["initial.k"] = kfmt(initial_k);
    m["initial.amplitude"] = fmt(initial_amp);
    m["initial.decay"] = fmt(initial_decay);
    m["run.seed"] = std::to_string(seed);
    m["run.paths"] = std::to_string(paths);
    m["run.workers"] = std::to_string(workers);
    m["run.samples"] = std::to_string(samples);
    m["run.contraction_offset"] = fmt(contraction_offset);
    m["run.decay_tolerance"] = fmt(decay_tolerance);
    m["run.out"] = out_dir;
    return m;
}

}  // namespace sgf
