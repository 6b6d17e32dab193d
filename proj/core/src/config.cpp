#include "chemlv/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace chemlv {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

using KvMap = std::map<std::string, std::string>;

KvMap parse_kv(const std::string& text) {
    KvMap kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + " is not key = value");
        }
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return kv;
}

void flatten_json(const nlohmann::json& j, const std::string& prefix, KvMap& kv) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            flatten_json(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), kv);
        }
    } else if (j.is_string()) {
        kv[prefix] = j.get<std::string>();
    } else {
        kv[prefix] = j.dump();
    }
}

struct Reader {
    const KvMap& kv;
    explicit Reader(const KvMap& m) : kv(m) {}

    const std::string* find(const std::string& key) const {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    }
    double require_num(const std::string& key) const {
        const std::string* s = find(key);
        if (!s) throw ConfigError("missing required field: " + key);
        return to_num(key, *s);
    }
    double num(const std::string& key, double fallback) const {
        const std::string* s = find(key);
        return s ? to_num(key, *s) : fallback;
    }
    long integer(const std::string& key, long fallback) const {
        const std::string* s = find(key);
        if (!s) return fallback;
        try {
            std::size_t pos = 0;
            const long v = std::stol(*s, &pos);
            if (pos != s->size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError("field " + key + " is not an integer: " + *s);
        }
    }
    bool boolean(const std::string& key, bool fallback) const {
        const std::string* s = find(key);
        if (!s) return fallback;
        if (*s == "true" || *s == "1") return true;
        if (*s == "false" || *s == "0") return false;
        throw ConfigError("field " + key + " is not a boolean: " + *s);
    }
    std::string text(const std::string& key, const std::string& fallback) const {
        const std::string* s = find(key);
        return s ? *s : fallback;
    }

  private:
    static double to_num(const std::string& key, const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError("field " + key + " is not a number: " + s);
        }
    }
};

RunConfig apply(const KvMap& kv) {
    Reader r(kv);
    RunConfig c;
    c.params.chi1 = r.require_num("params.chi1");
    c.params.chi2 = r.require_num("params.chi2");
    c.params.a1 = r.require_num("params.a1");
    c.params.a2 = r.require_num("params.a2");
    c.params.b1 = r.require_num("params.b1");
    c.params.b2 = r.require_num("params.b2");
    c.params.c1 = r.require_num("params.c1");
    c.params.c2 = r.require_num("params.c2");
    c.params.mu = r.require_num("params.mu");
    c.params.nu = r.require_num("params.nu");
    c.params.lambda = r.require_num("params.lambda");

    c.dimension = static_cast<int>(r.integer("grid.dimension", 0));
    if (c.dimension != 1 && c.dimension != 2) {
        throw ConfigError(kv.count("grid.dimension") ? "field grid.dimension must be 1 or 2"
                                                     : "missing required field: grid.dimension");
    }
    c.nx = static_cast<int>(r.integer("grid.nx", 0));
    if (c.nx < 2) throw ConfigError("missing required field: grid.nx (>= 2)");
    c.lx = r.require_num("grid.lx");
    if (c.dimension == 2) {
        c.ny = static_cast<int>(r.integer("grid.ny", 0));
        if (c.ny < 2) throw ConfigError("missing required field: grid.ny (>= 2)");
        c.ly = r.require_num("grid.ly");
    }

    StepperConfig& s = c.stepper;
    s.dt_max = r.num("stepper.dt_max", s.dt_max);
    s.cfl_safety = r.num("stepper.cfl_safety", s.cfl_safety);
    s.w_floor = r.num("stepper.w_floor", s.w_floor);
    s.t_end = r.num("stepper.t_end", s.t_end);
    s.output_stride = static_cast<int>(r.integer("stepper.output_stride", s.output_stride));
    s.tol_converge = r.num("stepper.tol_converge", s.tol_converge);
    s.blowup_cap = r.num("stepper.blowup_cap", s.blowup_cap);
    s.t_warmup = r.num("stepper.t_warmup", s.t_warmup);
    s.checkpoint_step = r.integer("stepper.checkpoint_step", s.checkpoint_step);
    s.checkpoint_path = r.text("stepper.checkpoint_path", s.checkpoint_path);
    s.debug_allow_clipping = r.boolean("stepper.debug_allow_clipping", false);

    const std::string kind = r.text("ic.kind", "perturbed_equilibrium");
    if (kind == "constant") {
        s.ic.kind = IcKind::Constant;
    } else if (kind == "perturbed_equilibrium") {
        s.ic.kind = IcKind::PerturbedEquilibrium;
    } else if (kind == "random_positive") {
        s.ic.kind = IcKind::RandomPositive;
    } else if (kind == "from_file") {
        s.ic.kind = IcKind::FromFile;
    } else {
        throw ConfigError("field ic.kind must be one of constant | perturbed_equilibrium | "
                          "random_positive | from_file");
    }
    s.ic.u0 = r.num("ic.u0", s.ic.u0);
    s.ic.v0 = r.num("ic.v0", s.ic.v0);
    s.ic.amplitude = r.num("ic.amplitude", s.ic.amplitude);
    s.ic.lo = r.num("ic.lo", s.ic.lo);
    s.ic.hi = r.num("ic.hi", s.ic.hi);
    s.ic.file = r.text("ic.file", s.ic.file);
    if (s.ic.kind == IcKind::FromFile && s.ic.file.empty()) {
        throw ConfigError("missing required field: ic.file");
    }

    c.output.series_csv = r.boolean("output.series_csv", c.output.series_csv);
    c.output.summary_json = r.boolean("output.summary_json", c.output.summary_json);
    c.output.snapshots = r.boolean("output.snapshots", c.output.snapshots);
    c.output.svg = r.boolean("output.svg", c.output.svg);

    c.sweep.k = static_cast<int>(r.integer("sweep.k", c.sweep.k));
    if (c.sweep.k < 1 || c.sweep.k > 64) throw ConfigError("field sweep.k must be in [1, 64]");
    c.sweep.chi1_min = r.num("sweep.chi1_min", c.sweep.chi1_min);
    c.sweep.chi1_max = r.num("sweep.chi1_max", c.sweep.chi1_max);
    c.sweep.chi2_min = r.num("sweep.chi2_min", c.sweep.chi2_min);
    c.sweep.chi2_max = r.num("sweep.chi2_max", c.sweep.chi2_max);
    c.sweep.simulate = r.boolean("sweep.simulate", c.sweep.simulate);

    c.out_dir = r.text("out_dir", c.out_dir);
    c.threads = static_cast<int>(r.integer("threads", c.threads));
    const long seed = r.integer("seed", static_cast<long>(s.seed));
    if (seed < 0) throw ConfigError("field seed must be nonnegative");
    s.seed = static_cast<std::uint64_t>(seed);

    c.params.validate();
    return c;
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Grid RunConfig::make_grid() const {
    return dimension == 1 ? Grid::interval(nx, lx) : Grid::rectangle(nx, ny, lx, ly);
}

RunConfig parse_config_text(const std::string& text, bool is_json) {
    if (is_json) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("invalid JSON config: ") + e.what());
        }
        KvMap kv;
        flatten_json(j, "", kv);
        return apply(kv);
    }
    return apply(parse_kv(text));
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    bool is_json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) continue;
        is_json = is_json || ch == '{';
        break;
    }
    return parse_config_text(text, is_json);
}

std::string canonical_config_text(const RunConfig& c) {
    std::map<std::string, std::string> kv;
    kv["params.chi1"] = fmt_num(c.params.chi1);
    kv["params.chi2"] = fmt_num(c.params.chi2);
    kv["params.a1"] = fmt_num(c.params.a1);
    kv["params.a2"] = fmt_num(c.params.a2);
    kv["params.b1"] = fmt_num(c.params.b1);
    kv["params.b2"] = fmt_num(c.params.b2);
    kv["params.c1"] = fmt_num(c.params.c1);
    kv["params.c2"] = fmt_num(c.params.c2);
    kv["params.mu"] = fmt_num(c.params.mu);
    kv["params.nu"] = fmt_num(c.params.nu);
    kv["params.lambda"] = fmt_num(c.params.lambda);
    kv["grid.dimension"] = std::to_string(c.dimension);
    kv["grid.nx"] = std::to_string(c.nx);
    kv["grid.lx"] = fmt_num(c.lx);
    if (c.dimension == 2) {
        kv["grid.ny"] = std::to_string(c.ny);
        kv["grid.ly"] = fmt_num(c.ly);
    }
    const StepperConfig& s = c.stepper;
    kv["stepper.dt_max"] = fmt_num(s.dt_max);
    kv["stepper.cfl_safety"] = fmt_num(s.cfl_safety);
    kv["stepper.w_floor"] = fmt_num(s.w_floor);
    kv["stepper.t_end"] = fmt_num(s.t_end);
    kv["stepper.output_stride"] = std::to_string(s.output_stride);
    kv["stepper.tol_converge"] = fmt_num(s.tol_converge);
    kv["stepper.blowup_cap"] = fmt_num(s.blowup_cap);
    kv["stepper.t_warmup"] = fmt_num(s.t_warmup);
    kv["stepper.checkpoint_step"] = std::to_string(s.checkpoint_step);
    kv["stepper.debug_allow_clipping"] = s.debug_allow_clipping ? "true" : "false";
    switch (s.ic.kind) {
        case IcKind::Constant: kv["ic.kind"] = "constant"; break;
        case IcKind::PerturbedEquilibrium: kv["ic.kind"] = "perturbed_equilibrium"; break;
        case IcKind::RandomPositive: kv["ic.kind"] = "random_positive"; break;
        case IcKind::FromFile: kv["ic.kind"] = "from_file"; break;
    }
    kv["ic.u0"] = fmt_num(s.ic.u0);
    kv["ic.v0"] = fmt_num(s.ic.v0);
    kv["ic.amplitude"] = fmt_num(s.ic.amplitude);
    kv["ic.lo"] = fmt_num(s.ic.lo);
    kv["ic.hi"] = fmt_num(s.ic.hi);
    kv["ic.file"] = s.ic.file;
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

std::string config_hash(const RunConfig& cfg) {
    const std::string text = canonical_config_text(cfg);
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace chemlv
