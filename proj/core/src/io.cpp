#include "chemlv/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace chemlv {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hexf(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw ConfigError("bad numeric token: " + s);
    return v;
}

}  // namespace

std::string series_csv(const Trajectory& records, const std::string& hash, std::uint64_t seed) {
    std::string out = "# config_hash=" + hash + " seed=" + std::to_string(seed) + "\n";
    out += "t,mass_u,mass_v,mass_uv,mass_inv_p,min_w,energy,l2_u,l2_v,linf_u,linf_v,linf_w\n";
    for (const DiagnosticsRecord& r : records) {
        out += g17(r.t);
        for (double v : {r.mass_u, r.mass_v, r.mass_uv, r.mass_inv_p, r.min_w, r.energy,
                         r.l2_u, r.l2_v, r.linf_u, r.linf_v, r.linf_w}) {
            out += ',';
            out += g17(v);
        }
        out += '\n';
    }
    return out;
}

std::string field_csv(const Field& f) {
    const Grid& g = f.grid;
    std::string out = g.dim == 1 ? "x,value\n" : "x,y,value\n";
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            out += g17(g.x_center(i));
            if (g.dim == 2) {
                out += ',';
                out += g17(g.y_center(j));
            }
            out += ',';
            out += g17(f[g.idx(i, j)]);
            out += '\n';
        }
    }
    return out;
}

std::string snapshot_csv(const State& s) {
    const Grid& g = s.u.grid;
    std::string out = g.dim == 1 ? "x,u,v,w\n" : "x,y,u,v,w\n";
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int c = g.idx(i, j);
            out += g17(g.x_center(i));
            if (g.dim == 2) {
                out += ',';
                out += g17(g.y_center(j));
            }
            out += ',';
            out += g17(s.u[c]);
            out += ',';
            out += g17(s.v[c]);
            out += ',';
            out += g17(s.w[c]);
            out += '\n';
        }
    }
    return out;
}

std::string checkpoint_text(const ModelParams& p, const Grid& g, const State& s,
                            long step, long records_emitted, const std::string& hash,
                            std::uint64_t seed) {
    std::ostringstream os;
    os << "# chemlv checkpoint v1\n";
    os << "# config_hash=" << hash << " seed=" << seed << "\n";
    os << "hash " << (hash.empty() ? "-" : hash) << "\n";
    os << "seed " << seed << "\n";
    const std::pair<const char*, double> fields[] = {
        {"chi1", p.chi1}, {"chi2", p.chi2}, {"a1", p.a1}, {"a2", p.a2},
        {"b1", p.b1},     {"b2", p.b2},     {"c1", p.c1}, {"c2", p.c2},
        {"mu", p.mu},     {"nu", p.nu},     {"lambda", p.lambda},
    };
    for (const auto& [name, value] : fields) os << "param " << name << ' ' << hexf(value) << "\n";
    os << "grid dim " << g.dim << "\n";
    os << "grid nx " << g.nx << "\n";
    os << "grid ny " << g.ny << "\n";
    os << "grid lx " << hexf(g.lx) << "\n";
    os << "grid ly " << hexf(g.ly) << "\n";
    os << "t " << hexf(s.t) << "\n";
    os << "step " << step << "\n";
    os << "records " << records_emitted << "\n";
    const std::pair<const char*, const Field*> blocks[] = {
        {"u", &s.u}, {"v", &s.v}, {"w", &s.w}};
    for (const auto& [name, field] : blocks) {
        os << "field " << name << ' ' << field->size() << "\n";
        for (double v : field->data) os << hexf(v) << "\n";
    }
    return os.str();
}

Checkpoint parse_checkpoint(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Checkpoint ck;
    int dim = 1, nx = 0, ny = 1;
    double lx = 0, ly = 0;
    bool have_grid = false;
    auto ensure_grid = [&]() {
        if (!have_grid) {
            ck.grid = dim == 1 ? Grid::interval(nx, lx) : Grid::rectangle(nx, ny, lx, ly);
            have_grid = true;
        }
    };
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "hash") {
            ls >> ck.hash;
            if (ck.hash == "-") ck.hash.clear();
        } else if (tag == "seed") {
            ls >> ck.seed;
        } else if (tag == "param") {
            std::string name, val;
            ls >> name >> val;
            const double v = parse_double(val);
            ModelParams& p = ck.params;
            if (name == "chi1") p.chi1 = v;
            else if (name == "chi2") p.chi2 = v;
            else if (name == "a1") p.a1 = v;
            else if (name == "a2") p.a2 = v;
            else if (name == "b1") p.b1 = v;
            else if (name == "b2") p.b2 = v;
            else if (name == "c1") p.c1 = v;
            else if (name == "c2") p.c2 = v;
            else if (name == "mu") p.mu = v;
            else if (name == "nu") p.nu = v;
            else if (name == "lambda") p.lambda = v;
            else throw ConfigError("unknown checkpoint parameter: " + name);
        } else if (tag == "grid") {
            std::string name, val;
            ls >> name >> val;
            if (name == "dim") dim = std::stoi(val);
            else if (name == "nx") nx = std::stoi(val);
            else if (name == "ny") ny = std::stoi(val);
            else if (name == "lx") lx = parse_double(val);
            else if (name == "ly") ly = parse_double(val);
        } else if (tag == "t") {
            std::string val;
            ls >> val;
            ck.state.t = parse_double(val);
        } else if (tag == "step") {
            ls >> ck.step;
        } else if (tag == "records") {
            ls >> ck.records_emitted;
        } else if (tag == "field") {
            ensure_grid();
            std::string name;
            int n = 0;
            ls >> name >> n;
            Field f(ck.grid);
            if (n != f.size()) throw ConfigError("checkpoint field size mismatch");
            for (int i = 0; i < n; ++i) {
                if (!std::getline(in, line)) throw ConfigError("truncated checkpoint field");
                f[i] = parse_double(line);
            }
            if (name == "u") ck.state.u = std::move(f);
            else if (name == "v") ck.state.v = std::move(f);
            else if (name == "w") ck.state.w = std::move(f);
            else throw ConfigError("unknown checkpoint field: " + name);
        } else {
            throw ConfigError("unknown checkpoint tag: " + tag);
        }
    }
    if (!have_grid || ck.state.u.size() == 0 || ck.state.v.size() == 0 || ck.state.w.size() == 0) {
        throw ConfigError("incomplete checkpoint");
    }
    return ck;
}

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::vector<ChartSeries>& series, bool log_y) {
    const int width = 860, height = 520;
    const int ml = 70, mr = 160, mt = 40, mb = 50;
    const double plot_w = width - ml - mr, plot_h = height - mt - mb;
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const ChartSeries& s : series) {
        for (auto [x, y] : s.points) {
            if (log_y && !(y > 0.0)) continue;
            const double yy = log_y ? std::log10(y) : y;
            if (!std::isfinite(x) || !std::isfinite(yy)) continue;
            if (first) {
                xmin = xmax = x;
                ymin = ymax = yy;
                first = false;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, yy);
                ymax = std::max(ymax, yy);
            }
        }
    }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return mt + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };

    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
       << "' viewBox='0 0 " << width << ' ' << height << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
       << "</text>\n";
    os << "<rect x='" << ml << "' y='" << mt << "' width='" << plot_w << "' height='" << plot_h
       << "' fill='none' stroke='black'/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = xmin + (xmax - xmin) * k / 4.0;
        const double fy = ymin + (ymax - ymin) * k / 4.0;
        os << "<text x='" << px(fx) << "' y='" << height - mb + 20
           << "' text-anchor='middle' font-size='11'>" << g17(fx).substr(0, 8) << "</text>\n";
        std::string ylab = log_y ? ("1e" + g17(fy).substr(0, 7)) : g17(fy).substr(0, 8);
        os << "<text x='" << ml - 8 << "' y='" << py(fy) + 4
           << "' text-anchor='end' font-size='11'>" << ylab << "</text>\n";
        os << "<line x1='" << ml << "' y1='" << py(fy) << "' x2='" << ml + plot_w << "' y2='"
           << py(fy) << "' stroke='#dddddd'/>\n";
    }
    os << "<text x='" << ml + plot_w / 2 << "' y='" << height - 10
       << "' text-anchor='middle' font-size='12'>" << x_label << "</text>\n";
    int ci = 0;
    for (const ChartSeries& s : series) {
        const char* color = palette[ci % 6];
        os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (auto [x, y] : s.points) {
            if (log_y && !(y > 0.0)) continue;
            const double yy = log_y ? std::log10(y) : y;
            if (!std::isfinite(yy) || !std::isfinite(x)) continue;
            os << px(x) << ',' << py(yy) << ' ';
        }
        os << "'/>\n";
        os << "<text x='" << ml + plot_w + 10 << "' y='" << mt + 16 + 18 * ci
           << "' font-size='12' fill='" << color << "'>" << s.label << "</text>\n";
        ++ci;
    }
    os << "</svg>\n";
    return os.str();
}

std::string summary_json(const RunConfig& cfg, const RunResult& result,
                         const InequalityReport& ineq, const BoundsReport& bounds,
                         const ConditionReport& conditions, const std::string& hash) {
    using nlohmann::json;
    json j;
    j["config_hash"] = hash;
    j["seed"] = cfg.stepper.seed;
    j["classification"] = to_string(result.classification);
    j["mode"] = to_string(result.mode);
    j["steps"] = result.steps;
    j["t_final"] = result.final_state.t;
    j["w_floor"] = result.w_floor;
    j["blowup_cap"] = result.blowup_cap;
    if (!result.error_detail.empty()) j["error_detail"] = result.error_detail;
    if (!result.records.empty()) {
        const DiagnosticsRecord& r = result.records.back();
        j["final"] = json{{"t", r.t},          {"mass_uv", r.mass_uv}, {"min_w", r.min_w},
                          {"energy", r.energy}, {"l2_u", r.l2_u},       {"l2_v", r.l2_v},
                          {"linf_u", r.linf_u}, {"linf_v", r.linf_v},   {"linf_w", r.linf_w}};
    }
    j["eps_hat"] = ineq.eps_fit_valid ? json(ineq.eps_hat) : json(nullptr);
    j["inequalities"] = json::parse(inequality_report_to_json(ineq));
    json bj = json::array();
    for (const BoundCheck& c : bounds.checks) {
        bj.push_back(json{{"name", c.name},
                          {"bound", c.bound},
                          {"observed_tail_min", c.observed_tail_min},
                          {"satisfied", c.satisfied},
                          {"informational", c.informational}});
    }
    j["asymptotic_bounds"] = bj;
    j["conditions"] = json::parse(condition_report_to_json(conditions, cfg.params));
    return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace chemlv
