#include "flowtopo/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace flowtopo {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eEnN") == std::string::npos) s += ".0";
    return s;
}

JsonDoc& JsonDoc::set(const std::string& key, JsonDoc v) {
    auto& obj = std::get<Object>(value_);
    for (auto& [k, existing] : obj.items)
        if (k == key) {
            existing = std::move(v);
            return *this;
        }
    obj.items.emplace_back(key, std::move(v));
    return *this;
}

JsonDoc& JsonDoc::push(JsonDoc v) {
    std::get<Array>(value_).items.push_back(std::move(v));
    return *this;
}

namespace {

void dump_string(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

}  // namespace

void JsonDoc::dump_to(std::string& out, int indent, int depth) const {
    const std::string pad((depth + 1) * indent, ' ');
    const std::string pad_end(depth * indent, ' ');
    if (std::holds_alternative<std::nullptr_t>(value_)) {
        out += "null";
    } else if (auto* b = std::get_if<bool>(&value_)) {
        out += *b ? "true" : "false";
    } else if (auto* d = std::get_if<double>(&value_)) {
        out += format_double(*d);
    } else if (auto* s = std::get_if<std::string>(&value_)) {
        dump_string(out, *s);
    } else if (auto* arr = std::get_if<Array>(&value_)) {
        if (arr->items.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < arr->items.size(); ++i) {
            out += pad;
            arr->items[i].dump_to(out, indent, depth + 1);
            if (i + 1 < arr->items.size()) out += ",";
            out += "\n";
        }
        out += pad_end + "]";
    } else if (auto* obj = std::get_if<Object>(&value_)) {
        if (obj->items.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        for (std::size_t i = 0; i < obj->items.size(); ++i) {
            out += pad;
            dump_string(out, obj->items[i].first);
            out += ": ";
            obj->items[i].second.dump_to(out, indent, depth + 1);
            if (i + 1 < obj->items.size()) out += ",";
            out += "\n";
        }
        out += pad_end + "}";
    }
}

std::string JsonDoc::dump(int indent) const {
    std::string out;
    dump_to(out, indent, 0);
    out += "\n";
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        if (!out.good()) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("atomic rename failed: " + path);
}

SystemParams RunConfig::make_params() const {
    SystemKind kind = system_kind_from_string(system);
    switch (kind) {
        case SystemKind::NoseHoover: return SystemParams::nose_hoover(Q);
        case SystemKind::MooreSpiegel: return SystemParams::moore_spiegel(T, R);
        case SystemKind::ValidationHopf: return SystemParams::validation_hopf(mu, omega);
        case SystemKind::Custom: {
            std::ifstream in(field_file);
            if (!in) throw std::runtime_error("cannot open field file: " + field_file);
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            auto def = std::make_shared<expr::FieldDef>(expr::parse_field_file(text));
            return SystemParams::custom_field(def);
        }
    }
    throw std::logic_error("unreachable");
}

JsonDoc RunConfig::to_json() const {
    JsonDoc d = JsonDoc::object();
    d.set("system", system);
    d.set("Q", Q);
    d.set("T", T);
    d.set("R", R);
    d.set("mu", mu);
    d.set("omega", omega);
    d.set("field_file", field_file);
    JsonDoc integ = JsonDoc::object();
    integ.set("rel_tol", integrator.rel_tol);
    integ.set("abs_tol", integrator.abs_tol);
    integ.set("max_step", integrator.max_step);
    integ.set("t_max", integrator.t_max);
    integ.set("escape_radius", integrator.escape_radius);
    d.set("integrator", std::move(integ));
    d.set("seed", static_cast<double>(seed));
    d.set("format", format);
    d.set("out_dir", out_dir);
    return d;
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RunConfig cfg;
    cfg.system = j.value("system", cfg.system);
    cfg.Q = j.value("Q", cfg.Q);
    cfg.T = j.value("T", cfg.T);
    cfg.R = j.value("R", cfg.R);
    cfg.mu = j.value("mu", cfg.mu);
    cfg.omega = j.value("omega", cfg.omega);
    cfg.field_file = j.value("field_file", cfg.field_file);
    if (j.contains("integrator")) {
        const auto& i = j["integrator"];
        cfg.integrator.rel_tol = i.value("rel_tol", cfg.integrator.rel_tol);
        cfg.integrator.abs_tol = i.value("abs_tol", cfg.integrator.abs_tol);
        cfg.integrator.max_step = i.value("max_step", cfg.integrator.max_step);
        cfg.integrator.t_max = i.value("t_max", cfg.integrator.t_max);
        cfg.integrator.escape_radius = i.value("escape_radius", cfg.integrator.escape_radius);
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.format = j.value("format", cfg.format);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    return cfg;
}

JsonDoc system_params_json(const SystemParams& params) {
    JsonDoc d = JsonDoc::object();
    d.set("system", to_string(params.kind));
    switch (params.kind) {
        case SystemKind::NoseHoover: d.set("Q", params.Q); break;
        case SystemKind::MooreSpiegel:
            d.set("T", params.T);
            d.set("R", params.R);
            break;
        case SystemKind::ValidationHopf:
            d.set("mu", params.mu);
            d.set("omega", params.omega);
            break;
        case SystemKind::Custom:
            if (params.custom) {
                JsonDoc comps = JsonDoc::array();
                for (int i = 0; i < 3; ++i) comps.push(params.custom->component_str(i));
                d.set("components", std::move(comps));
            }
            break;
    }
    return d;
}

JsonDoc integrator_config_json(const IntegratorConfig& cfg) {
    JsonDoc d = JsonDoc::object();
    d.set("rel_tol", cfg.rel_tol);
    d.set("abs_tol", cfg.abs_tol);
    d.set("max_step", cfg.max_step);
    d.set("t_max", cfg.t_max);
    d.set("escape_radius", cfg.escape_radius);
    return d;
}

JsonDoc claim_report_json(const ClaimReport& report) {
    JsonDoc d = JsonDoc::object();
    JsonDoc opts = JsonDoc::object();
    opts.set("include_nose_hoover", report.options.include_nose_hoover);
    opts.set("include_moore_spiegel", report.options.include_moore_spiegel);
    opts.set("include_fixtures", report.options.include_fixtures);
    opts.set("include_orbit_hunts", report.options.include_orbit_hunts);
    opts.set("mutate_index_sign", report.options.mutate_index_sign);
    d.set("options", std::move(opts));

    JsonDoc arr = JsonDoc::array();
    for (const auto& c : report.claims) {
        JsonDoc e = JsonDoc::object();
        e.set("claim_id", c.id);
        e.set("statement", c.statement);
        e.set("system", c.system);
        e.set("status", to_string(c.status));
        e.set("tolerance", c.tolerance);
        JsonDoc meas = JsonDoc::object();
        for (const auto& m : c.measured) meas.set(m.name, m.value);
        e.set("measured", std::move(meas));
        if (!c.note.empty()) e.set("note", c.note);
        arr.push(std::move(e));
    }
    d.set("claims", std::move(arr));
    d.set("all_passed", report.all_passed());
    return d;
}

JsonDoc orbit_json(const PeriodicOrbit& orbit, const SystemParams& params) {
    JsonDoc d = JsonDoc::object();
    d.set("params", system_params_json(params));
    JsonDoc pts = JsonDoc::array();
    for (const auto& p : orbit.section_points) {
        JsonDoc e = JsonDoc::object();
        e.set("x", p.x);
        e.set("z", p.z);
        e.set("speed", p.speed);
        pts.push(std::move(e));
    }
    d.set("section_points", std::move(pts));
    d.set("period", orbit.period);
    d.set("residual", orbit.residual);
    JsonDoc mults = JsonDoc::array();
    for (const auto& m : orbit.multipliers) {
        JsonDoc e = JsonDoc::object();
        e.set("re", m.real());
        e.set("im", m.imag());
        mults.push(std::move(e));
    }
    d.set("multipliers", std::move(mults));
    d.set("n_strands", orbit.n_strands);
    return d;
}

JsonDoc braid_json(const BraidData& braid) {
    JsonDoc d = JsonDoc::object();
    d.set("n_strands", braid.n_strands);
    JsonDoc up = JsonDoc::array(), down = JsonDoc::array();
    for (int g : braid.word_up) up.push(g);
    for (int g : braid.word_down) down.push(g);
    d.set("word_up", std::move(up));
    d.set("word_down", std::move(down));
    JsonDoc alex = JsonDoc::object();
    alex.set("lowest_degree", braid.alexander.low_degree());
    JsonDoc coeffs = JsonDoc::array();
    for (long long c : braid.alexander.coeffs()) coeffs.push(static_cast<double>(c));
    alex.set("coefficients", std::move(coeffs));
    alex.set("text", braid.alexander.str());
    d.set("alexander", std::move(alex));
    d.set("verdict", to_string(braid.verdict));
    return d;
}

JsonDoc degree_json(const IndexResult& result, const SystemParams& params) {
    JsonDoc d = JsonDoc::object();
    d.set("params", system_params_json(params));
    JsonDoc center = JsonDoc::object();
    center.set("x", result.point.x);
    center.set("y", result.point.y);
    center.set("z", result.point.z);
    d.set("center", std::move(center));
    d.set("radius", result.radius);
    d.set("subdivision", result.subdivision);
    d.set("raw_degree", result.raw_degree);
    d.set("degree", result.numerical_degree);
    if (result.analytic) d.set("analytic_index", *result.analytic);
    d.set("agreement", result.agreement);
    return d;
}

JsonDoc spectrum_json(const SpectrumClass& spectrum) {
    JsonDoc d = JsonDoc::object();
    JsonDoc eigs = JsonDoc::array();
    for (const auto& ev : spectrum.eigenvalues) {
        JsonDoc e = JsonDoc::object();
        e.set("re", ev.real());
        e.set("im", ev.imag());
        eigs.push(std::move(e));
    }
    d.set("eigenvalues", std::move(eigs));
    JsonDoc rh = JsonDoc::object();
    rh.set("a", spectrum.rh_a);
    rh.set("ab_minus_c", spectrum.rh_ab_minus_c);
    rh.set("c", spectrum.rh_c);
    d.set("rh_triple", std::move(rh));
    d.set("class", to_string(spectrum.kind));
    d.set("unstable_plane_section_angle", spectrum.unstable_plane_section_angle);
    return d;
}

JsonDoc fate_json(const Fate& fate) {
    JsonDoc d = JsonDoc::object();
    d.set("tag", to_string(fate.tag));
    d.set("t", fate.t);
    JsonDoc s = JsonDoc::object();
    s.set("x", fate.state.x);
    s.set("y", fate.state.y);
    s.set("z", fate.state.z);
    d.set("state", std::move(s));
    return d;
}

JsonDoc trajectory_meta_json(const Trajectory& traj, const Fate* fate) {
    JsonDoc d = JsonDoc::object();
    d.set("params", system_params_json(traj.params()));
    d.set("config", integrator_config_json(traj.config()));
    d.set("t_begin", traj.t_begin());
    d.set("t_end", traj.t_end());
    d.set("samples", traj.size());
    if (fate) d.set("fate", fate_json(*fate));
    return d;
}

JsonDoc sweep_json(const SweepCurve& curve) {
    JsonDoc d = JsonDoc::object();
    d.set("params", system_params_json(curve.params));
    d.set("arc", to_string(curve.arc));
    JsonDoc recs = JsonDoc::array();
    for (const auto& rec : curve.records) {
        JsonDoc e = JsonDoc::object();
        e.set("s", rec.s);
        if (rec.t_exit) e.set("t_exit", *rec.t_exit);
        e.set("exit_surface", to_string(rec.exit_surface));
        JsonDoc st = JsonDoc::object();
        st.set("x", rec.exit_state.x);
        st.set("y", rec.exit_state.y);
        st.set("z", rec.exit_state.z);
        e.set("exit_state", std::move(st));
        e.set("containment_ok", rec.containment_ok);
        if (rec.violation) {
            JsonDoc v = JsonDoc::object();
            v.set("t", rec.violation->t);
            JsonDoc vs = JsonDoc::object();
            vs.set("x", rec.violation->state.x);
            vs.set("y", rec.violation->state.y);
            vs.set("z", rec.violation->state.z);
            v.set("state", std::move(vs));
            e.set("violation", std::move(v));
        }
        recs.push(std::move(e));
    }
    d.set("records", std::move(recs));
    return d;
}

JsonDoc manifold_json(const ManifoldBranch& branch) {
    JsonDoc d = JsonDoc::object();
    d.set("branch", branch.which == ManifoldBranchId::Delta1 ? "delta1" : "delta2");
    d.set("seed_offset", branch.seed_offset);
    JsonDoc seed = JsonDoc::object();
    seed.set("x", branch.seed.x);
    seed.set("y", branch.seed.y);
    seed.set("z", branch.seed.z);
    d.set("seed", std::move(seed));
    d.set("reached_norm", branch.reached_norm);
    d.set("points", branch.polyline.size());
    d.set("violations", branch.violations.size());
    return d;
}

}  // namespace flowtopo
