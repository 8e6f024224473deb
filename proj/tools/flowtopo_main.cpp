// Command-line surface for the oscillator-topology toolkit: simulation,
// section maps, orbit and braid analysis, degree/index computations, and the
// claims-verification suite.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "flowtopo/braid.hpp"
#include "flowtopo/claims.hpp"
#include "flowtopo/report_io.hpp"

namespace fs = std::filesystem;
using namespace flowtopo;

namespace {

State parse_triple(const std::string& text, const char* what) {
    State s;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &s.x, &s.y, &s.z) != 3)
        throw CLI::ValidationError(std::string(what) + " must be three comma-separated reals");
    return s;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

void emit(const RunConfig& cfg, const std::string& name, const std::string& content) {
    if (cfg.out_dir.empty() || cfg.out_dir == "-") {
        std::cout << content;
        return;
    }
    fs::create_directories(cfg.out_dir);
    std::string path = (fs::path(cfg.out_dir) / name).string();
    write_file_atomic(path, content);
    std::cout << path << "\n";
}

JsonDoc error_json(const std::string& kind, const std::string& message) {
    JsonDoc d = JsonDoc::object();
    JsonDoc e = JsonDoc::object();
    e.set("kind", kind);
    e.set("message", message);
    d.set("error", std::move(e));
    return d;
}

// --config is applied before the regular flags so explicit flags override
// file values.
RunConfig preload_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw std::runtime_error(std::string("cannot open config: ") + argv[i + 1]);
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            return RunConfig::from_json_text(text);
        }
    }
    return RunConfig{};
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    try {
        cfg = preload_config(argc, argv);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }

    CLI::App app{"numerical topology toolkit for the Nose-Hoover and Moore-Spiegel systems"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override file values)");

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--system", cfg.system,
                        "nose-hoover | moore-spiegel | hopf | custom");
        cmd->add_option("--Q", cfg.Q, "Nose-Hoover damping parameter (Q > 0)");
        cmd->add_option("--T", cfg.T, "Moore-Spiegel parameter T");
        cmd->add_option("--R", cfg.R, "Moore-Spiegel parameter R");
        cmd->add_option("--mu", cfg.mu, "Hopf fixture parameter mu");
        cmd->add_option("--omega", cfg.omega, "Hopf fixture parameter omega");
        cmd->add_option("--field-file", cfg.field_file, "custom field definition file");
        cmd->add_option("--out", cfg.out_dir, "output directory ('-' for stdout)");
        cmd->add_option("--format", cfg.format, "json | csv");
        cmd->add_option("--seed", cfg.seed, "seed for sampling operations");
        cmd->add_option("--tol-rel", cfg.integrator.rel_tol, "integrator relative tolerance");
        cmd->add_option("--tol-abs", cfg.integrator.abs_tol, "integrator absolute tolerance");
        cmd->add_option("--t-max", cfg.integrator.t_max, "integration horizon");
        cmd->add_option("--escape-radius", cfg.integrator.escape_radius,
                        "norm at which a trajectory counts as escaped");
        cmd->add_option("--config", config_path, "JSON config file");
    };

    // simulate
    std::string init_text = "1,0,0";
    double t_final = 100.0;
    auto* simulate = app.add_subcommand("simulate", "integrate and export a trajectory");
    add_common(simulate);
    simulate->add_option("--init", init_text, "initial state x,y,z");
    simulate->add_option("--t", t_final, "final time");

    // field-eval
    std::string at_text = "0,0,0";
    auto* field_eval = app.add_subcommand("field-eval", "evaluate the field and its Jacobian");
    add_common(field_eval);
    field_eval->add_option("--at", at_text, "evaluation point x,y,z");

    // parse-field
    auto* parse_field = app.add_subcommand("parse-field", "validate a custom field file");
    add_common(parse_field);

    // section-map
    std::string map_at;
    auto* section_map =
        app.add_subcommand("section-map", "sample the first-return map along a trajectory");
    add_common(section_map);
    section_map->add_option("--init", init_text, "initial state x,y,z");
    section_map->add_option("--t", t_final, "trajectory length");
    section_map->add_option("--at", map_at, "evaluate one return from the plane point x,z");

    // find-orbit
    double scan_radius = 1.0;
    double t_scan = 300.0;
    int max_seeds = 10;
    auto* find_orbit = app.add_subcommand("find-orbit", "recurrence scan plus Newton shooting");
    add_common(find_orbit);
    find_orbit->add_option("--init", init_text, "initial state x,y,z");
    find_orbit->add_option("--t-scan", t_scan, "scan trajectory length");
    find_orbit->add_option("--radius", scan_radius, "near-return radius");
    find_orbit->add_option("--max-seeds", max_seeds, "Newton attempts");

    // classify-orbit
    std::string orbit_path;
    auto* classify_orbit =
        app.add_subcommand("classify-orbit", "braid decomposition and knot verdict of an orbit");
    add_common(classify_orbit);
    classify_orbit->add_option("--orbit-file", orbit_path, "orbit JSON from find-orbit")
        ->required();

    // index
    auto* index_cmd = app.add_subcommand("index", "fixed-point index by the sign rule");
    add_common(index_cmd);
    index_cmd->add_option("--at", at_text, "fixed point x,y,z");

    // degree
    std::string center_text = "0,0,0";
    double radius = 50.0;
    int subdivision = 5;
    auto* degree_cmd = app.add_subcommand("degree", "Brouwer degree of F/|F| on a sphere");
    add_common(degree_cmd);
    degree_cmd->add_option("--center", center_text, "sphere center x,y,z");
    degree_cmd->add_option("--radius", radius, "sphere radius");
    degree_cmd->add_option("--subdivision", subdivision, "icosphere subdivision level (>= 4)");

    // avoidance
    std::string dir_text = "0,0,1";
    int samples = 100000;
    auto* avoidance_cmd =
        app.add_subcommand("avoidance", "minimum angle between F/|F| and a direction");
    add_common(avoidance_cmd);
    avoidance_cmd->add_option("--radius", radius, "sphere radius");
    avoidance_cmd->add_option("--direction", dir_text, "direction x,y,z");
    avoidance_cmd->add_option("--samples", samples, "sample count (>= 1)");

    // spectrum
    auto* spectrum_cmd =
        app.add_subcommand("spectrum", "eigenvalue classification of the Moore-Spiegel origin");
    add_common(spectrum_cmd);
    spectrum_cmd->add_option("--at", at_text, "fixed point x,y,z");

    // manifold
    double epsilon = 1e-6;
    double target_norm = 100.0;
    auto* manifold_cmd =
        app.add_subcommand("manifold", "trace the 1-D stable manifold of the origin");
    add_common(manifold_cmd);
    manifold_cmd->add_option("--epsilon", epsilon, "seed offset along the eigenvector");
    manifold_cmd->add_option("--target-norm", target_norm, "stop once |state| reaches this");

    // sweep-exit
    std::string arc_text = "l1";
    std::string s_text = "0.1,0.5,1,2,5";
    auto* sweep_cmd = app.add_subcommand("sweep-exit", "exit-time sweep along a tangency arc");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--arc", arc_text, "l1 (x > 0) or l2 (x < 0)");
    sweep_cmd->add_option("--s", s_text, "comma-separated arc coordinates");

    // verify-claims
    std::string systems = "both";
    std::string mutate;
    auto* verify_cmd = app.add_subcommand("verify-claims", "run the claims-verification suite");
    add_common(verify_cmd);
    verify_cmd->add_option("--systems", systems, "nose-hoover | moore-spiegel | both");
    verify_cmd->add_option("--mutate", mutate,
                           "fault-injection fixture for self-tests (index-sign)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*simulate) {
            SystemParams params = cfg.make_params();
            State s0 = parse_triple(init_text, "--init");
            IntegratorConfig icfg = cfg.integrator;
            icfg.t_max = std::max(icfg.t_max, t_final);
            Trajectory traj = integrate(params, s0, {0.0, t_final}, icfg);
            Fate fate = traj.termination()
                            ? *traj.termination()
                            : Fate{FateKind::Bounded, traj.t_end(),
                                   traj.state_at(traj.size() - 1)};
            emit(cfg, "trajectory.csv", trajectory_csv(traj));
            emit(cfg, "trajectory.json", trajectory_meta_json(traj, &fate).dump());
        } else if (*field_eval) {
            SystemParams params = cfg.make_params();
            State at = parse_triple(at_text, "--at");
            State f = eval_field(params, at);
            Matrix3 jac = eval_jacobian(params, at);
            JsonDoc d = JsonDoc::object();
            d.set("params", system_params_json(params));
            JsonDoc fv = JsonDoc::array();
            fv.push(f.x);
            fv.push(f.y);
            fv.push(f.z);
            d.set("field", std::move(fv));
            JsonDoc jm = JsonDoc::array();
            for (int i = 0; i < 3; ++i) {
                JsonDoc row = JsonDoc::array();
                for (int j = 0; j < 3; ++j) row.push(jac[i][j]);
                jm.push(std::move(row));
            }
            d.set("jacobian", std::move(jm));
            emit(cfg, "field.json", d.dump());
        } else if (*parse_field) {
            if (cfg.field_file.empty())
                throw std::runtime_error("parse-field requires --field-file");
            std::ifstream in(cfg.field_file);
            if (!in) throw std::runtime_error("cannot open field file: " + cfg.field_file);
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            try {
                auto def = expr::parse_field_file(text);
                JsonDoc d = JsonDoc::object();
                d.set("valid", true);
                JsonDoc comps = JsonDoc::array();
                for (int i = 0; i < 3; ++i) comps.push(def.component_str(i));
                d.set("components", std::move(comps));
                JsonDoc ps = JsonDoc::object();
                for (const auto& [k, v] : def.params()) ps.set(k, v);
                d.set("parameters", std::move(ps));
                emit(cfg, "field-parse.json", d.dump());
            } catch (const expr::parse_error& err) {
                JsonDoc d = error_json("parse-error", err.what());
                d.set("line", err.line());
                d.set("column", err.column());
                d.set("token", err.token());
                std::cout << d.dump();
                return 1;
            }
        } else if (*section_map) {
            SystemParams params = cfg.make_params();
            SectionSpec spec = SectionSpec::for_system(params);
            JsonDoc recs = JsonDoc::array();
            if (!map_at.empty()) {
                double px, pz;
                if (std::sscanf(map_at.c_str(), "%lf,%lf", &px, &pz) != 2)
                    throw std::runtime_error("--at must be x,z");
                SectionPoint p = section_point_from_plane(params, px, pz);
                ReturnResult ret = first_return_strict(params, p, spec, cfg.integrator);
                JsonDoc e = JsonDoc::object();
                e.set("x", p.x);
                e.set("z", p.z);
                e.set("x_next", ret.point.x);
                e.set("z_next", ret.point.z);
                e.set("return_time", ret.return_time);
                recs.push(std::move(e));
            } else {
                State s0 = parse_triple(init_text, "--init");
                IntegratorConfig icfg = cfg.integrator;
                icfg.t_max = std::max(icfg.t_max, t_final);
                Trajectory traj = integrate(params, s0, {0.0, t_final}, icfg);
                auto crossings = detect_crossings(traj, spec);
                const SectionPoint* prev = nullptr;
                for (const auto& c : crossings) {
                    if (c.kind != CrossingKind::Up) continue;
                    if (prev) {
                        JsonDoc e = JsonDoc::object();
                        e.set("x", prev->x);
                        e.set("z", prev->z);
                        e.set("x_next", c.x);
                        e.set("z_next", c.z);
                        e.set("return_time", c.t - prev->t);
                        recs.push(std::move(e));
                    }
                    prev = &c;
                }
                if (cfg.format == "csv") {
                    emit(cfg, "section-points.csv", section_points_csv(crossings));
                }
            }
            JsonDoc d = JsonDoc::object();
            d.set("params", system_params_json(params));
            d.set("region", to_string(spec.admissible_region));
            d.set("pairs", std::move(recs));
            emit(cfg, "section-map.json", d.dump());
        } else if (*find_orbit) {
            SystemParams params = cfg.make_params();
            SectionSpec spec = SectionSpec::for_system(params);
            State s0 = parse_triple(init_text, "--init");
            IntegratorConfig scan_cfg = cfg.integrator;
            scan_cfg.t_max = t_scan;
            Trajectory traj = integrate(params, s0, {0.0, t_scan}, scan_cfg);
            auto cands = recurrence_scan(params, traj, spec, scan_radius, 8);
            JsonDoc orbits = JsonDoc::array();
            std::vector<double> periods;
            int attempts = 0;
            double best_residual = std::numeric_limits<double>::infinity();
            for (const auto& cand : cands) {
                if (attempts >= max_seeds) break;
                ++attempts;
                try {
                    PeriodicOrbit orbit =
                        find_periodic_orbit(params, cand.point, spec, cand.n_return,
                                            cfg.integrator);
                    bool dup = false;
                    for (double p : periods)
                        if (std::abs(p - orbit.period) < 1e-6) dup = true;
                    if (dup) continue;
                    periods.push_back(orbit.period);
                    orbits.push(orbit_json(orbit, params));
                } catch (const orbit_search_error& err) {
                    best_residual = std::min(best_residual, err.best_residual());
                } catch (const std::exception&) {
                }
            }
            JsonDoc d = JsonDoc::object();
            d.set("params", system_params_json(params));
            d.set("candidates", cands.size());
            d.set("attempts", attempts);
            d.set("orbits", std::move(orbits));
            if (periods.empty()) {
                d.set("best_residual", best_residual);
                emit(cfg, "orbits.json", d.dump());
                return 1;
            }
            emit(cfg, "orbits.json", d.dump());
        } else if (*classify_orbit) {
            SystemParams params = cfg.make_params();
            std::ifstream in(orbit_path);
            if (!in) throw std::runtime_error("cannot open orbit file: " + orbit_path);
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            nlohmann::json j = nlohmann::json::parse(text);
            if (j.contains("orbits")) j = j["orbits"].at(0);
            PeriodicOrbit orbit;
            orbit.period = j.at("period").get<double>();
            orbit.residual = j.value("residual", 0.0);
            orbit.n_strands = j.at("n_strands").get<int>();
            for (const auto& p : j.at("section_points"))
                orbit.section_points.push_back(section_point_from_plane(
                    params, p.at("x").get<double>(), p.at("z").get<double>()));
            BraidData braid = extract_braid(orbit, params, cfg.integrator);
            emit(cfg, "braid.json", braid_json(braid).dump());
        } else if (*index_cmd) {
            SystemParams params = cfg.make_params();
            State at = parse_triple(at_text, "--at");
            int idx = analytic_index(params, at);
            JsonDoc d = JsonDoc::object();
            d.set("params", system_params_json(params));
            d.set("index", idx);
            emit(cfg, "index.json", d.dump());
        } else if (*degree_cmd) {
            SystemParams params = cfg.make_params();
            State center = parse_triple(center_text, "--center");
            IndexResult res = numerical_degree(params, center, radius, subdivision);
            emit(cfg, "degree.json", degree_json(res, params).dump());
        } else if (*avoidance_cmd) {
            SystemParams params = cfg.make_params();
            State dir = parse_triple(dir_text, "--direction");
            double angle = direction_avoidance(params, radius, dir, samples, cfg.seed);
            JsonDoc d = JsonDoc::object();
            d.set("params", system_params_json(params));
            d.set("radius", radius);
            d.set("samples", samples);
            d.set("seed", static_cast<double>(cfg.seed));
            d.set("min_angle", angle);
            emit(cfg, "avoidance.json", d.dump());
        } else if (*spectrum_cmd) {
            SystemParams params = cfg.make_params();
            State at = parse_triple(at_text, "--at");
            SpectrumClass spec = classify_spectrum(params, at);
            JsonDoc d = spectrum_json(spec);
            d.set("params", system_params_json(params));
            emit(cfg, "spectrum.json", d.dump());
        } else if (*manifold_cmd) {
            SystemParams params = cfg.make_params();
            auto [d1, d2] = trace_stable_manifold(params, epsilon, cfg.integrator, target_norm);
            JsonDoc d = JsonDoc::object();
            d.set("params", system_params_json(params));
            d.set("delta1", manifold_json(d1));
            d.set("delta2", manifold_json(d2));
            emit(cfg, "manifold.json", d.dump());
            auto polyline_csv = [](const ManifoldBranch& b) {
                std::ostringstream os;
                os << "t,x,y,z\n";
                char buf[160];
                for (std::size_t i = 0; i < b.polyline.size(); ++i) {
                    std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e\n", b.times[i],
                                  b.polyline[i].x, b.polyline[i].y, b.polyline[i].z);
                    os << buf;
                }
                return os.str();
            };
            if (!(cfg.out_dir.empty() || cfg.out_dir == "-")) {
                emit(cfg, "delta1.csv", polyline_csv(d1));
                emit(cfg, "delta2.csv", polyline_csv(d2));
            }
        } else if (*sweep_cmd) {
            SystemParams params = cfg.make_params();
            SweepArc arc = arc_text == "l2" ? SweepArc::L2 : SweepArc::L1;
            SweepCurve curve = exit_time_sweep(params, arc, parse_list(s_text), cfg.integrator);
            if (cfg.format == "csv")
                emit(cfg, "sweep.csv", sweep_csv(curve));
            else
                emit(cfg, "sweep.json", sweep_json(curve).dump());
        } else if (*verify_cmd) {
            VerifyOptions opts;
            opts.include_nose_hoover = systems == "both" || systems == "nose-hoover";
            opts.include_moore_spiegel = systems == "both" || systems == "moore-spiegel";
            if (!mutate.empty()) {
                if (mutate != "index-sign")
                    throw std::runtime_error("unknown mutation fixture: " + mutate);
                opts.mutate_index_sign = true;
            }
            ClaimReport report = run_verification_suite(opts);
            emit(cfg, "claims.json", claim_report_json(report).dump());
            return report.exit_status();
        }
    } catch (const std::exception& err) {
        std::cout << error_json("runtime-error", err.what()).dump();
        return 1;
    }
    return 0;
}
