#include "flowtopo/claims.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

namespace flowtopo {

std::string to_string(ClaimStatus status) {
    switch (status) {
        case ClaimStatus::Pass: return "pass";
        case ClaimStatus::Fail: return "fail";
        case ClaimStatus::Skipped: return "skipped";
    }
    return "unknown";
}

bool ClaimReport::all_passed() const {
    for (const auto& c : claims)
        if (c.status == ClaimStatus::Fail) return false;
    return true;
}

const ClaimResult* ClaimReport::find(const std::string& id) const {
    for (const auto& c : claims)
        if (c.id == id) return &c;
    return nullptr;
}

namespace {

void run_claim(ClaimReport& report, const std::string& id, const std::string& statement,
               const std::string& system, const std::string& tolerance,
               const std::function<void(ClaimResult&)>& body) {
    ClaimResult r;
    r.id = id;
    r.statement = statement;
    r.system = system;
    r.tolerance = tolerance;
    r.status = ClaimStatus::Pass;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& err) {
        r.status = ClaimStatus::Fail;
        r.note = std::string("unexpected error: ") + err.what();
    }
    r.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.claims.push_back(r);
}

void require(ClaimResult& r, bool ok, const std::string& what) {
    if (!ok) {
        r.status = ClaimStatus::Fail;
        if (!r.note.empty()) r.note += "; ";
        r.note += what;
    }
}

void measure(ClaimResult& r, const std::string& name, double value) {
    r.measured.push_back({name, value});
}

IntegratorConfig tight_config() {
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-14;
    cfg.t_max = 50.0;
    return cfg;
}

struct OrbitSet {
    std::vector<PeriodicOrbit> orbits;
    SystemParams params;
    double best_scan_distance = std::numeric_limits<double>::infinity();
    double best_newton_residual = std::numeric_limits<double>::infinity();
};

// Long-trajectory recurrence scan followed by Newton refinement; converged
// orbits deduplicated by period.
OrbitSet hunt_orbits(const SystemParams& params, const State& s0, double t_scan,
                     double scan_radius, int max_seeds) {
    OrbitSet set;
    set.params = params;
    IntegratorConfig scan_cfg;
    scan_cfg.t_max = t_scan;
    SectionSpec spec = SectionSpec::for_system(params);

    Trajectory traj = integrate(params, s0, {0.0, t_scan}, scan_cfg);
    auto candidates = recurrence_scan(params, traj, spec, scan_radius, 6);
    if (!candidates.empty()) set.best_scan_distance = candidates.front().distance;

    IntegratorConfig cfg = tight_config();
    int attempts = 0;
    for (const auto& cand : candidates) {
        if (attempts >= max_seeds) break;
        ++attempts;
        try {
            PeriodicOrbit orbit =
                find_periodic_orbit(params, cand.point, spec, cand.n_return, cfg);
            set.best_newton_residual = std::min(set.best_newton_residual, orbit.residual);
            bool duplicate = false;
            for (const auto& known : set.orbits)
                if (std::abs(known.period - orbit.period) < 1e-6) duplicate = true;
            if (!duplicate) set.orbits.push_back(orbit);
        } catch (const orbit_search_error& err) {
            set.best_newton_residual = std::min(set.best_newton_residual, err.best_residual());
        } catch (const std::exception&) {
            // seed left the section machinery; move on
        }
    }
    return set;
}

int index_with_mutation(const SystemParams& params, const State& fp, bool mutate) {
    int idx = analytic_index(params, fp);
    return mutate ? -idx : idx;
}

const double kDegreeRadiusLarge = 50.0;
const int kDegreeSubdivision = 5;

}  // namespace

ClaimReport run_verification_suite(const VerifyOptions& options) {
    ClaimReport report;
    report.options = options;

    const Box census_box{State{-20, -20, -20}, State{20, 20, 20}};

    if (options.include_nose_hoover) {
        run_claim(report, "nh-fixed-point-census",
                  "the Nose-Hoover field has no zeros in [-20,20]^3 for Q in {0.1, 1, 10}",
                  "nose-hoover", "census must be empty for each Q",
                  [&](ClaimResult& r) {
            for (double q : {0.1, 1.0, 10.0}) {
                auto fps = fixed_points(SystemParams::nose_hoover(q), census_box);
                measure(r, "count_Q_" + std::to_string(q).substr(0, 4),
                        static_cast<double>(fps.size()));
                require(r, fps.empty(), "unexpected zero found");
            }
        });

        run_claim(report, "nh-invariant-line",
                  "the z-axis is a flow line: from (0,0,5) at Q=1 the trajectory keeps "
                  "x = y = 0 and z(t) = 5 - t",
                  "nose-hoover", "max(|x|,|y|) < 1e-9 and |z - (5 - t)| < 1e-8 on [0,10]",
                  [&](ClaimResult& r) {
            IntegratorConfig cfg;
            cfg.t_max = 10.0;
            Trajectory traj =
                integrate(SystemParams::nose_hoover(1.0), State{0, 0, 5}, {0.0, 10.0}, cfg);
            double max_xy = 0.0, max_zerr = 0.0;
            for (int i = 0; i <= 1000; ++i) {
                double t = 10.0 * i / 1000.0;
                State s = traj.evaluate(t);
                max_xy = std::max({max_xy, std::abs(s.x), std::abs(s.y)});
                max_zerr = std::max(max_zerr, std::abs(s.z - (5.0 - t)));
            }
            measure(r, "max_xy", max_xy);
            measure(r, "max_z_error", max_zerr);
            require(r, max_xy < 1e-9, "drift off the invariant line");
            require(r, max_zerr < 1e-8, "z(t) deviates from 5 - t");
        });

        run_claim(report, "nh-radial-asymptotics",
                  "the radial growth rate matches its leading term on large spheres for "
                  "Q in {0.1, 1}",
                  "nose-hoover",
                  "masked relative error < 1% at r = 1e4 on a 64x128 direction grid",
                  [&](ClaimResult& r) {
            for (double q : {0.1, 1.0}) {
                SystemParams params = SystemParams::nose_hoover(q);
                const double radius = 1e4;
                std::vector<double> coeffs, values;
                double max_coeff = 0.0;
                int order = 0;
                for (int i = 0; i < 64; ++i)
                    for (int j = 0; j < 128; ++j) {
                        SphericalDirection dir{M_PI * (i + 0.5) / 64.0,
                                               2.0 * M_PI * (j + 0.5) / 128.0};
                        auto lead = radial_asymptotic_coefficient(params, dir);
                        order = lead.order;
                        coeffs.push_back(lead.coefficient);
                        values.push_back(radial_component(params, radius, dir) /
                                         std::pow(radius, lead.order));
                        max_coeff = std::max(max_coeff, std::abs(lead.coefficient));
                    }
                double worst = 0.0;
                for (std::size_t k = 0; k < coeffs.size(); ++k)
                    if (std::abs(coeffs[k]) > 0.1 * max_coeff)
                        worst = std::max(worst, std::abs(values[k] - coeffs[k]) / max_coeff);
                measure(r, "masked_rel_error_Q_" + std::to_string(q).substr(0, 4), worst);
                measure(r, "order_Q_" + std::to_string(q).substr(0, 4),
                        static_cast<double>(order));
                require(r, worst < 0.01, "masked relative error above 1%");
            }
        });

        run_claim(report, "nh-large-sphere-degree",
                  "the normalized Nose-Hoover field has degree 0 on the sphere of radius 50",
                  "nose-hoover", "integer degree 0, raw value within 0.1",
                  [&](ClaimResult& r) {
            for (double q : {0.1, 1.0, 10.0}) {
                auto res = numerical_degree(SystemParams::nose_hoover(q), State{0, 0, 0},
                                            kDegreeRadiusLarge, kDegreeSubdivision);
                measure(r, "raw_degree_Q_" + std::to_string(q).substr(0, 4), res.raw_degree);
                require(r, res.numerical_degree == 0, "degree is not 0");
            }
        });

        run_claim(report, "nh-direction-avoidance",
                  "the normalized Nose-Hoover field avoids the direction (0,0,1) on the "
                  "sphere of radius 50",
                  "nose-hoover", "minimum angle over 1e5 samples strictly positive",
                  [&](ClaimResult& r) {
            double angle = direction_avoidance(SystemParams::nose_hoover(1.0),
                                               kDegreeRadiusLarge, State{0, 0, 1}, 100000);
            measure(r, "min_angle", angle);
            require(r, angle > 0.0, "direction attained");
        });

        run_claim(report, "nh-section-structure",
                  "a bounded Nose-Hoover trajectory crosses the section transversally, "
                  "upward only at x < 0, with alternating directions",
                  "nose-hoover",
                  ">= 10 up crossings on [0,200], every speed > 1e-6, strict alternation",
                  [&](ClaimResult& r) {
            SystemParams params = SystemParams::nose_hoover(1.0);
            IntegratorConfig cfg;
            cfg.t_max = 200.0;
            Trajectory traj = integrate(params, State{1, 0, 0}, {0.0, 200.0}, cfg);
            auto crossings = detect_crossings(traj, SectionSpec::for_system(params));
            int n_up = 0;
            double min_speed = std::numeric_limits<double>::infinity();
            bool ups_left = true, alternating = true;
            int last_kind = -1;
            for (const auto& c : crossings) {
                min_speed = std::min(min_speed, c.speed);
                if (c.kind == CrossingKind::Up) {
                    ++n_up;
                    if (!(c.x < 0.0)) ups_left = false;
                }
                if (c.kind != CrossingKind::Tangent) {
                    int k = c.kind == CrossingKind::Up ? 1 : 0;
                    if (last_kind == k) alternating = false;
                    last_kind = k;
                }
            }
            measure(r, "n_up", n_up);
            measure(r, "n_total", static_cast<double>(crossings.size()));
            measure(r, "min_speed", min_speed);
            require(r, n_up >= 10, "fewer than 10 up crossings");
            require(r, ups_left, "an up crossing left the half-plane x < 0");
            require(r, alternating, "crossing directions failed to alternate");
            require(r, min_speed > 1e-6, "a crossing came too close to tangency");
        });
    }

    if (options.include_moore_spiegel) {
        run_claim(report, "ms-fixed-point-census",
                  "the Moore-Spiegel field has exactly one zero, the origin, for "
                  "(T,R) in {(27,100), (39.25,100)}",
                  "moore-spiegel", "census = {origin} to 1e-9",
                  [&](ClaimResult& r) {
            for (double t : {27.0, 39.25}) {
                auto fps = fixed_points(SystemParams::moore_spiegel(t, 100.0), census_box);
                measure(r, "count_T_" + std::to_string(t).substr(0, 5),
                        static_cast<double>(fps.size()));
                require(r, fps.size() == 1, "census size is not 1");
                if (fps.size() == 1) {
                    measure(r, "origin_distance_T_" + std::to_string(t).substr(0, 5),
                            norm(fps[0].location));
                    require(r, norm(fps[0].location) < 1e-9, "zero is away from the origin");
                }
            }
        });

        run_claim(report, "ms-radial-asymptotics",
                  "the radial growth rate matches its cubic leading term on large spheres "
                  "at (T,R) = (27,100)",
                  "moore-spiegel",
                  "masked relative error < 1% at r = 1e3 on a 64x128 direction grid",
                  [&](ClaimResult& r) {
            SystemParams params = SystemParams::moore_spiegel(27.0, 100.0);
            const double radius = 1e3;
            std::vector<double> coeffs, values;
            double max_coeff = 0.0;
            for (int i = 0; i < 64; ++i)
                for (int j = 0; j < 128; ++j) {
                    SphericalDirection dir{M_PI * (i + 0.5) / 64.0,
                                           2.0 * M_PI * (j + 0.5) / 128.0};
                    auto lead = radial_asymptotic_coefficient(params, dir);
                    coeffs.push_back(lead.coefficient);
                    values.push_back(radial_component(params, radius, dir) /
                                     std::pow(radius, lead.order));
                    max_coeff = std::max(max_coeff, std::abs(lead.coefficient));
                }
            double worst = 0.0;
            for (std::size_t k = 0; k < coeffs.size(); ++k)
                if (std::abs(coeffs[k]) > 0.1 * max_coeff)
                    worst = std::max(worst, std::abs(values[k] - coeffs[k]) / max_coeff);
            measure(r, "masked_rel_error", worst);
            require(r, worst < 0.01, "masked relative error above 1%");
        });

        run_claim(report, "ms-origin-index",
                  "the fixed point at the origin has index -1 whenever T > 0",
                  "moore-spiegel", "sign of the Jacobian determinant equals -1",
                  [&](ClaimResult& r) {
            for (double t : {27.0, 39.25}) {
                int idx = index_with_mutation(SystemParams::moore_spiegel(t, 100.0),
                                              State{0, 0, 0}, options.mutate_index_sign);
                measure(r, "index_T_" + std::to_string(t).substr(0, 5),
                        static_cast<double>(idx));
                require(r, idx == -1, "index is not -1");
            }
        });

        run_claim(report, "ms-local-degree",
                  "the normalized field has degree -1 on a small sphere around the origin",
                  "moore-spiegel", "integer degree -1 at radius 1e-2, raw within 0.1",
                  [&](ClaimResult& r) {
            auto res = numerical_degree(SystemParams::moore_spiegel(27.0, 100.0),
                                        State{0, 0, 0}, 1e-2, kDegreeSubdivision);
            measure(r, "raw_degree", res.raw_degree);
            measure(r, "degree", res.numerical_degree);
            require(r, res.numerical_degree == -1, "local degree is not -1");
        });

        run_claim(report, "ms-large-sphere-degree",
                  "the normalized field has degree -1 on the sphere of radius 50",
                  "moore-spiegel", "integer degree -1, raw within 0.1",
                  [&](ClaimResult& r) {
            auto res = numerical_degree(SystemParams::moore_spiegel(27.0, 100.0),
                                        State{0, 0, 0}, kDegreeRadiusLarge, kDegreeSubdivision);
            measure(r, "raw_degree", res.raw_degree);
            measure(r, "degree", res.numerical_degree);
            require(r, res.numerical_degree == -1, "large-sphere degree is not -1");
        });

        run_claim(report, "ms-routh-hurwitz-grid",
                  "the stability triple is exactly (1, -R, T) and the origin is never a "
                  "sink on a 10x10 grid of T, R in [1,100]",
                  "moore-spiegel", "triple exact; max Re(eigenvalue) > 0 at every grid point",
                  [&](ClaimResult& r) {
            double min_max_re = std::numeric_limits<double>::infinity();
            bool triple_exact = true;
            for (int i = 0; i < 10; ++i)
                for (int j = 0; j < 10; ++j) {
                    double t = 1.0 + 99.0 * i / 9.0;
                    double rr = 1.0 + 99.0 * j / 9.0;
                    SystemParams params = SystemParams::moore_spiegel(t, rr);
                    SpectrumClass spec = classify_spectrum(params, State{0, 0, 0});
                    if (!(spec.rh_a == 1.0 && spec.rh_ab_minus_c == -rr && spec.rh_c == t))
                        triple_exact = false;
                    min_max_re = std::min(min_max_re, spec.max_real_part());
                }
            measure(r, "min_over_grid_of_max_re", min_max_re);
            require(r, triple_exact, "stability triple not exactly (1, -R, T)");
            require(r, min_max_re > 0.0, "a grid point had no eigenvalue in the right half-plane");
        });

        run_claim(report, "ms-unstable-plane-angle",
                  "the invariant plane of the two leading eigenvalues meets the section "
                  "plane at a positive angle at (27,100)",
                  "moore-spiegel", "angle > 1e-3 rad",
                  [&](ClaimResult& r) {
            SpectrumClass spec =
                classify_spectrum(SystemParams::moore_spiegel(27.0, 100.0), State{0, 0, 0});
            measure(r, "angle", spec.unstable_plane_section_angle);
            require(r, spec.unstable_plane_section_angle > 1e-3, "plane too close to the section");
        });
    }

    // Poincare-Hopf style consistency: the large-sphere degree equals the sum
    // of the indices of the enclosed fixed points.
    run_claim(report, "degree-index-consistency",
              "the large-sphere degree equals the sum of enclosed fixed-point indices for "
              "both systems",
              "both", "0 = 0 for Nose-Hoover; -1 = -1 for Moore-Spiegel",
              [&](ClaimResult& r) {
        if (options.include_nose_hoover) {
            auto fps = fixed_points(SystemParams::nose_hoover(1.0), census_box);
            int sum = 0;
            for (const auto& fp : fps)
                sum += index_with_mutation(SystemParams::nose_hoover(1.0), fp.location,
                                           options.mutate_index_sign);
            auto deg = numerical_degree(SystemParams::nose_hoover(1.0), State{0, 0, 0},
                                        kDegreeRadiusLarge, kDegreeSubdivision);
            measure(r, "nh_index_sum", sum);
            measure(r, "nh_degree", deg.numerical_degree);
            require(r, sum == deg.numerical_degree, "Nose-Hoover degree/index mismatch");
        }
        if (options.include_moore_spiegel) {
            SystemParams params = SystemParams::moore_spiegel(27.0, 100.0);
            auto fps = fixed_points(params, census_box);
            int sum = 0;
            for (const auto& fp : fps)
                sum += index_with_mutation(params, fp.location, options.mutate_index_sign);
            auto deg =
                numerical_degree(params, State{0, 0, 0}, kDegreeRadiusLarge, kDegreeSubdivision);
            measure(r, "ms_index_sum", sum);
            measure(r, "ms_degree", deg.numerical_degree);
            require(r, sum == deg.numerical_degree, "Moore-Spiegel degree/index mismatch");
        }
        if (!options.include_nose_hoover && !options.include_moore_spiegel) {
            r.status = ClaimStatus::Skipped;
            r.note = "both systems excluded by options";
        }
    });

    std::vector<std::pair<std::string, PeriodicOrbit>> all_orbits;

    if (options.include_fixtures) {
        run_claim(report, "hopf-orbit-pipeline",
                  "the orbit pipeline reproduces the exact limit cycle of the Hopf fixture",
                  "hopf",
                  "period = 2*pi +- 1e-8, radial multiplier = exp(-4*pi) +- 1e-6, "
                  "residual < 1e-9, certified unknot",
                  [&](ClaimResult& r) {
            SystemParams params = SystemParams::validation_hopf(1.0, 1.0);
            SectionSpec spec = SectionSpec::for_system(params);
            IntegratorConfig cfg;
            cfg.t_max = 60.0;
            Trajectory traj = integrate(params, State{1.3, 0.0, 0.1}, {0.0, 60.0}, cfg);
            auto crossings = detect_crossings(traj, spec);
            SectionPoint guess{};
            bool found = false;
            for (auto it = crossings.rbegin(); it != crossings.rend(); ++it)
                if (it->kind == CrossingKind::Up) {
                    guess = *it;
                    found = true;
                    break;
                }
            require(r, found, "no transversal crossing to seed from");
            if (!found) return;

            PeriodicOrbit orbit = find_periodic_orbit(params, guess, spec, 1, tight_config());
            double m_radial = std::min(std::abs(orbit.multipliers[0]),
                                       std::abs(orbit.multipliers[1]));
            measure(r, "period", orbit.period);
            measure(r, "period_error", std::abs(orbit.period - 2.0 * M_PI));
            measure(r, "radial_multiplier", m_radial);
            measure(r, "multiplier_error", std::abs(m_radial - std::exp(-4.0 * M_PI)));
            measure(r, "residual", orbit.residual);
            require(r, std::abs(orbit.period - 2.0 * M_PI) < 1e-8, "period misses 2*pi");
            require(r, std::abs(m_radial - std::exp(-4.0 * M_PI)) < 1e-6,
                    "radial multiplier misses exp(-4*pi)");
            require(r, orbit.residual < 1e-9, "residual too large");

            BraidData braid = extract_braid(orbit, params, tight_config());
            measure(r, "n_strands", braid.n_strands);
            require(r, braid.verdict == KnotVerdict::CertifiedUnknot,
                    "limit cycle not certified as the unknot");
            all_orbits.emplace_back("hopf", orbit);
        });

        run_claim(report, "trefoil-fixture",
                  "the braid extracted from the knotted curve fixture has the knotted "
                  "polynomial t^2 - t + 1",
                  "fixture", "exact integer polynomial; verdict not-unknot",
                  [&](ClaimResult& r) {
            BraidData braid = extract_braid_from_curve(trefoil_curve());
            Laurent expected = Laurent::from_coeffs({1, -1, 1}, 0);
            measure(r, "n_strands", braid.n_strands);
            measure(r, "word_up_length", static_cast<double>(braid.word_up.size()));
            measure(r, "word_down_length", static_cast<double>(braid.word_down.size()));
            require(r, braid.alexander == expected,
                    "polynomial is not t^2 - t + 1 (got " + braid.alexander.str() + ")");
            require(r, braid.verdict == KnotVerdict::NotUnknot, "verdict is not not-unknot");
        });
    }

    if (options.include_moore_spiegel && options.include_orbit_hunts) {
        run_claim(report, "ms-multiplier-product",
                  "every converged Moore-Spiegel orbit satisfies the volume-contraction "
                  "law m1*m2 = exp(-period)",
                  "moore-spiegel",
                  "relative error < 1e-5 per orbit; skipped when no seed converges",
                  [&](ClaimResult& r) {
            SystemParams params = SystemParams::moore_spiegel(27.0, 100.0);
            OrbitSet set = hunt_orbits(params, State{0.1, 0.0, 0.0}, 400.0, 2.0, 12);
            measure(r, "n_orbits", static_cast<double>(set.orbits.size()));
            measure(r, "best_scan_distance", set.best_scan_distance);
            measure(r, "best_newton_residual", set.best_newton_residual);
            if (set.orbits.empty()) {
                r.status = ClaimStatus::Skipped;
                std::ostringstream os;
                os << "no orbit converged from the recurrence seeds; best residual "
                   << set.best_newton_residual;
                r.note = os.str();
                return;
            }
            double worst = 0.0;
            for (std::size_t i = 0; i < set.orbits.size(); ++i) {
                const auto& orbit = set.orbits[i];
                double product = std::abs(orbit.multipliers[0] * orbit.multipliers[1]);
                double expected = std::exp(-orbit.period);
                double rel = std::abs(product - expected) / expected;
                worst = std::max(worst, rel);
                measure(r, "period_" + std::to_string(i), orbit.period);
                measure(r, "product_rel_error_" + std::to_string(i), rel);
                all_orbits.emplace_back("moore-spiegel", orbit);
            }
            require(r, worst < 1e-5, "multiplier product violates exp(-period)");
        });
    }

    if (options.include_nose_hoover && options.include_orbit_hunts) {
        run_claim(report, "nh-periodic-orbit",
                  "a Nose-Hoover periodic orbit refined from recurrence seeds (Q = 2)",
                  "nose-hoover", "residual < 1e-9; skipped when no seed converges",
                  [&](ClaimResult& r) {
            SystemParams params = SystemParams::nose_hoover(2.0);
            OrbitSet set = hunt_orbits(params, State{1.0, 0.0, 0.0}, 300.0, 0.5, 10);
            measure(r, "n_orbits", static_cast<double>(set.orbits.size()));
            measure(r, "best_scan_distance", set.best_scan_distance);
            measure(r, "best_newton_residual", set.best_newton_residual);
            if (set.orbits.empty()) {
                r.status = ClaimStatus::Skipped;
                r.note = "no orbit converged from the recurrence seeds";
                return;
            }
            for (std::size_t i = 0; i < set.orbits.size(); ++i) {
                measure(r, "period_" + std::to_string(i), set.orbits[i].period);
                measure(r, "residual_" + std::to_string(i), set.orbits[i].residual);
                require(r, set.orbits[i].residual < 1e-9, "orbit residual too large");
                all_orbits.emplace_back("nose-hoover", set.orbits[i]);
            }
        });
    }

    if (options.include_orbit_hunts || options.include_fixtures)
    run_claim(report, "orbit-braid-structure",
              "every converged orbit decomposes into braids on equally many strands in "
              "both half-spaces; period-1 orbits are certified unknots",
              "both", "strand counts equal; single-strand orbits certified",
              [&](ClaimResult& r) {
        if (all_orbits.empty()) {
            r.status = ClaimStatus::Skipped;
            r.note = "no converged orbits available";
            return;
        }
        int checked = 0;
        for (const auto& [system, orbit] : all_orbits) {
            SystemParams params = system == "hopf"   ? SystemParams::validation_hopf(1.0, 1.0)
                                  : system == "nose-hoover"
                                      ? SystemParams::nose_hoover(2.0)
                                      : SystemParams::moore_spiegel(27.0, 100.0);
            BraidData braid = extract_braid(orbit, params, tight_config());
            ++checked;
            require(r, braid.n_strands == orbit.n_strands,
                    system + ": strand count disagrees with the orbit's crossing count");
            for (int g : braid.word_up)
                require(r, std::abs(g) >= 1 && std::abs(g) < braid.n_strands,
                        system + ": generator outside the strand range");
            for (int g : braid.word_down)
                require(r, std::abs(g) >= 1 && std::abs(g) < braid.n_strands,
                        system + ": generator outside the strand range");
            if (orbit.n_strands == 1)
                require(r, braid.verdict == KnotVerdict::CertifiedUnknot,
                        system + ": single-strand orbit not certified");
        }
        measure(r, "orbits_checked", checked);
    });

    if (options.include_moore_spiegel) {
        run_claim(report, "ms-manifold-trapping",
                  "the stable-manifold branch through {x > 0, y < 0} stays in its "
                  "quadrant out to norm 100 and its twin is the point reflection",
                  "moore-spiegel",
                  "containment x >= -1e-9, y <= 1e-9; reflection within 1e-6",
                  [&](ClaimResult& r) {
            SystemParams params = SystemParams::moore_spiegel(27.0, 100.0);
            IntegratorConfig cfg;
            cfg.t_max = 50.0;
            auto [d1, d2] = trace_stable_manifold(params, 1e-6, cfg, 100.0);
            measure(r, "delta1_reached_norm", d1.reached_norm);
            measure(r, "delta2_reached_norm", d2.reached_norm);
            measure(r, "delta1_violations", static_cast<double>(d1.violations.size()));
            require(r, d1.reached_norm >= 100.0, "Delta1 stopped before norm 100");
            require(r, d2.reached_norm >= 100.0, "Delta2 stopped before norm 100");
            require(r, d1.violations.empty(), "Delta1 left the trapping quadrant");

            require(r, d1.polyline.size() == d2.polyline.size(),
                    "branches sampled differently; reflection untestable pointwise");
            double worst = 0.0;
            std::size_t n = std::min(d1.polyline.size(), d2.polyline.size());
            for (std::size_t i = 0; i < n; ++i)
                worst = std::max(worst, norm(d1.polyline[i] + d2.polyline[i]));
            measure(r, "reflection_error", worst);
            require(r, worst <= 1e-6, "Delta2 deviates from the point reflection of Delta1");
        });

        run_claim(report, "ms-exit-time-sweep",
                  "trajectories seeded on the tangency arc x > 0 leave the trapping "
                  "quadrant through its walls in finite time",
                  "moore-spiegel",
                  "finite exit onto H1 or U with containment until exit, s in {0.1,0.5,1,2,5}",
                  [&](ClaimResult& r) {
            SystemParams params = SystemParams::moore_spiegel(27.0, 100.0);
            IntegratorConfig cfg;
            cfg.t_max = 200.0;
            SweepCurve curve =
                exit_time_sweep(params, SweepArc::L1, {0.1, 0.5, 1.0, 2.0, 5.0}, cfg);
            for (const auto& rec : curve.records) {
                std::string tag = "t_exit_s_" + std::to_string(rec.s).substr(0, 4);
                measure(r, tag, rec.t_exit ? *rec.t_exit : -1.0);
                require(r, rec.t_exit.has_value(), "no exit before t_max");
                require(r,
                        rec.exit_surface == ExitSurface::H1 || rec.exit_surface == ExitSurface::U,
                        "exit through an unexpected surface");
                require(r, rec.containment_ok, "trajectory left the quadrant before its exit");
            }
        });
    }

    return report;
}

}  // namespace flowtopo
