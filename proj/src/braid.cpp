#include "flowtopo/braid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace flowtopo {

std::string to_string(KnotVerdict verdict) {
    switch (verdict) {
        case KnotVerdict::CertifiedUnknot: return "certified-unknot";
        case KnotVerdict::ConsistentWithUnknot: return "consistent-with-unknot";
        case KnotVerdict::NotUnknot: return "not-unknot";
    }
    return "unknown";
}

namespace {

using LaurentMatrix = std::vector<std::vector<Laurent>>;

LaurentMatrix identity_matrix(int m) {
    LaurentMatrix I(m, std::vector<Laurent>(m));
    for (int i = 0; i < m; ++i) I[i][i] = Laurent::one();
    return I;
}

LaurentMatrix matmul(const LaurentMatrix& a, const LaurentMatrix& b) {
    int m = static_cast<int>(a.size());
    LaurentMatrix c(m, std::vector<Laurent>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Laurent acc;
            for (int k = 0; k < m; ++k) acc = acc + a[i][k] * b[k][j];
            c[i][j] = acc;
        }
    return c;
}

LaurentMatrix generator_matrix(int g, int m) {
    // Reduced Burau image of sigma_|g| (inverse for g < 0) in B_{m+1}.
    LaurentMatrix M = identity_matrix(m);
    int j = std::abs(g) - 1;
    Laurent t = Laurent::monomial(1, 1);
    Laurent tinv = Laurent::monomial(1, -1);
    if (g > 0) {
        M[j][j] = Laurent::monomial(-1, 1);
        if (j >= 1) M[j - 1][j] = t;
        if (j + 1 < m) M[j + 1][j] = Laurent::one();
    } else {
        M[j][j] = Laurent::monomial(-1, -1);
        if (j >= 1) M[j - 1][j] = Laurent::one();
        if (j + 1 < m) M[j + 1][j] = tinv;
    }
    return M;
}

// Fraction-free Bareiss determinant with row pivoting; exact over the
// Laurent ring.
Laurent det_laurent(LaurentMatrix a) {
    int m = static_cast<int>(a.size());
    if (m == 0) return Laurent::one();
    int sign = 1;
    Laurent prev = Laurent::one();
    for (int k = 0; k + 1 < m; ++k) {
        if (a[k][k].is_zero()) {
            int swap_row = -1;
            for (int i = k + 1; i < m; ++i)
                if (!a[i][k].is_zero()) {
                    swap_row = i;
                    break;
                }
            if (swap_row < 0) return Laurent::zero();
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < m; ++i)
            for (int j = k + 1; j < m; ++j)
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]).divided_exact(prev);
        prev = a[k][k];
    }
    Laurent det = a[m - 1][m - 1];
    return sign > 0 ? det : -det;
}

void validate_word(const std::vector<int>& word, int n_strands) {
    if (n_strands < 1) throw std::invalid_argument("braid: need at least one strand");
    for (int g : word)
        if (g == 0 || std::abs(g) > n_strands - 1)
            throw std::invalid_argument("braid: generator index out of range");
}

}  // namespace

std::vector<std::vector<Laurent>> reduced_burau(const std::vector<int>& word, int n_strands) {
    validate_word(word, n_strands);
    int m = n_strands - 1;
    LaurentMatrix M = identity_matrix(m);
    for (int g : word) M = matmul(M, generator_matrix(g, m));
    return M;
}

Laurent alexander_polynomial(const std::vector<int>& word, int n_strands) {
    validate_word(word, n_strands);
    if (n_strands == 1) return Laurent::one();
    int m = n_strands - 1;
    LaurentMatrix B = reduced_burau(word, n_strands);
    LaurentMatrix D = identity_matrix(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) D[i][j] = D[i][j] - B[i][j];
    Laurent det = det_laurent(std::move(D));
    if (det.is_zero()) return Laurent::zero();
    std::vector<long long> ones(static_cast<std::size_t>(n_strands), 1);
    Laurent denom = Laurent::from_coeffs(std::move(ones), 0);
    // det(I - Burau) equals the Alexander polynomial of the closure times
    // 1 + t + ... + t^(n-1), up to a unit
    Laurent alex = det.normalized_units().divided_exact(denom);
    return alex.normalized_units();
}

KnotVerdict knot_verdict(const BraidData& braid) {
    if (braid.n_strands == 1) return KnotVerdict::CertifiedUnknot;
    if (!braid.alexander.is_one()) return KnotVerdict::NotUnknot;
    return KnotVerdict::ConsistentWithUnknot;
}

namespace {

struct CurveCrossing {
    double t = 0.0;
    bool rising = false;
};

// y = 0 crossings of the closed curve by dense sampling plus bisection. The
// sample phase is offset so a parameterization that starts exactly on the
// plane cannot hide a crossing at a grid node; samples landing on the plane
// are skipped without dropping the bracket anchor.
std::vector<CurveCrossing> curve_crossings(const ClosedCurve& curve) {
    const int samples = 8192;
    const double phase = 0.382 / samples;
    std::vector<CurveCrossing> out;
    auto yval = [&](double t) { return curve.at(std::fmod(t, curve.period)).y; };
    bool have_anchor = false;
    double prev_t = 0.0, prev_y = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double t = curve.period * (i + phase) / samples;
        double yv = yval(t);
        if (yv == 0.0) continue;
        if (have_anchor && prev_y * yv < 0.0) {
            double lo = prev_t, hi = t, ylo = prev_y;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * curve.period; ++it) {
                double mid = 0.5 * (lo + hi);
                double ym = yval(mid);
                if (ym == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((ym < 0.0) == (ylo < 0.0)) {
                    lo = mid;
                    ylo = ym;
                } else {
                    hi = mid;
                }
            }
            out.push_back({0.5 * (lo + hi), yv > 0.0});
        }
        have_anchor = true;
        prev_t = t;
        prev_y = yv;
    }
    return out;
}

struct Strand {
    double t_entry = 0.0;
    double duration = 0.0;
};

struct SwapEvent {
    double tau = 0.0;
    int i = 0;
    int j = 0;
    double y_i = 0.0;
    double y_j = 0.0;
};

constexpr double kDepthAmbiguity = 1e-9;

// All transversal x-order swaps between strand pairs under the rotated
// projection pos = x cos(alpha) + z sin(alpha). Throws ambiguous_crossing_
// error when a swap's depth separation falls under kDepthAmbiguity.
std::vector<SwapEvent> strand_swaps(const ClosedCurve& curve, const std::vector<Strand>& strands,
                                    double alpha) {
    const int samples = 512;
    double ca = std::cos(alpha), sa = std::sin(alpha);
    auto state_of = [&](const Strand& s, double tau) {
        return curve.at(std::fmod(s.t_entry + tau * s.duration, curve.period));
    };
    auto pos_of = [&](const Strand& s, double tau) {
        State st = state_of(s, tau);
        return st.x * ca + st.z * sa;
    };

    std::vector<SwapEvent> events;
    int n = static_cast<int>(strands.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double prev_tau = 0.0;
            double prev_f = pos_of(strands[i], 0.0) - pos_of(strands[j], 0.0);
            for (int k = 1; k <= samples; ++k) {
                double tau = static_cast<double>(k) / samples;
                double f = pos_of(strands[i], tau) - pos_of(strands[j], tau);
                if (prev_f * f < 0.0) {
                    double lo = prev_tau, hi = tau, flo = prev_f;
                    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
                        double mid = 0.5 * (lo + hi);
                        double fm = pos_of(strands[i], mid) - pos_of(strands[j], mid);
                        if (fm == 0.0) {
                            lo = hi = mid;
                            break;
                        }
                        if ((fm < 0.0) == (flo < 0.0)) {
                            lo = mid;
                            flo = fm;
                        } else {
                            hi = mid;
                        }
                    }
                    double tau_star = 0.5 * (lo + hi);
                    SwapEvent ev;
                    ev.tau = tau_star;
                    ev.i = i;
                    ev.j = j;
                    ev.y_i = state_of(strands[i], tau_star).y;
                    ev.y_j = state_of(strands[j], tau_star).y;
                    if (std::abs(ev.y_i - ev.y_j) < kDepthAmbiguity)
                        throw ambiguous_crossing_error(
                            "strand pair meets with ambiguous depth in projection");
                    events.push_back(ev);
                }
                prev_tau = tau;
                prev_f = f;
            }
        }
    std::sort(events.begin(), events.end(),
              [](const SwapEvent& a, const SwapEvent& b) { return a.tau < b.tau; });
    return events;
}

// Converts swap events into a braid word by running the position permutation
// forward. `upper` fixes the viewing side so over/under is consistent for
// the whole closed diagram: the viewer looks down the -y axis, so larger y
// passes in front in both half-spaces.
std::vector<int> word_from_swaps(const ClosedCurve& curve, const std::vector<Strand>& strands,
                                 const std::vector<SwapEvent>& events, double alpha) {
    double ca = std::cos(alpha), sa = std::sin(alpha);
    auto pos_of = [&](const Strand& s, double tau) {
        State st = curve.at(std::fmod(s.t_entry + tau * s.duration, curve.period));
        return st.x * ca + st.z * sa;
    };

    int n = static_cast<int>(strands.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return pos_of(strands[a], 0.0) < pos_of(strands[b], 0.0);
    });
    for (int k = 0; k + 1 < n; ++k)
        if (std::abs(pos_of(strands[order[k]], 0.0) - pos_of(strands[order[k + 1]], 0.0)) < 1e-12)
            throw ambiguous_crossing_error("strand entry positions coincide in projection");

    std::vector<int> word;
    for (const auto& ev : events) {
        auto ki = std::find(order.begin(), order.end(), ev.i) - order.begin();
        auto kj = std::find(order.begin(), order.end(), ev.j) - order.begin();
        if (std::abs(ki - kj) != 1)
            throw ambiguous_crossing_error("non-adjacent strand swap (simultaneous crossings)");
        auto k = std::min(ki, kj);
        int left = order[k];
        double y_left = (left == ev.i) ? ev.y_i : ev.y_j;
        double y_right = (left == ev.i) ? ev.y_j : ev.y_i;
        bool left_in_front = y_left > y_right;
        word.push_back(left_in_front ? static_cast<int>(k + 1) : -static_cast<int>(k + 1));
        std::swap(order[k], order[k + 1]);
    }
    return word;
}

}  // namespace

BraidData extract_braid_from_curve(const ClosedCurve& curve) {
    auto crossings = curve_crossings(curve);
    int n_up = 0;
    for (const auto& c : crossings) n_up += c.rising ? 1 : 0;
    if (crossings.empty() || crossings.size() % 2 != 0 ||
        n_up * 2 != static_cast<int>(crossings.size()))
        throw std::invalid_argument(
            "extract_braid: curve crossings of y = 0 do not alternate (tangency or no "
            "crossing)");

    BraidData braid;
    braid.n_strands = n_up;

    std::vector<Strand> upper, lower;
    int m = static_cast<int>(crossings.size());
    for (int k = 0; k < m; ++k) {
        const auto& c = crossings[k];
        const auto& next = crossings[(k + 1) % m];
        double t_next = next.t > c.t ? next.t : next.t + curve.period;
        Strand s{c.t, t_next - c.t};
        if (c.rising)
            upper.push_back(s);
        else
            lower.push_back(s);
    }

    for (int attempt = 0; attempt < 6; ++attempt) {
        double alpha = attempt * 1e-3;
        try {
            auto up_events = strand_swaps(curve, upper, alpha);
            auto down_events = strand_swaps(curve, lower, alpha);
            braid.word_up = word_from_swaps(curve, upper, up_events, alpha);
            braid.word_down = word_from_swaps(curve, lower, down_events, alpha);
            std::vector<int> whole = braid.word_up;
            whole.insert(whole.end(), braid.word_down.begin(), braid.word_down.end());
            braid.alexander = alexander_polynomial(whole, braid.n_strands);
            braid.verdict = knot_verdict(braid);
            return braid;
        } catch (const ambiguous_crossing_error&) {
            if (attempt == 5) throw;
        }
    }
    throw ambiguous_crossing_error("extract_braid: projection stayed ambiguous");
}

BraidData extract_braid(const PeriodicOrbit& orbit, const SystemParams& params,
                        const IntegratorConfig& cfg) {
    if (orbit.section_points.empty())
        throw std::invalid_argument("extract_braid: orbit has no section points");
    const State start = orbit.section_points.front().state;

    IntegratorConfig bcfg = cfg;
    bcfg.t_max = std::max(bcfg.t_max, 2.0 * orbit.period);
    Trajectory traj = integrate(params, start, {0.0, orbit.period}, bcfg);

    ClosedCurve curve;
    curve.period = orbit.period;
    auto shared = std::make_shared<Trajectory>(std::move(traj));
    curve.at = [shared](double t) {
        double tt = std::fmod(t, shared->t_end());
        if (tt < 0.0) tt += shared->t_end();
        return shared->evaluate(tt);
    };
    return extract_braid_from_curve(curve);
}

ClosedCurve trefoil_curve() {
    // (2,3) torus knot; the parameter shift keeps the start of the
    // parameterization away from the section plane.
    ClosedCurve curve;
    curve.period = 2.0 * M_PI;
    curve.at = [](double t) {
        double u = t + 0.35;
        return State{(2.0 + std::cos(3.0 * u)) * std::cos(2.0 * u),
                     (2.0 + std::cos(3.0 * u)) * std::sin(2.0 * u), std::sin(3.0 * u)};
    };
    return curve;
}

}  // namespace flowtopo
