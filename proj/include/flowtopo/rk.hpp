#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta stepper with the classic quartic
// dense output. Templated on the state dimension so the same core drives
// plain phase-space integration (N = 3) and the first-variation system
// (N = 12).

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace flowtopo::rk {

template <std::size_t N>
using VecN = std::array<double, N>;

namespace dp5 {

constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;

constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

}  // namespace dp5

/// Dense interpolant for one accepted step, valid on [t0, t0 + h].
template <std::size_t N>
struct DenseSegment {
    double t0 = 0.0;
    double h = 0.0;
    VecN<N> r1{}, r2{}, r3{}, r4{}, r5{};

    VecN<N> eval(double t) const {
        double theta = (t - t0) / h;
        return eval_theta(theta);
    }

    VecN<N> eval_theta(double theta) const {
        double theta1 = 1.0 - theta;
        VecN<N> out;
        for (std::size_t i = 0; i < N; ++i)
            out[i] = r1[i] +
                     theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        return out;
    }
};

enum class StopReason { ReachedEnd, Escaped, StepUnderflow };

template <std::size_t N>
struct Solution {
    std::vector<double> times;
    std::vector<VecN<N>> states;
    std::vector<VecN<N>> derivatives;
    std::vector<DenseSegment<N>> segments;  // one per step, times.size() - 1 total
    StopReason stop = StopReason::ReachedEnd;
    std::size_t n_rejected = 0;

    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }

    /// Evaluates the dense output. At sample times the stored sample is
    /// returned unchanged; elsewhere the segment interpolant is used.
    VecN<N> evaluate(double t) const {
        std::size_t seg = segment_index(t);
        if (t == times[seg]) return states[seg];
        if (t == times[seg + 1]) return states[seg + 1];
        return segments[seg].eval(t);
    }

    std::size_t segment_index(double t) const {
        if (times.size() < 2) throw std::out_of_range("solution has no segments");
        if (t < times.front() || t > times.back())
            throw std::out_of_range("dense evaluation outside integration span");
        std::size_t lo = 0, hi = segments.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi + 1) / 2;
            if (times[mid] <= t)
                lo = mid;
            else
                hi = mid - 1;
        }
        return lo;
    }
};

struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double escape_norm = std::numeric_limits<double>::infinity();
    std::size_t escape_dims = 3;  // leading components entering the escape norm
};

/// Integrates dy/dt = f(y) over [t0, t1] (t1 > t0). Stops early when the
/// norm of the leading escape_dims components reaches escape_norm, or when
/// the step size underflows; the partial solution is returned either way and
/// the caller inspects `stop`.
template <std::size_t N, typename F>
Solution<N> integrate_dopri5(F&& f, const VecN<N>& y0, double t0, double t1,
                             const StepControl& ctl) {
    using namespace dp5;
    if (!(t1 > t0)) throw std::invalid_argument("integrate_dopri5: need t1 > t0");

    Solution<N> sol;
    sol.times.push_back(t0);
    sol.states.push_back(y0);

    VecN<N> y = y0;
    VecN<N> k1 = f(y);
    sol.derivatives.push_back(k1);

    auto scale_of = [&](const VecN<N>& a, const VecN<N>& b, std::size_t i) {
        return ctl.abs_tol + ctl.rel_tol * std::max(std::abs(a[i]), std::abs(b[i]));
    };

    // Initial step size along the lines of Hairer's hinit.
    double h;
    {
        double d0 = 0.0, d1n = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double sc = scale_of(y, y, i);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1n += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1n = std::sqrt(d1n / N);
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, t1 - t0);
        VecN<N> y1;
        for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + h0 * k1[i];
        VecN<N> f1 = f(y1);
        double d2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double sc = scale_of(y, y, i);
            d2 += ((f1[i] - k1[i]) / sc) * ((f1[i] - k1[i]) / sc);
        }
        d2 = std::sqrt(d2 / N) / h0;
        double dm = std::max(d1n, d2);
        double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                  : std::pow(0.01 / dm, 0.2);
        h = std::min({100.0 * h0, h1, ctl.max_step, t1 - t0});
    }

    double t = t0;
    bool rejected_last = false;
    VecN<N> k2, k3, k4, k5, k6, k7, ynew, ytmp, errv;

    while (t < t1) {
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0)) {
            sol.stop = StopReason::StepUnderflow;
            return sol;
        }
        bool last_step = false;
        if (t + h >= t1) {
            h = t1 - t;
            last_step = true;
        }

        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        k2 = f(ytmp);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = f(ytmp);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = f(ytmp);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = f(ytmp);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] =
                y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        k6 = f(ytmp);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] =
                y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        k7 = f(ynew);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            errv[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                           e7 * k7[i]);
            double sc = scale_of(y, ynew, i);
            err += (errv[i] / sc) * (errv[i] / sc);
        }
        err = std::sqrt(err / N);
        bool finite = std::isfinite(err);
        for (std::size_t i = 0; i < N && finite; ++i)
            if (!std::isfinite(ynew[i])) finite = false;

        if (!finite || err > 1.0) {
            double fac = finite ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
            h *= std::min(fac, 1.0);
            rejected_last = true;
            ++sol.n_rejected;
            continue;
        }

        DenseSegment<N> seg;
        seg.t0 = t;
        seg.h = h;
        for (std::size_t i = 0; i < N; ++i) {
            double ydiff = ynew[i] - y[i];
            double bspl = h * k1[i] - ydiff;
            seg.r1[i] = y[i];
            seg.r2[i] = ydiff;
            seg.r3[i] = bspl;
            seg.r4[i] = ydiff - h * k7[i] - bspl;
            seg.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                             d7 * k7[i]);
        }
        sol.segments.push_back(seg);

        t = last_step ? t1 : t + h;
        y = ynew;
        k1 = k7;  // FSAL
        sol.times.push_back(t);
        sol.states.push_back(y);
        sol.derivatives.push_back(k1);

        double esc = 0.0;
        for (std::size_t i = 0; i < std::min(ctl.escape_dims, N); ++i) esc += y[i] * y[i];
        if (std::sqrt(esc) >= ctl.escape_norm) {
            sol.stop = StopReason::Escaped;
            return sol;
        }

        double fac = 0.9 * std::pow(std::max(err, 1e-300), -0.2);
        fac = std::min(rejected_last ? 1.0 : 5.0, std::max(0.2, fac));
        h = std::min(h * fac, ctl.max_step);
        rejected_last = false;
    }
    sol.stop = StopReason::ReachedEnd;
    return sol;
}

struct SignChange {
    std::size_t segment = 0;
    double t = 0.0;
    bool rising = false;  // value passes from negative to positive
};

class refinement_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Locates every sign change of g(y(t)) along the dense output, refined by
/// bisection in segment-local coordinates until |g| < value_tol. Grid points
/// with |g| <= value_tol do not form brackets, which excludes roots sitting
/// exactly at the start of the span.
template <std::size_t N, typename G>
std::vector<SignChange> find_sign_changes(const Solution<N>& sol, G&& g, double value_tol = 1e-12,
                                          int subdivisions = 8, int max_iter = 200) {
    std::vector<SignChange> out;
    if (sol.segments.empty()) return out;

    bool have_prev = false;
    double ga = 0.0;
    std::size_t seg_a = 0;
    double theta_a = 0.0;
    bool have_tiny = false;
    std::size_t tiny_seg = 0;
    double tiny_t = 0.0;

    for (std::size_t seg = 0; seg < sol.segments.size(); ++seg) {
        for (int j = (seg == 0 ? 0 : 1); j <= subdivisions; ++j) {
            double theta = static_cast<double>(j) / subdivisions;
            VecN<N> yv = (j == 0)               ? sol.states[seg]
                         : (j == subdivisions)  ? sol.states[seg + 1]
                                                : sol.segments[seg].eval_theta(theta);
            double gv = g(yv);
            if (std::abs(gv) <= value_tol) {
                have_tiny = true;
                tiny_seg = seg;
                tiny_t = sol.segments[seg].t0 + theta * sol.segments[seg].h;
                continue;
            }
            if (have_prev && ga * gv < 0.0) {
                SignChange ev;
                ev.rising = gv > 0.0;
                if (seg_a == seg) {
                    // bisection on theta inside one segment, run to full
                    // width so shallow (near-tangent) roots land as close to
                    // the true zero as the dense output allows
                    double lo = theta_a, hi = theta, glo = ga;
                    for (int it = 0;
                         it < max_iter && hi - lo > 2.0 * std::numeric_limits<double>::epsilon();
                         ++it) {
                        double tm = 0.5 * (lo + hi);
                        double gm = g(sol.segments[seg].eval_theta(tm));
                        if (gm == 0.0) {
                            lo = hi = tm;
                            break;
                        }
                        if ((gm < 0.0) == (glo < 0.0)) {
                            lo = tm;
                            glo = gm;
                        } else {
                            hi = tm;
                        }
                    }
                    double tm = 0.5 * (lo + hi);
                    double gm = g(sol.segments[seg].eval_theta(tm));
                    if (std::abs(gm) >= value_tol)
                        throw refinement_error("event refinement did not converge");
                    ev.segment = seg;
                    ev.t = sol.segments[seg].t0 + tm * sol.segments[seg].h;
                } else {
                    // The bracket spans grid points whose values sat inside
                    // the tolerance band; the root is one of those points.
                    ev.segment = have_tiny ? tiny_seg : seg;
                    ev.t = have_tiny ? tiny_t : sol.times[seg];
                }
                const double t_lo = sol.t_begin();
                if (ev.t > t_lo) out.push_back(ev);
            }
            have_prev = true;
            ga = gv;
            seg_a = seg;
            theta_a = theta;
            have_tiny = false;
        }
    }
    return out;
}

}  // namespace flowtopo::rk
