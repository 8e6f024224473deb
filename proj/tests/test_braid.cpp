#include <doctest.h>

#include <cmath>
#include <random>

#include "flowtopo/braid.hpp"

using namespace flowtopo;

TEST_CASE("Laurent arithmetic and exact division") {
    Laurent t = Laurent::monomial(1, 1);
    Laurent p = Laurent::from_coeffs({1, 0, 1}, 0);  // 1 + t^2
    CHECK((p * p).coeff(2) == 2);
    CHECK((p - p).is_zero());
    CHECK((Laurent::one() + t).str() == "t + 1");

    Laurent cube = Laurent::from_coeffs({1, 0, 0, 1}, 0);  // 1 + t^3
    Laurent lin = Laurent::from_coeffs({1, 1}, 0);         // 1 + t
    Laurent q = cube.divided_exact(lin);
    CHECK(q == Laurent::from_coeffs({1, -1, 1}, 0));
    CHECK_THROWS_AS(p.divided_exact(lin), std::domain_error);

    // unit normalization strips powers of t and flips signs
    Laurent m = Laurent::from_coeffs({-2, 1}, -3);
    Laurent n = m.normalized_units();
    CHECK(n.low_degree() == 0);
    CHECK(n.coeff(0) == 2);
    CHECK(n.coeff(1) == -1);
}

TEST_CASE("reduced Burau matrices satisfy the braid relation") {
    // sigma_1 sigma_2 sigma_1 = sigma_2 sigma_1 sigma_2 in B_3
    auto lhs = reduced_burau({1, 2, 1}, 3);
    auto rhs = reduced_burau({2, 1, 2}, 3);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(lhs[i][j] == rhs[i][j]);
    // generator times inverse is the identity
    auto id = reduced_burau({1, -1}, 3);
    CHECK(id[0][0].is_one());
    CHECK(id[1][1].is_one());
    CHECK(id[0][1].is_zero());
    CHECK(id[1][0].is_zero());
}

TEST_CASE("Alexander polynomials of standard closures") {
    // unknot as the empty 1-braid and as the closure of sigma_1
    CHECK(alexander_polynomial({}, 1).is_one());
    CHECK(alexander_polynomial({1}, 2).is_one());
    CHECK(alexander_polynomial({1, 2}, 3).is_one());
    // trefoil
    CHECK(alexander_polynomial({1, 1, 1}, 2) == Laurent::from_coeffs({1, -1, 1}, 0));
    // figure-eight
    CHECK(alexander_polynomial({1, -2, 1, -2}, 3) == Laurent::from_coeffs({1, -3, 1}, 0));
    // cinquefoil (5_1): t^4 - t^3 + t^2 - t + 1
    CHECK(alexander_polynomial({1, 1, 1, 1, 1}, 2) ==
          Laurent::from_coeffs({1, -1, 1, -1, 1}, 0));
    // split closures have a vanishing polynomial
    CHECK(alexander_polynomial({}, 2).is_zero());

    CHECK_THROWS_AS(alexander_polynomial({3}, 2), std::invalid_argument);
    CHECK_THROWS_AS(alexander_polynomial({0}, 2), std::invalid_argument);
}

TEST_CASE("free reduction invariance on random words") {
    std::mt19937 rng(20250810);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);  // strands 2..4
        int len = 1 + static_cast<int>(rng() % 8);
        std::vector<int> word;
        for (int i = 0; i < len; ++i) {
            int g = 1 + static_cast<int>(rng() % (n - 1));
            word.push_back((rng() & 1) ? g : -g);
        }
        // word * word^{-1} closes up to the identity braid
        std::vector<int> both = word;
        for (auto it = word.rbegin(); it != word.rend(); ++it) both.push_back(-*it);
        CHECK(alexander_polynomial(both, n) == alexander_polynomial({}, n));
    }
}

TEST_CASE("verdicts") {
    BraidData single;
    single.n_strands = 1;
    single.alexander = Laurent::one();
    CHECK(knot_verdict(single) == KnotVerdict::CertifiedUnknot);

    BraidData trefoil;
    trefoil.n_strands = 2;
    trefoil.alexander = Laurent::from_coeffs({1, -1, 1}, 0);
    CHECK(knot_verdict(trefoil) == KnotVerdict::NotUnknot);

    BraidData maybe;
    maybe.n_strands = 3;
    maybe.alexander = Laurent::one();
    CHECK(knot_verdict(maybe) == KnotVerdict::ConsistentWithUnknot);
}

namespace {

// Brute-force swap enumeration used as an oracle for the production braid
// extraction: dense uniform sampling, no refinement beyond the sample grid.
std::vector<int> brute_force_word(const ClosedCurve& curve, bool upper) {
    struct Crossing {
        double t;
        bool rising;
    };
    const int n_grid = 200000;
    std::vector<Crossing> crossings;
    double prev_t = 0.0;
    double prev_y = curve.at(0.0).y;
    for (int i = 1; i <= n_grid; ++i) {
        double t = curve.period * i / n_grid;
        double y = curve.at(std::fmod(t, curve.period)).y;
        if (prev_y != 0.0 && y != 0.0 && (prev_y < 0.0) != (y < 0.0))
            crossings.push_back({0.5 * (prev_t + t), y > 0.0});
        prev_t = t;
        prev_y = y;
    }
    struct Arc {
        double t0, dur;
    };
    std::vector<Arc> arcs;
    for (std::size_t k = 0; k < crossings.size(); ++k) {
        const auto& c = crossings[k];
        const auto& nx = crossings[(k + 1) % crossings.size()];
        if (c.rising != upper) continue;
        double t1 = nx.t > c.t ? nx.t : nx.t + curve.period;
        arcs.push_back({c.t, t1 - c.t});
    }
    auto x_of = [&](const Arc& a, double tau) {
        return curve.at(std::fmod(a.t0 + tau * a.dur, curve.period)).x;
    };
    auto y_of = [&](const Arc& a, double tau) {
        return curve.at(std::fmod(a.t0 + tau * a.dur, curve.period)).y;
    };
    struct Ev {
        double tau;
        std::size_t i, j;
        bool left_front;
    };
    std::vector<Ev> events;
    const int fine = 20000;
    for (std::size_t i = 0; i < arcs.size(); ++i)
        for (std::size_t j = i + 1; j < arcs.size(); ++j) {
            double pf = x_of(arcs[i], 0.0) - x_of(arcs[j], 0.0);
            for (int k = 1; k <= fine; ++k) {
                double tau = static_cast<double>(k) / fine;
                double f = x_of(arcs[i], tau) - x_of(arcs[j], tau);
                if (pf * f < 0.0) {
                    bool i_front = y_of(arcs[i], tau) > y_of(arcs[j], tau);
                    bool i_was_left = pf < 0.0;
                    events.push_back({tau, i, j, i_was_left == i_front});
                }
                pf = f;
            }
        }
    std::sort(events.begin(), events.end(), [](const Ev& a, const Ev& b) { return a.tau < b.tau; });

    std::vector<std::size_t> order(arcs.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return x_of(arcs[a], 0.0) < x_of(arcs[b], 0.0); });
    std::vector<int> word;
    for (const auto& ev : events) {
        auto ki = std::find(order.begin(), order.end(), ev.i) - order.begin();
        auto kj = std::find(order.begin(), order.end(), ev.j) - order.begin();
        auto k = std::min(ki, kj);
        word.push_back(ev.left_front ? static_cast<int>(k + 1) : -static_cast<int>(k + 1));
        std::swap(order[k], order[k + 1]);
    }
    return word;
}

}  // namespace

TEST_CASE("trefoil fixture: extraction, oracle cross-check, verdict") {
    ClosedCurve curve = trefoil_curve();
    BraidData braid = extract_braid_from_curve(curve);
    CHECK(braid.n_strands == 2);
    CHECK(braid.word_up.size() + braid.word_down.size() >= 3);

    // independent enumeration of the same projection
    auto up = brute_force_word(curve, true);
    auto down = brute_force_word(curve, false);
    CHECK(up == braid.word_up);
    CHECK(down == braid.word_down);

    // symbolic endpoint: the closure's polynomial, computed twice
    std::vector<int> whole = up;
    whole.insert(whole.end(), down.begin(), down.end());
    Laurent expected = Laurent::from_coeffs({1, -1, 1}, 0);
    CHECK(alexander_polynomial(whole, braid.n_strands) == expected);
    CHECK(braid.alexander == expected);
    CHECK(braid.verdict == KnotVerdict::NotUnknot);
}

TEST_CASE("round unknot through the section: no crossings, certified") {
    // a tilted circle crossing y = 0 twice: single strand per half-space
    ClosedCurve curve;
    curve.period = 2.0 * M_PI;
    curve.at = [](double t) {
        return State{std::cos(t), std::sin(t), 0.3 * std::cos(t) + 0.1};
    };
    BraidData braid = extract_braid_from_curve(curve);
    CHECK(braid.n_strands == 1);
    CHECK(braid.word_up.empty());
    CHECK(braid.word_down.empty());
    CHECK(braid.verdict == KnotVerdict::CertifiedUnknot);
}
