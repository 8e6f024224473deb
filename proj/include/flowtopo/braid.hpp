#pragma once

#include <functional>
#include <string>
#include <vector>

#include "flowtopo/laurent.hpp"
#include "flowtopo/orbits.hpp"

namespace flowtopo {

enum class KnotVerdict { CertifiedUnknot, ConsistentWithUnknot, NotUnknot };

std::string to_string(KnotVerdict verdict);

struct BraidData {
    int n_strands = 0;
    std::vector<int> word_up;    // signed generator indices, sigma_i as +/- i
    std::vector<int> word_down;
    Laurent alexander;
    KnotVerdict verdict = KnotVerdict::ConsistentWithUnknot;
};

/// Reduced Burau matrix of a braid word in B_n, an (n-1)x(n-1) matrix of
/// integer Laurent polynomials. Generator indices are 1-based; negative
/// entries denote inverses.
std::vector<std::vector<Laurent>> reduced_burau(const std::vector<int>& word, int n_strands);

/// Alexander polynomial of the closure of the word: det(I - Burau_reduced)
/// divided by 1 + t + ... + t^(n-1), normalized by units so the lowest
/// degree is 0 and its coefficient positive. Split closures (e.g. the
/// identity braid on n > 1 strands) yield the zero polynomial.
Laurent alexander_polynomial(const std::vector<int>& word, int n_strands);

/// Verdict for a braid whose closure is a single closed orbit. The Alexander
/// test is necessary, not sufficient, so a trivial polynomial on more than
/// one strand only reports consistency.
KnotVerdict knot_verdict(const BraidData& braid);

/// A closed curve in R^3, parameterized over [0, period).
struct ClosedCurve {
    std::function<State(double)> at;
    double period = 0.0;
};

class ambiguous_crossing_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Braid decomposition of a closed curve threaded through the plane y = 0:
/// the excursions into {y > 0} form the strands of word_up and those into
/// {y < 0} the strands of word_down. Each strand is parameterized by its
/// normalized transit fraction and projected to (fraction, x); a swap in
/// x-order contributes a generator whose sign encodes which strand passes
/// in front (larger y wins in {y > 0}, smaller |y| in {y < 0}, one fixed
/// viewing direction for the whole diagram). A swap with |delta y| < 1e-9
/// triggers a deterministic re-projection rotated by 1e-3 rad; if the
/// ambiguity persists after several rotations, ambiguous_crossing_error is
/// raised.
BraidData extract_braid_from_curve(const ClosedCurve& curve);

/// Re-integrates the orbit over one period (starting at its first Up
/// crossing) and extracts its braid decomposition.
BraidData extract_braid(const PeriodicOrbit& orbit, const SystemParams& params,
                        const IntegratorConfig& cfg = IntegratorConfig{});

/// Trigonometric torus-knot fixture: closed curve of knot type (2, 3) (the
/// trefoil) crossing the plane y = 0 transversally.
ClosedCurve trefoil_curve();

}  // namespace flowtopo
