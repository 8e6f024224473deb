#pragma once

#include <string>
#include <vector>

#include "flowtopo/braid.hpp"
#include "flowtopo/orbits.hpp"
#include "flowtopo/topo.hpp"

namespace flowtopo {

enum class ClaimStatus { Pass, Fail, Skipped };

std::string to_string(ClaimStatus status);

struct Measurement {
    std::string name;
    double value = 0.0;
};

struct ClaimResult {
    std::string id;         // stable identifier, kebab-case
    std::string statement;  // what is being checked, in plain words
    std::string system;     // nose-hoover, moore-spiegel, hopf, fixture, both
    ClaimStatus status = ClaimStatus::Skipped;
    std::vector<Measurement> measured;
    std::string tolerance;  // thresholds the verdict was taken against
    std::string note;       // failure detail or skip reason
    // wall time of this claim; kept out of the serialized report so reports
    // stay byte-identical across runs
    double elapsed_seconds = 0.0;
};

struct VerifyOptions {
    bool include_nose_hoover = true;
    bool include_moore_spiegel = true;
    bool include_fixtures = true;     // Hopf oracle and the knot fixture
    bool include_orbit_hunts = true;  // recurrence scans plus Newton shooting
    // Negative-control fixture: flips the sign convention of the fixed-point
    // index inside the suite, which must fail exactly the index claims.
    bool mutate_index_sign = false;
};

struct ClaimReport {
    VerifyOptions options;
    std::vector<ClaimResult> claims;

    bool all_passed() const;
    int exit_status() const { return all_passed() ? 0 : 1; }
    const ClaimResult* find(const std::string& id) const;
};

/// Runs every claim selected by the options and never aborts early on a
/// failure; environmental errors surface as Skipped entries with a reason.
ClaimReport run_verification_suite(const VerifyOptions& options);

}  // namespace flowtopo
