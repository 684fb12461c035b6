#pragma once

#include <string>
#include <vector>

namespace kinlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail; // deterministic one-line summary with key numbers
};

struct VerifyReport {
    std::vector<CriterionResult> results;

    bool all_pass() const;
    /// One "criterion N [PASS|FAIL] name: detail" line per entry.
    std::string text() const;
};

/// The fast deterministic suite behind the `verify` subcommand:
/// sandwich propagation, mass conservation, hypocoercive decay, the Fourier
/// estimate suite, the pointwise moment bounds, the contraction audit, the
/// diffusion solver validation, and the micro-dissipation budget scaling.
VerifyReport run_verification(unsigned long long seed);

/// Diffusive-limit sweep acceptance check (slow; not part of `verify`).
CriterionResult check_limit_sweep();

/// Long-time closure acceptance check: log-linear fit of the paired-run
/// error over t in [1, 4] at eps = 0.1.
CriterionResult check_longtime_closure();

} // namespace kinlab
