#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dmkit/json_io.hpp"

namespace dmkit {

/// One sweep row: a presentation drawn from the normalized valuation-pattern
/// enumeration together with its computed invariants. status is "ok",
/// "budget" or "precision"; ell fields are meaningful only for ok isoclinic
/// rows.
struct SweepRow {
    int index = 0;
    int c = 0, d = 0, h = 0;
    std::string polygon;  // slope runs, e.g. "1/4x8"
    bool isoclinic = false;
    long long b = 0, q = 0;
    long long ell_lo = 0, ell_hi = 0;
    bool ell_exact = false;
    long long min_cd = 0, two_nu_floor = 0;
    std::string status;
};

/// Deterministic enumeration: all Psi = F^c + (p-power interior terms) + V^d
/// with c + d <= h_max and every interior coefficient in {0, p, ..., p^val_max}.
std::vector<SweepRow> run_sweep(std::uint64_t p, int n, int h_max, int val_max,
                                int precision_override = 0);

/// Full command-line front end; args excludes the program name.
/// Exit codes: 0 ok, 1 input error, 2 precision error, 3 budget exceeded /
/// inconclusive, 4 internal consistency failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace dmkit
