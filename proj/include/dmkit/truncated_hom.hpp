#pragma once

#include <string>

#include "dmkit/invariants.hpp"

namespace dmkit {

/// The operator sum a_i F_t^{c-i} + sum b_i V_t^i of the source
/// presentation, acting on the target module.
TwistedOperator hom_operator(const CyclicPresentation& source,
                             const DieudonneModule& target);

/// log_p of the number of x in (target M)/p^m, over the degree-r extension
/// of the base residue field, killed by the source operator. m = 0 gives 0.
long long hom_kernel(const CyclicPresentation& source, const DieudonneModule& target,
                     int m, int r, long long work_bound = 4096);

struct GammaRow {
    int m = 0, r = 0;
    long long log_count = 0;
};

struct GammaProfile {
    std::vector<GammaRow> table;  // ordered by (m, r)
    /// per-level growth rate of log-count in r, divided by the base degree
    /// n; nullopt when the last two differences disagree (unstable level).
    std::vector<std::optional<long long>> gamma;  // gamma[m-1] for m = 1..m_max
    std::optional<int> f_detected;  // least m with gamma(m) = gamma(m+1)

    long long count_at(int m, int r) const;
};

/// Requires m_max >= 2 and r_max >= 3 (two growth ratios per level).
GammaProfile gamma_profile(const CyclicPresentation& source,
                           const DieudonneModule& target, int m_max, int r_max,
                           long long work_bound = 4096);

struct CrossCheck {
    std::string verdict;  // "agree" | "disagree" | "inconclusive"
    std::optional<int> f_detected;
    int ell = 0;
    GammaProfile profile;
};

/// Compares the experimental f (gamma stabilization of psi against itself)
/// with the level torsion of the module; budget overruns give the verdict
/// "inconclusive", never a silent pass.
CrossCheck cross_check(const CyclicPresentation& psi, int m_max = 3, int r_max = 6,
                       long long work_bound = 4096);

}  // namespace dmkit
