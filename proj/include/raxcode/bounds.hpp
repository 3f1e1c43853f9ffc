#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "raxcode/channel.hpp"
#include "raxcode/exponents.hpp"

namespace raxcode {

enum class BoundBranch { DecodeSide, CollisionSide };

// One additive term of the finite-length bound, kept in the log domain.
// Decode-side terms recombine per sent group as log-sum-exp, then max over
// groups; collision-side terms recombine the same way. `group` identifies
// the transmitted rate vector (and representative choice) the term belongs
// to.
struct BoundTerm {
    BoundBranch branch = BoundBranch::DecodeSide;
    SubsetMask subset = 0;
    ExponentKind kind = ExponentKind::Em;
    std::string group;       // transmitted class cells + representative combo
    std::string competitor;  // competing cells + representative combo
    double log_value = 0.0;
    double rho_star = 0.0;
    double s_star = 0.0;

    std::string describe() const;
};

struct BoundResult {
    uint64_t n = 0;
    double log_p_es_upper = 0.0;
    double p_es_upper = 0.0;
    bool trivial = false;  // p_es_upper >= 1
    BoundBranch dominant = BoundBranch::DecodeSide;
    std::vector<BoundTerm> breakdown;
};

// Recomputes the bound from the breakdown terms alone (used by invariant
// checks; matches log_p_es_upper to the last bit by construction).
double recombine_breakdown(const std::vector<BoundTerm>& breakdown);

// Finite-length system error probability upper bounds, assembled from the
// dominance/threshold exponents entirely in the log domain. p_es_upper may
// underflow to zero for large n; log_p_es_upper is authoritative.
BoundResult pes_bound_single(uint64_t n, const Channel& ch, const RateProfile& rp,
                             const OperationRegion& region, const OptimizerConfig& cfg);

BoundResult pes_bound_multi(uint64_t n, const Channel& ch, const RateProfile& rp,
                            const OperationRegion& region, const OptimizerConfig& cfg);

// Grid-rate machinery: per user an ascending list of cell upper-edge rates,
// and per cell a finite list of representative rate points standing in for
// the in-region rates that round up to that cell edge.
struct StandardGrid {
    std::vector<std::vector<double>> edges;                 // [user][cell]
    std::vector<std::vector<std::vector<RatePoint>>> reps;  // [user][cell][i]

    size_t num_users() const { return edges.size(); }
    void validate(const Channel& ch) const;
};

// Builds the grid that collapses the standard-rate bound onto a discrete
// profile: one cell per rate point, each with a singleton representative.
StandardGrid singleton_grid(const RateProfile& rp);

// Standard-rate (grid) bound. `cell_region` holds cell-index vectors; rate
// vectors mapping to cells outside it are treated as out of region.
BoundResult pes_bound_standard(uint64_t n, const Channel& ch, const StandardGrid& grid,
                               const OperationRegion& cell_region, const OptimizerConfig& cfg);

}  // namespace raxcode
