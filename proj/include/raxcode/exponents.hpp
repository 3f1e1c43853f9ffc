#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "raxcode/channel.hpp"

namespace raxcode {

// Controls the (rho, s) search: a coarse inclusive grid over the clamped
// feasible box followed by rounds of alternating 1-D golden-section
// refinement around the incumbent. Any feasible point is a valid achievable
// exponent, so approximate maximization never invalidates a result.
struct OptimizerConfig {
    int grid_points_rho = 65;
    int grid_points_s = 65;
    int refine_iters = 32;
    double epsilon = 1e-9;  // clamp for the open interval endpoints

    void validate() const;
};

enum class ExponentKind { Em, Ei, EmTilde, EiTilde };

const char* to_string(ExponentKind k);

// Exponent value plus the maximizing certificate. The value always equals
// the objective re-evaluated at (rho_star, s_star); negative values are
// returned as-is (the bound is then trivial but still valid).
struct ExponentResult {
    double value = 0.0;
    double rho_star = 0.0;
    double s_star = 0.0;
    ExponentKind kind = ExponentKind::Em;
};

// Likelihood-dominance exponent, single user. `competitor_rate` and
// `competitor` describe the rate class whose codewords could outscore the
// transmitted one under maximum likelihood.
ExponentResult em_single(const Channel& ch, const InputDistribution& sent_dist,
                         double competitor_rate, const InputDistribution& competitor_dist,
                         const OptimizerConfig& cfg);

// Typicality-threshold exponent, single user. `out_dist` is the input
// distribution of an out-of-region rate class.
ExponentResult ei_single(const Channel& ch, double sent_rate, const InputDistribution& sent_dist,
                         const InputDistribution& out_dist, const OptimizerConfig& cfg);

// Multi-user versions. `s_mask` names the users whose (message, rate) pair
// the competing candidate agrees with; all per-user vectors are indexed by
// user and must have K entries. Entries for users inside the subset are only
// read where the formula needs them (the conditioning prefix reads
// sent_dists for every user; competitor data is read for users outside the
// subset only).
ExponentResult em_multi(const Channel& ch, SubsetMask s_mask,
                        const std::vector<InputDistribution>& sent_dists,
                        const std::vector<double>& competitor_rates,
                        const std::vector<InputDistribution>& competitor_dists,
                        const OptimizerConfig& cfg);

ExponentResult ei_multi(const Channel& ch, SubsetMask s_mask,
                        const std::vector<double>& sent_rates,
                        const std::vector<InputDistribution>& sent_dists,
                        const std::vector<InputDistribution>& out_dists,
                        const OptimizerConfig& cfg);

// Grid-rate exponents. The continuum of rates inside a grid cell is stood in
// for by a finite candidate family: each entry is a per-user distribution
// vector (users outside the subset are read), and the bracket term takes the
// candidate attaining the smallest value, pointwise in (y, x_S).
// `grid_rates[k]` is the cell's upper-edge rate for user k.
ExponentResult em_tilde(const Channel& ch, SubsetMask s_mask,
                        const std::vector<InputDistribution>& sent_dists,
                        const std::vector<double>& grid_rates,
                        const std::vector<std::vector<InputDistribution>>& family,
                        const OptimizerConfig& cfg);

// For the grid-rate typicality exponent the family stands in for the
// in-region rates mapping to the grid vector; `out_dists` supplies both the
// conditioning prefix (users in the subset, pinned to the out-of-region
// vector) and the plain-likelihood bracket (users outside).
ExponentResult ei_tilde(const Channel& ch, SubsetMask s_mask,
                        const std::vector<double>& grid_rates,
                        const std::vector<std::vector<InputDistribution>>& family,
                        const std::vector<InputDistribution>& out_dists,
                        const OptimizerConfig& cfg);

// Which term attains a system-exponent lower bound.
struct EsWitness {
    ExponentKind kind = ExponentKind::Em;
    SubsetMask subset = 0;
    RateIndexVector sent;
    RateIndexVector competitor;
    ExponentResult exponent;
};

struct EsLowerResult {
    double value = 0.0;
    EsWitness witness;
};

// System error exponent lower bounds: the minimum of the dominance exponents
// over in-region pairs and the threshold exponents over (in, out) pairs,
// with subset agreement constraints in the multi-user case.
EsLowerResult es_lower_single(const Channel& ch, const RateProfile& rp,
                              const OperationRegion& region, const OptimizerConfig& cfg);

EsLowerResult es_lower_multi(const Channel& ch, const RateProfile& rp,
                             const OperationRegion& region, const OptimizerConfig& cfg);

}  // namespace raxcode
