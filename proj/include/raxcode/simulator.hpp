#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "raxcode/channel.hpp"

namespace raxcode {

// Raised when an enumeration or codebook materialization would exceed its
// configured budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr uint64_t kDefaultSymbolBudget = 1ull << 26;  // codeword symbols

// Typicality-threshold parameters. The decoder's threshold construction is
// parameterized by (rho_tilde, s1, s2); exponent results come as (rho, s),
// related by the variable change
//   rho = rho_tilde (rho_tilde - s2) / (rho_tilde - (1 - rho_tilde) s2),
//   s   = 1 - (rho_tilde - s2) / (rho_tilde - (1 - rho_tilde) s2),
// which this type inverts. `offset` is added to every threshold in nats.
struct ThresholdParams {
    double rho = 0.0;
    double s = 0.0;
    double offset = 0.0;
    double rho_tilde = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;

    ThresholdParams(double rho_in, double s_in, double offset_in = 0.0);
};

struct CodebookSpec {
    uint32_t n = 1;        // codeword length in symbols
    uint64_t seed = 0;     // codebook draw seed
};

// One random-coding codebook draw for all users. Codewords are generated
// deterministically from (seed, user, class, message), so any codeword can
// be produced without materializing its class; whole classes are cached on
// first access. Class sizes are floor(e^{n r}), which may be far beyond
// anything enumerable for out-of-region rates; only classes that decoding
// iterates need to fit the symbol budget.
class Codebook {
public:
    Codebook(const Channel& ch, const RateProfile& rp, const CodebookSpec& spec);

    uint32_t n() const { return n_; }
    size_t num_users() const { return num_users_; }

    double class_size_real(size_t user, size_t cls) const;
    // Throws BudgetError when the class is too large to enumerate.
    uint64_t class_size(size_t user, size_t cls) const;

    std::span<const uint8_t> codeword(size_t user, size_t cls, uint64_t msg);

    // Materializes every codeword of a class; counts against `symbol_budget`
    // together with everything materialized before.
    void materialize_class(size_t user, size_t cls, uint64_t symbol_budget);

    // Replaces a codeword (exact-enumeration oracle and tests).
    void set_codeword(size_t user, size_t cls, uint64_t msg, std::vector<uint8_t> symbols);

private:
    std::vector<uint8_t> generate(size_t user, size_t cls, uint64_t msg) const;

    const RateProfile* rp_;
    std::vector<uint32_t> input_sizes_;
    uint32_t n_;
    uint64_t seed_;
    size_t num_users_;
    uint64_t materialized_symbols_ = 0;
    // [user][cls] -> contiguous class storage (class_size * n symbols)
    std::vector<std::vector<std::vector<uint8_t>>> classes_;
    std::vector<std::vector<bool>> full_;
    std::map<std::tuple<size_t, size_t, uint64_t>, std::vector<uint8_t>> single_;
};

// Draws a codebook with every class materialized eagerly.
Codebook generate_codebook(const Channel& ch, const RateProfile& rp, const CodebookSpec& spec,
                           uint64_t symbol_budget = kDefaultSymbolBudget);

struct DecodeOutcome {
    bool collision = true;
    RateIndexVector classes;
    std::vector<uint64_t> messages;

    bool decoded(const RateIndexVector& cls, const std::vector<uint64_t>& msg) const {
        return !collision && classes == cls && messages == msg;
    }
};

// Typicality threshold in nats/symbol for a candidate at rate class `cls`
// (single user). The worst out-of-region rate class is chosen per received
// sequence by exhaustive maximization of the ensemble likelihood. Returns
// +inf when the region covers every rate (nothing to confuse with).
double compute_threshold(const Channel& ch, std::span<const uint8_t> y, double rate,
                         const InputDistribution& rate_dist,
                         const std::vector<InputDistribution>& out_dists,
                         const ThresholdParams& tp);

// Multi-user per-subset threshold for a candidate whose subset-user
// codewords are fixed (`s_codewords` is indexed by user; only subset entries
// are read). `out_choices` lists the distributions of out-of-region rate
// vectors agreeing with the candidate on the subset; per-user entries
// outside the subset are read. `rate_sum` is the candidate's rate total over
// users outside the subset.
double compute_threshold_multi(const Channel& ch, std::span<const uint8_t> y, SubsetMask s_mask,
                               const std::vector<std::vector<uint8_t>>& s_codewords,
                               double rate_sum,
                               const std::vector<InputDistribution>& r_dists,
                               const std::vector<std::vector<InputDistribution>>& out_choices,
                               const ThresholdParams& tp);

// Maximum-likelihood decoding over the in-region codewords with strict
// dominance (ties collide) plus the typicality test. The same threshold
// parameters apply to every candidate rate class.
DecodeOutcome decode_single(const Channel& ch, std::span<const uint8_t> y, Codebook& cb,
                            const RateProfile& rp, const OperationRegion& region,
                            const ThresholdParams& tp);

// Multi-user rule: strict dominance over all in-region candidates plus the
// per-subset typicality tests; `tp_by_subset` is indexed by subset mask and
// must cover every proper subset, or be empty when the region covers the
// whole rate grid.
DecodeOutcome decode_multi(const Channel& ch, std::span<const uint8_t> y, Codebook& cb,
                           const RateProfile& rp, const OperationRegion& region,
                           const std::vector<ThresholdParams>& tp_by_subset);

struct SimCondition {
    RateIndexVector rate_indices;
    std::vector<uint64_t> messages;  // defaults to zero per user when empty
};

struct SimOutcome {
    SimCondition condition;
    bool in_region = false;
    uint64_t trials = 0;
    uint64_t errors = 0;  // decode errors when in-region, miss detections otherwise

    double freq() const { return trials ? static_cast<double>(errors) / trials : 0.0; }
    double wilson_radius_95() const;
};

// Monte Carlo estimate over the codebook ensemble: every trial draws a fresh
// codebook from a per-trial seed derived from (base_seed, trial index),
// transmits the condition's codeword, samples the channel and decodes.
// Deterministic for a fixed base_seed regardless of the thread count.
SimOutcome run_trials(const Channel& ch, const RateProfile& rp, const OperationRegion& region,
                      const std::vector<ThresholdParams>& tp_by_subset, uint32_t n,
                      const SimCondition& condition, uint64_t trials, uint64_t base_seed,
                      int threads = 1, uint64_t symbol_budget = kDefaultSymbolBudget);

// Exact ensemble-average error probability for tiny instances: sums over
// every realization of the participating codewords and every channel output
// sequence. Throws BudgetError when realizations * outputs exceeds
// `max_enumeration`.
double exact_ensemble_error(const Channel& ch, const RateProfile& rp,
                            const OperationRegion& region,
                            const std::vector<ThresholdParams>& tp_by_subset, uint32_t n,
                            const SimCondition& condition, double max_enumeration = 1e7);

}  // namespace raxcode
