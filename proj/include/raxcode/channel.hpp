#pragma once

#include <cstdint>
#include <istream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "raxcode/util.hpp"

namespace raxcode {

// Row-sum tolerance for channel transition rows and input distributions.
inline constexpr double kProbSumTol = 1e-9;

// Subset enumeration is by bitmask, so the user count is hard-capped.
inline constexpr uint32_t kMaxUsers = 16;

// Probability vector over one user's input alphabet.
class InputDistribution {
public:
    explicit InputDistribution(std::vector<double> probs);

    size_t size() const { return probs_.size(); }
    double operator[](size_t i) const { return probs_[i]; }
    double log_at(size_t i) const { return log_probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }

    bool operator==(const InputDistribution& o) const { return probs_ == o.probs_; }

private:
    std::vector<double> probs_;
    std::vector<double> log_probs_;
};

// Discrete memoryless channel P(y | x_1..x_K) over finite alphabets.
// Inputs are addressed either per user or through the mixed-radix joint
// index with user 0 most significant (the channel file row order).
class Channel {
public:
    Channel(std::vector<uint32_t> input_sizes, uint32_t output_size,
            std::vector<double> transition);

    uint32_t num_users() const { return static_cast<uint32_t>(input_sizes_.size()); }
    uint32_t input_size(size_t user) const { return input_sizes_[user]; }
    const std::vector<uint32_t>& input_sizes() const { return input_sizes_; }
    uint32_t output_size() const { return output_size_; }
    size_t joint_input_size() const { return joint_inputs_; }
    size_t stride(size_t user) const { return strides_[user]; }

    size_t joint_index(std::span<const uint8_t> symbols) const;

    double prob(size_t joint_x, uint32_t y) const { return p_[joint_x * output_size_ + y]; }
    double log_prob(size_t joint_x, uint32_t y) const { return logp_[joint_x * output_size_ + y]; }
    std::span<const double> row(size_t joint_x) const {
        return {p_.data() + joint_x * output_size_, output_size_};
    }

private:
    std::vector<uint32_t> input_sizes_;
    uint32_t output_size_;
    std::vector<double> p_;      // [joint_x * |Y| + y]
    std::vector<double> logp_;
    std::vector<size_t> strides_;
    size_t joint_inputs_;
};

// One communication-rate option: rate in nats/symbol plus the input
// distribution codewords of that rate class are drawn from.
struct RatePoint {
    double rate;
    InputDistribution dist;
};

// Per-user ordered list of rate options.
class RateProfile {
public:
    explicit RateProfile(std::vector<std::vector<RatePoint>> users);

    size_t num_users() const { return users_.size(); }
    const std::vector<RatePoint>& user(size_t k) const { return users_[k]; }
    const RatePoint& point(size_t k, size_t idx) const { return users_[k][idx]; }

private:
    std::vector<std::vector<RatePoint>> users_;
};

// One rate-index per user, indexing into that user's RateProfile entries.
using RateIndexVector = std::vector<uint32_t>;

// The set of rate-index vectors the receiver intends to decode.
class OperationRegion {
public:
    explicit OperationRegion(std::set<RateIndexVector> members);

    bool contains(const RateIndexVector& v) const { return members_.count(v) > 0; }
    const std::set<RateIndexVector>& members() const { return members_; }
    size_t size() const { return members_.size(); }

private:
    std::set<RateIndexVector> members_;
};

// Validates that region indices are consistent with the profile; all rate
// vectors in the full product grid that are not members are "out of region".
void validate_region(const RateProfile& rp, const OperationRegion& region);

// Enumerates the full product grid of rate-index vectors in lexicographic
// order, or only the part outside the region.
std::vector<RateIndexVector> all_rate_vectors(const RateProfile& rp);
std::vector<RateIndexVector> out_of_region_vectors(const RateProfile& rp,
                                                   const OperationRegion& region);

// Parses the text channel format:
//   line 1:  dmc K |X_1| ... |X_K| |Y|
//   then one row of |Y| floats per input tuple, tuples in lexicographic
//   order of (x_1..x_K).  '#' starts a comment.
Channel load_channel(std::istream& in);
Channel load_channel_file(const std::string& path);

// I(X;Y) in nats for a single-user channel.
double mutual_information(const Channel& ch, const InputDistribution& d);

// I(X_{S^c}; Y | X_S) in nats under independent per-user inputs. S must be a
// proper subset of the users; S may be empty (giving I(X_1..X_K; Y)).
double conditional_mutual_information(const Channel& ch,
                                      const std::vector<InputDistribution>& dists,
                                      SubsetMask s_mask);

struct RegionViolation {
    RateIndexVector rates;
    SubsetMask subset;
};

struct RegionCheck {
    bool achievable = true;
    std::vector<RegionViolation> violations;
};

// A region is achievable when every member rate vector satisfies
// sum_{k not in S} r_k < I(X_{S^c}; Y | X_S) for every proper subset S.
RegionCheck region_is_achievable(const Channel& ch, const RateProfile& rp,
                                 const OperationRegion& region);

// Same test for a single rate vector, reporting the violating subsets.
std::vector<SubsetMask> rate_vector_violations(const Channel& ch, const RateProfile& rp,
                                               const RateIndexVector& v);

}  // namespace raxcode
