#include "raxcode/channel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace raxcode {

namespace {

double checked_log(double p) {
    return p > 0.0 ? std::log(p) : kNegInf;
}

}  // namespace

InputDistribution::InputDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("input distribution is empty");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw std::invalid_argument("input distribution has a negative entry");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > kProbSumTol)
        throw std::invalid_argument("input distribution does not sum to 1");
    log_probs_.reserve(probs_.size());
    for (double p : probs_) log_probs_.push_back(checked_log(p));
}

Channel::Channel(std::vector<uint32_t> input_sizes, uint32_t output_size,
                 std::vector<double> transition)
    : input_sizes_(std::move(input_sizes)), output_size_(output_size), p_(std::move(transition)) {
    if (input_sizes_.empty()) throw std::invalid_argument("channel needs at least one user");
    if (input_sizes_.size() > kMaxUsers)
        throw std::invalid_argument("more than 16 users is not supported");
    if (output_size_ == 0) throw std::invalid_argument("output alphabet is empty");
    joint_inputs_ = 1;
    for (uint32_t s : input_sizes_) {
        if (s == 0) throw std::invalid_argument("input alphabet is empty");
        joint_inputs_ *= s;
    }
    strides_.assign(input_sizes_.size(), 1);
    for (size_t k = input_sizes_.size(); k-- > 1;)
        strides_[k - 1] = strides_[k] * input_sizes_[k];

    if (p_.size() != joint_inputs_ * output_size_)
        throw std::invalid_argument("transition tensor shape mismatch");
    for (size_t x = 0; x < joint_inputs_; ++x) {
        double sum = 0.0;
        for (uint32_t y = 0; y < output_size_; ++y) {
            const double v = prob(x, y);
            if (!(v >= 0.0) || v > 1.0 + kProbSumTol)
                throw std::invalid_argument("transition probability outside [0,1] in row " +
                                            std::to_string(x + 1));
            sum += v;
        }
        if (std::fabs(sum - 1.0) > kProbSumTol)
            throw std::invalid_argument("transition row " + std::to_string(x + 1) +
                                        " sums to " + std::to_string(sum) + ", expected 1");
    }
    logp_.reserve(p_.size());
    for (double v : p_) logp_.push_back(checked_log(v));
}

size_t Channel::joint_index(std::span<const uint8_t> symbols) const {
    size_t idx = 0;
    for (size_t k = 0; k < symbols.size(); ++k) idx += strides_[k] * symbols[k];
    return idx;
}

RateProfile::RateProfile(std::vector<std::vector<RatePoint>> users) : users_(std::move(users)) {
    if (users_.empty()) throw std::invalid_argument("rate profile needs at least one user");
    for (const auto& pts : users_) {
        if (pts.empty()) throw std::invalid_argument("each user needs at least one rate point");
        for (size_t i = 0; i < pts.size(); ++i) {
            if (!(pts[i].rate >= 0.0)) throw std::invalid_argument("rates must be nonnegative");
            if (i > 0 && !(pts[i].rate > pts[i - 1].rate))
                throw std::invalid_argument("rates must be strictly increasing per user");
        }
    }
}

OperationRegion::OperationRegion(std::set<RateIndexVector> members)
    : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("operation region is empty");
}

void validate_region(const RateProfile& rp, const OperationRegion& region) {
    for (const auto& v : region.members()) {
        if (v.size() != rp.num_users())
            throw std::invalid_argument("region vector length does not match user count");
        for (size_t k = 0; k < v.size(); ++k)
            if (v[k] >= rp.user(k).size())
                throw std::invalid_argument("region rate index out of range");
    }
}

std::vector<RateIndexVector> all_rate_vectors(const RateProfile& rp) {
    std::vector<RateIndexVector> out;
    RateIndexVector v(rp.num_users(), 0);
    while (true) {
        out.push_back(v);
        size_t k = rp.num_users();
        while (k-- > 0) {
            if (++v[k] < rp.user(k).size()) break;
            v[k] = 0;
            if (k == 0) return out;
        }
    }
}

std::vector<RateIndexVector> out_of_region_vectors(const RateProfile& rp,
                                                   const OperationRegion& region) {
    std::vector<RateIndexVector> out;
    for (auto& v : all_rate_vectors(rp))
        if (!region.contains(v)) out.push_back(std::move(v));
    return out;
}

namespace {

// Strips comments, returns whitespace-separated tokens.
std::vector<std::string> tokenize_channel_stream(std::istream& in) {
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    return tokens;
}

uint64_t parse_uint(const std::string& tok, const char* what) {
    size_t used = 0;
    uint64_t v = 0;
    try {
        v = std::stoull(tok, &used);
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("channel file: bad ") + what + " '" + tok + "'");
    }
    if (used != tok.size())
        throw std::runtime_error(std::string("channel file: bad ") + what + " '" + tok + "'");
    return v;
}

double parse_prob(const std::string& tok, size_t row) {
    size_t used = 0;
    double v = 0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("channel file: bad probability '" + tok + "' in row " +
                                 std::to_string(row));
    }
    if (used != tok.size())
        throw std::runtime_error("channel file: bad probability '" + tok + "' in row " +
                                 std::to_string(row));
    return v;
}

}  // namespace

Channel load_channel(std::istream& in) {
    const auto tokens = tokenize_channel_stream(in);
    size_t pos = 0;
    auto next = [&](const char* what) -> const std::string& {
        if (pos >= tokens.size())
            throw std::runtime_error(std::string("channel file: missing ") + what);
        return tokens[pos++];
    };

    if (next("'dmc' header") != "dmc")
        throw std::runtime_error("channel file: expected 'dmc' header");
    const uint64_t k = parse_uint(next("user count"), "user count");
    if (k == 0 || k > kMaxUsers)
        throw std::runtime_error("channel file: user count must be in 1..16");
    std::vector<uint32_t> input_sizes;
    size_t joint = 1;
    for (uint64_t i = 0; i < k; ++i) {
        const uint64_t s = parse_uint(next("input alphabet size"), "input alphabet size");
        if (s == 0 || s > 255) throw std::runtime_error("channel file: input size out of range");
        input_sizes.push_back(static_cast<uint32_t>(s));
        joint *= s;
    }
    const uint64_t y = parse_uint(next("output alphabet size"), "output alphabet size");
    if (y == 0) throw std::runtime_error("channel file: output size must be positive");

    std::vector<double> p;
    p.reserve(joint * y);
    for (size_t row = 1; row <= joint; ++row) {
        for (uint64_t j = 0; j < y; ++j) {
            if (pos >= tokens.size())
                throw std::runtime_error("channel file: row " + std::to_string(row) +
                                         " is truncated");
            p.push_back(parse_prob(tokens[pos++], row));
        }
    }
    if (pos != tokens.size())
        throw std::runtime_error("channel file: trailing data after last row");

    try {
        return Channel(std::move(input_sizes), static_cast<uint32_t>(y), std::move(p));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("channel file: ") + e.what());
    }
}

Channel load_channel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open channel file '" + path + "'");
    return load_channel(in);
}

double mutual_information(const Channel& ch, const InputDistribution& d) {
    if (ch.num_users() != 1)
        throw std::invalid_argument("mutual_information expects a single-user channel");
    return conditional_mutual_information(ch, {d}, 0);
}

double conditional_mutual_information(const Channel& ch,
                                      const std::vector<InputDistribution>& dists,
                                      SubsetMask s_mask) {
    const uint32_t k = ch.num_users();
    if (dists.size() != k) throw std::invalid_argument("need one input distribution per user");
    for (uint32_t u = 0; u < k; ++u)
        if (dists[u].size() != ch.input_size(u))
            throw std::invalid_argument("input distribution size does not match alphabet");
    if (s_mask == full_mask(k))
        throw std::invalid_argument("conditioning subset must be a proper subset");
    if (s_mask >= (SubsetMask{1} << k))
        throw std::invalid_argument("subset mask has bits beyond the user count");

    // Joint weight of each full input tuple, and the per-tuple split into the
    // conditioning part x_S.
    const size_t joint = ch.joint_input_size();
    std::vector<double> w(joint, 1.0);       // prod_k dists[k](x_k)
    std::vector<double> w_sbar(joint, 1.0);  // prod_{k not in S} dists[k](x_k)
    std::vector<size_t> xs_key(joint, 0);    // joint offset restricted to S users
    for (size_t x = 0; x < joint; ++x) {
        size_t rem = x;
        for (uint32_t u = 0; u < k; ++u) {
            const size_t sym = rem / ch.stride(u);
            rem %= ch.stride(u);
            w[x] *= dists[u][sym];
            if (in_subset(s_mask, u)) xs_key[x] += sym * ch.stride(u);
            else w_sbar[x] *= dists[u][sym];
        }
    }

    // P(y | x_S) = sum over the complement of the complement-weighted rows.
    // Keyed by the S-part joint offset; complement symbols at zero.
    std::vector<double> cond(joint * ch.output_size(), 0.0);
    for (size_t x = 0; x < joint; ++x)
        for (uint32_t y = 0; y < ch.output_size(); ++y)
            cond[xs_key[x] * ch.output_size() + y] += w_sbar[x] * ch.prob(x, y);

    double mi = 0.0;
    for (size_t x = 0; x < joint; ++x) {
        if (w[x] == 0.0) continue;
        for (uint32_t y = 0; y < ch.output_size(); ++y) {
            const double pyx = ch.prob(x, y);
            if (pyx == 0.0) continue;
            const double denom = cond[xs_key[x] * ch.output_size() + y];
            mi += w[x] * pyx * std::log(pyx / denom);
        }
    }
    return mi;
}

std::vector<SubsetMask> rate_vector_violations(const Channel& ch, const RateProfile& rp,
                                               const RateIndexVector& v) {
    const uint32_t k = ch.num_users();
    std::vector<InputDistribution> dists;
    dists.reserve(k);
    for (uint32_t u = 0; u < k; ++u) dists.push_back(rp.point(u, v[u]).dist);

    std::vector<SubsetMask> violated;
    for (SubsetMask s = 0; s < full_mask(k); ++s) {
        double rate_sum = 0.0;
        for (uint32_t u = 0; u < k; ++u)
            if (!in_subset(s, u)) rate_sum += rp.point(u, v[u]).rate;
        if (!(rate_sum < conditional_mutual_information(ch, dists, s))) violated.push_back(s);
    }
    return violated;
}

RegionCheck region_is_achievable(const Channel& ch, const RateProfile& rp,
                                 const OperationRegion& region) {
    if (ch.num_users() != rp.num_users())
        throw std::invalid_argument("channel and profile user counts differ");
    validate_region(rp, region);
    RegionCheck out;
    for (const auto& v : region.members()) {
        for (SubsetMask s : rate_vector_violations(ch, rp, v)) {
            out.achievable = false;
            out.violations.push_back({v, s});
        }
    }
    return out;
}

}  // namespace raxcode
