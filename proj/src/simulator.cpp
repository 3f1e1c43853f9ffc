#include "raxcode/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "raxcode/util.hpp"

namespace raxcode {

ThresholdParams::ThresholdParams(double rho_in, double s_in, double offset_in)
    : rho(rho_in), s(s_in), offset(offset_in) {
    if (!(rho > 0.0) || !(rho < 1.0) || !(s > 0.0) || !(s <= 1.0 - rho))
        throw std::invalid_argument("threshold parameters need 0 < rho < 1, 0 < s <= 1 - rho");
    rho_tilde = rho / (1.0 - s);
    s2 = rho_tilde * s / (1.0 - (1.0 - s) * (1.0 - rho_tilde));
    s1 = 1.0 - s2 / rho_tilde;
    if (!(s2 > 0.0) || !(s2 < rho_tilde) || !(s1 > 0.0) || !(s1 < 1.0))
        throw std::invalid_argument("threshold parameter change of variables left its domain");
    const double denom = rho_tilde - (1.0 - rho_tilde) * s2;
    const double rho_back = rho_tilde * (rho_tilde - s2) / denom;
    const double s_back = 1.0 - (rho_tilde - s2) / denom;
    if (std::fabs(rho_back - rho) > 1e-12 || std::fabs(s_back - s) > 1e-12)
        throw std::logic_error("threshold variable change failed to round-trip");
}

Codebook::Codebook(const Channel& ch, const RateProfile& rp, const CodebookSpec& spec)
    : rp_(&rp), input_sizes_(ch.input_sizes()), n_(spec.n), seed_(spec.seed),
      num_users_(rp.num_users()) {
    if (ch.num_users() != rp.num_users())
        throw std::invalid_argument("channel and profile user counts differ");
    if (n_ == 0) throw std::invalid_argument("codeword length must be positive");
    for (size_t u = 0; u < num_users_; ++u)
        for (const auto& pt : rp.user(u))
            if (pt.dist.size() != ch.input_size(u))
                throw std::invalid_argument("profile distribution size does not match alphabet");
    classes_.resize(num_users_);
    full_.resize(num_users_);
    for (size_t u = 0; u < num_users_; ++u) {
        classes_[u].resize(rp.user(u).size());
        full_[u].assign(rp.user(u).size(), false);
    }
}

double Codebook::class_size_real(size_t user, size_t cls) const {
    return std::floor(std::exp(static_cast<double>(n_) * rp_->point(user, cls).rate));
}

uint64_t Codebook::class_size(size_t user, size_t cls) const {
    const double real = class_size_real(user, cls);
    if (real > 0x1p62) throw BudgetError("rate class is too large to enumerate");
    return static_cast<uint64_t>(real);
}

std::vector<uint8_t> Codebook::generate(size_t user, size_t cls, uint64_t msg) const {
    Rng rng(mix_seed(mix_seed(mix_seed(seed_, user), cls), msg));
    const auto& dist = rp_->point(user, cls).dist;
    std::vector<uint8_t> cw(n_);
    for (uint32_t j = 0; j < n_; ++j) cw[j] = sample_discrete(rng, dist.probs());
    return cw;
}

std::span<const uint8_t> Codebook::codeword(size_t user, size_t cls, uint64_t msg) {
    if (auto it = single_.find({user, cls, msg}); it != single_.end()) return it->second;
    if (full_[user][cls]) {
        const auto& store = classes_[user][cls];
        return {store.data() + msg * n_, n_};
    }
    auto [it, ok] = single_.emplace(std::tuple{user, cls, msg}, generate(user, cls, msg));
    return it->second;
}

void Codebook::materialize_class(size_t user, size_t cls, uint64_t symbol_budget) {
    if (full_[user][cls]) return;
    const uint64_t count = class_size(user, cls);
    if (symbol_budget < materialized_symbols_ ||
        count > (symbol_budget - materialized_symbols_) / n_)
        throw BudgetError("codebook symbol budget exceeded");
    const uint64_t symbols = count * n_;
    materialized_symbols_ += symbols;
    auto& store = classes_[user][cls];
    store.resize(symbols);
    for (uint64_t msg = 0; msg < count; ++msg) {
        const auto cw = generate(user, cls, msg);
        std::copy(cw.begin(), cw.end(), store.begin() + msg * n_);
    }
    full_[user][cls] = true;
}

void Codebook::set_codeword(size_t user, size_t cls, uint64_t msg, std::vector<uint8_t> symbols) {
    if (symbols.size() != n_) throw std::invalid_argument("codeword length mismatch");
    if (full_[user][cls]) {
        auto& store = classes_[user][cls];
        std::copy(symbols.begin(), symbols.end(), store.begin() + msg * n_);
    } else {
        single_[{user, cls, msg}] = std::move(symbols);
    }
}

Codebook generate_codebook(const Channel& ch, const RateProfile& rp, const CodebookSpec& spec,
                           uint64_t symbol_budget) {
    Codebook cb(ch, rp, spec);
    for (size_t u = 0; u < rp.num_users(); ++u)
        for (size_t c = 0; c < rp.user(u).size(); ++c) cb.materialize_class(u, c, symbol_budget);
    return cb;
}

namespace {

// Complement-side assignment table used by the threshold computation.
struct SbarTable {
    std::vector<uint32_t> users;              // users outside the subset
    std::vector<size_t> offsets;              // joint offsets of their assignments
    std::vector<std::vector<uint8_t>> syms;   // aligned symbols
};

SbarTable sbar_assignments(const Channel& ch, SubsetMask s_mask) {
    SbarTable t;
    for (uint32_t u = 0; u < ch.num_users(); ++u)
        if (!in_subset(s_mask, u)) t.users.push_back(u);
    std::vector<uint8_t> cur(t.users.size(), 0);
    while (true) {
        size_t off = 0;
        for (size_t i = 0; i < t.users.size(); ++i) off += ch.stride(t.users[i]) * cur[i];
        t.offsets.push_back(off);
        t.syms.push_back(cur);
        size_t i = t.users.size();
        bool done = true;
        while (i-- > 0) {
            if (++cur[i] < ch.input_size(t.users[i])) { done = false; break; }
            cur[i] = 0;
        }
        if (done || t.users.empty()) break;
    }
    return t;
}

// Shared threshold formula: for the fixed subset-part codewords v and the
// received y,
//   A_j = sum_{x_Sc} prod dists(x) P(y_j | v_j, x_Sc)^{s2/rho_tilde}
//   B_j = sum_{x_Sc} prod out(x)  P(y_j | v_j, x_Sc)
//   tau = offset - [ (logB* + (rho_tilde - 1) logA)/N + rho_tilde * rate_sum ]
//         / (s1 + s2)
// with B* maximized over the out-of-region choices per received sequence.
double threshold_core(const Channel& ch, std::span<const uint8_t> y, SubsetMask s_mask,
                      const std::vector<std::vector<uint8_t>>& s_codewords, double rate_sum,
                      const std::vector<InputDistribution>& r_dists,
                      const std::vector<std::vector<InputDistribution>>& out_choices,
                      const ThresholdParams& tp) {
    if (out_choices.empty()) return kPosInf;
    const auto sb = sbar_assignments(ch, s_mask);
    const uint32_t n = static_cast<uint32_t>(y.size());
    const double pa = tp.s2 / tp.rho_tilde;

    // Subset-part joint offset per symbol position.
    std::vector<size_t> s_off(n, 0);
    for (uint32_t u = 0; u < ch.num_users(); ++u) {
        if (!in_subset(s_mask, u)) continue;
        for (uint32_t j = 0; j < n; ++j) s_off[j] += ch.stride(u) * s_codewords[u][j];
    }

    double log_a = 0.0;
    for (uint32_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (size_t i = 0; i < sb.offsets.size(); ++i) {
            double w = 1.0;
            for (size_t t = 0; t < sb.users.size(); ++t) w *= r_dists[sb.users[t]][sb.syms[i][t]];
            if (w == 0.0) continue;
            const double p = ch.prob(s_off[j] + sb.offsets[i], y[j]);
            if (p > 0.0) acc += w * std::pow(p, pa);
        }
        log_a += acc > 0.0 ? std::log(acc) : kNegInf;
    }

    double log_b_star = kNegInf;
    for (const auto& out : out_choices) {
        double log_b = 0.0;
        for (uint32_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (size_t i = 0; i < sb.offsets.size(); ++i) {
                double w = 1.0;
                for (size_t t = 0; t < sb.users.size(); ++t) w *= out[sb.users[t]][sb.syms[i][t]];
                acc += w * ch.prob(s_off[j] + sb.offsets[i], y[j]);
            }
            log_b += acc > 0.0 ? std::log(acc) : kNegInf;
            if (log_b == kNegInf) break;
        }
        if (log_b > log_b_star) log_b_star = log_b;
    }
    if (log_b_star == kNegInf) return kPosInf;  // no out-of-region ensemble can produce y

    const double a_part = tp.rho_tilde == 1.0 ? 0.0 : (tp.rho_tilde - 1.0) * log_a;
    const double inner = (log_b_star + a_part) / n + tp.rho_tilde * rate_sum;
    return tp.offset - inner / (tp.s1 + tp.s2);
}

std::vector<uint64_t> condition_messages(const SimCondition& cond, size_t users) {
    if (cond.messages.empty()) return std::vector<uint64_t>(users, 0);
    if (cond.messages.size() != users)
        throw std::invalid_argument("condition needs one message per user");
    return cond.messages;
}

}  // namespace

double compute_threshold(const Channel& ch, std::span<const uint8_t> y, double rate,
                         const InputDistribution& rate_dist,
                         const std::vector<InputDistribution>& out_dists,
                         const ThresholdParams& tp) {
    if (ch.num_users() != 1) throw std::invalid_argument("compute_threshold expects one user");
    std::vector<std::vector<InputDistribution>> choices;
    choices.reserve(out_dists.size());
    for (const auto& d : out_dists) choices.push_back({d});
    return threshold_core(ch, y, 0, {}, rate, {rate_dist}, choices, tp);
}

double compute_threshold_multi(const Channel& ch, std::span<const uint8_t> y, SubsetMask s_mask,
                               const std::vector<std::vector<uint8_t>>& s_codewords,
                               double rate_sum,
                               const std::vector<InputDistribution>& r_dists,
                               const std::vector<std::vector<InputDistribution>>& out_choices,
                               const ThresholdParams& tp) {
    if (s_mask >= full_mask(ch.num_users()))
        throw std::invalid_argument("subset must be a proper subset");
    return threshold_core(ch, y, s_mask, s_codewords, rate_sum, r_dists, out_choices, tp);
}

namespace {

struct MlWinner {
    bool unique = false;
    double log_lik = kNegInf;
    RateIndexVector classes;
    std::vector<uint64_t> messages;
};

// Strict maximum-likelihood scan over all in-region candidates; exact
// log-likelihood ties (including all -inf) leave `unique` false.
MlWinner ml_scan(const Channel& ch, std::span<const uint8_t> y, Codebook& cb,
                 const OperationRegion& region) {
    const size_t k = cb.num_users();
    MlWinner win;
    uint32_t at_best = 0;
    std::vector<std::span<const uint8_t>> cw(k);
    for (const auto& v : region.members()) {
        std::vector<uint64_t> msg(k, 0);
        std::vector<uint64_t> counts(k);
        for (size_t u = 0; u < k; ++u) counts[u] = cb.class_size(u, v[u]);
        while (true) {
            for (size_t u = 0; u < k; ++u) cw[u] = cb.codeword(u, v[u], msg[u]);
            double ll = 0.0;
            for (size_t j = 0; j < y.size(); ++j) {
                size_t off = 0;
                for (size_t u = 0; u < k; ++u) off += ch.stride(u) * cw[u][j];
                ll += ch.log_prob(off, y[j]);
                if (ll == kNegInf) break;
            }
            if (ll > win.log_lik) {
                win.log_lik = ll;
                win.classes = v;
                win.messages = msg;
                at_best = 1;
            } else if (ll == win.log_lik) {
                ++at_best;
            }
            size_t u = k;
            bool done = true;
            while (u-- > 0) {
                if (++msg[u] < counts[u]) { done = false; break; }
                msg[u] = 0;
            }
            if (done) break;
        }
    }
    win.unique = at_best == 1 && win.log_lik != kNegInf;
    return win;
}

}  // namespace

DecodeOutcome decode_single(const Channel& ch, std::span<const uint8_t> y, Codebook& cb,
                            const RateProfile& rp, const OperationRegion& region,
                            const ThresholdParams& tp) {
    if (ch.num_users() != 1) throw std::invalid_argument("decode_single expects one user");
    validate_region(rp, region);
    const auto win = ml_scan(ch, y, cb, region);
    if (!win.unique) return {};

    std::vector<InputDistribution> out_dists;
    for (const auto& v : out_of_region_vectors(rp, region))
        out_dists.push_back(rp.point(0, v[0]).dist);
    const auto& pt = rp.point(0, win.classes[0]);
    const double tau = compute_threshold(ch, y, pt.rate, pt.dist, out_dists, tp);
    const double norm_ll = -win.log_lik / static_cast<double>(y.size());
    if (!(norm_ll < tau)) return {};
    return {false, win.classes, win.messages};
}

DecodeOutcome decode_multi(const Channel& ch, std::span<const uint8_t> y, Codebook& cb,
                           const RateProfile& rp, const OperationRegion& region,
                           const std::vector<ThresholdParams>& tp_by_subset) {
    const uint32_t k = ch.num_users();
    validate_region(rp, region);
    const auto out_vecs = out_of_region_vectors(rp, region);
    const SubsetMask full = full_mask(k);
    if (!out_vecs.empty() && tp_by_subset.size() != full)
        throw std::invalid_argument("need threshold parameters for every proper subset");

    const auto win = ml_scan(ch, y, cb, region);
    if (!win.unique) return {};

    std::vector<std::vector<uint8_t>> s_cw(k);
    for (uint32_t u = 0; u < k; ++u) {
        const auto span = cb.codeword(u, win.classes[u], win.messages[u]);
        s_cw[u].assign(span.begin(), span.end());
    }
    std::vector<InputDistribution> r_dists;
    for (uint32_t u = 0; u < k; ++u) r_dists.push_back(rp.point(u, win.classes[u]).dist);

    const double norm_ll = -win.log_lik / static_cast<double>(y.size());
    for (SubsetMask s = 0; s < full; ++s) {
        std::vector<std::vector<InputDistribution>> choices;
        for (const auto& co : out_vecs) {
            bool ok = true;
            for (uint32_t u = 0; u < k; ++u)
                if (in_subset(s, u) && co[u] != win.classes[u]) { ok = false; break; }
            if (!ok) continue;
            std::vector<InputDistribution> d;
            for (uint32_t u = 0; u < k; ++u) d.push_back(rp.point(u, co[u]).dist);
            choices.push_back(std::move(d));
        }
        if (choices.empty()) continue;
        double rate_sum = 0.0;
        for (uint32_t u = 0; u < k; ++u)
            if (!in_subset(s, u)) rate_sum += rp.point(u, win.classes[u]).rate;
        const double tau = threshold_core(ch, y, s, s_cw, rate_sum, r_dists, choices,
                                          tp_by_subset[s]);
        if (!(norm_ll < tau)) return {};
    }
    return {false, win.classes, win.messages};
}

double SimOutcome::wilson_radius_95() const {
    if (trials == 0) return 0.0;
    const double z = 1.959963984540054;
    const double nn = static_cast<double>(trials);
    const double p = freq();
    const double denom = 1.0 + z * z / nn;
    return z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
}

namespace {

constexpr uint64_t kNoiseStream = 0x6e6f697365ULL;  // noise substream tag

uint64_t run_block(const Channel& ch, const RateProfile& rp, const OperationRegion& region,
                   const std::vector<ThresholdParams>& tps, uint32_t n,
                   const RateIndexVector& cond_idx, const std::vector<uint64_t>& msgs,
                   bool in_region, uint64_t lo, uint64_t hi, uint64_t base_seed,
                   uint64_t symbol_budget) {
    const size_t k = rp.num_users();
    const bool single = k == 1;
    const bool have_out = !out_of_region_vectors(rp, region).empty();
    // Placeholder used only when no threshold test can trigger.
    const ThresholdParams dummy(0.5, 0.25, 0.0);
    const ThresholdParams& tp0 = tps.empty() ? dummy : tps[0];
    if (single && have_out && tps.empty())
        throw std::invalid_argument("threshold parameters required when out rates exist");

    // Classes the decoder iterates; materialized once per trial codebook.
    std::vector<std::pair<size_t, size_t>> region_classes;
    for (const auto& v : region.members())
        for (size_t u = 0; u < k; ++u) region_classes.emplace_back(u, v[u]);
    std::sort(region_classes.begin(), region_classes.end());
    region_classes.erase(std::unique(region_classes.begin(), region_classes.end()),
                         region_classes.end());

    uint64_t errors = 0;
    std::vector<uint8_t> y(n);
    std::vector<std::span<const uint8_t>> tx(k);
    for (uint64_t t = lo; t < hi; ++t) {
        const uint64_t trial_seed = mix_seed(base_seed, t);
        Codebook cb(ch, rp, {n, trial_seed});
        for (auto [u, c] : region_classes) cb.materialize_class(u, c, symbol_budget);
        for (size_t u = 0; u < k; ++u) tx[u] = cb.codeword(u, cond_idx[u], msgs[u]);

        Rng noise(mix_seed(trial_seed, kNoiseStream));
        for (uint32_t j = 0; j < n; ++j) {
            size_t off = 0;
            for (size_t u = 0; u < k; ++u) off += ch.stride(u) * tx[u][j];
            y[j] = sample_discrete(noise, ch.row(off));
        }

        const DecodeOutcome out = single ? decode_single(ch, y, cb, rp, region, tp0)
                                         : decode_multi(ch, y, cb, rp, region, tps);
        if (in_region) {
            if (!out.decoded(cond_idx, msgs)) ++errors;
        } else {
            if (!out.collision) ++errors;
        }
    }
    return errors;
}

}  // namespace

SimOutcome run_trials(const Channel& ch, const RateProfile& rp, const OperationRegion& region,
                      const std::vector<ThresholdParams>& tp_by_subset, uint32_t n,
                      const SimCondition& condition, uint64_t trials, uint64_t base_seed,
                      int threads, uint64_t symbol_budget) {
    if (trials == 0) throw std::invalid_argument("need at least one trial");
    validate_region(rp, region);
    const size_t k = rp.num_users();
    if (condition.rate_indices.size() != k)
        throw std::invalid_argument("condition needs one rate index per user");
    for (size_t u = 0; u < k; ++u)
        if (condition.rate_indices[u] >= rp.user(u).size())
            throw std::invalid_argument("condition rate index out of range");
    const auto msgs = condition_messages(condition, k);
    {
        Codebook probe(ch, rp, {n, base_seed});
        for (size_t u = 0; u < k; ++u)
            if (!(static_cast<double>(msgs[u]) < probe.class_size_real(u, condition.rate_indices[u])))
                throw std::invalid_argument("condition message index exceeds the class size");
    }

    SimOutcome out;
    out.condition = condition;
    out.condition.messages = msgs;
    out.in_region = region.contains(condition.rate_indices);
    out.trials = trials;

    const int nthreads = std::max(1, threads);
    if (nthreads == 1) {
        out.errors = run_block(ch, rp, region, tp_by_subset, n, condition.rate_indices, msgs,
                               out.in_region, 0, trials, base_seed, symbol_budget);
        return out;
    }
    std::vector<uint64_t> partial(nthreads, 0);
    std::vector<std::exception_ptr> errs(nthreads);
    std::vector<std::thread> pool;
    const uint64_t chunk = (trials + nthreads - 1) / nthreads;
    for (int i = 0; i < nthreads; ++i) {
        const uint64_t lo = std::min<uint64_t>(trials, chunk * i);
        const uint64_t hi = std::min<uint64_t>(trials, chunk * (i + 1));
        pool.emplace_back([&, i, lo, hi] {
            try {
                partial[i] = run_block(ch, rp, region, tp_by_subset, n, condition.rate_indices,
                                       msgs, out.in_region, lo, hi, base_seed, symbol_budget);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    for (uint64_t p : partial) out.errors += p;
    return out;
}

double exact_ensemble_error(const Channel& ch, const RateProfile& rp,
                            const OperationRegion& region,
                            const std::vector<ThresholdParams>& tp_by_subset, uint32_t n,
                            const SimCondition& condition, double max_enumeration) {
    validate_region(rp, region);
    const size_t k = rp.num_users();
    if (condition.rate_indices.size() != k)
        throw std::invalid_argument("condition needs one rate index per user");
    for (size_t u = 0; u < k; ++u)
        if (condition.rate_indices[u] >= rp.user(u).size())
            throw std::invalid_argument("condition rate index out of range");
    const auto msgs = condition_messages(condition, k);
    const bool in_region = region.contains(condition.rate_indices);
    const bool single = k == 1;
    const ThresholdParams dummy(0.5, 0.25, 0.0);
    const ThresholdParams& tp0 = tp_by_subset.empty() ? dummy : tp_by_subset[0];
    if (single && !out_of_region_vectors(rp, region).empty() && tp_by_subset.empty())
        throw std::invalid_argument("threshold parameters required when out rates exist");

    Codebook cb(ch, rp, {n, 0});

    // Participating codewords: every codeword of every in-region class plus
    // the transmitted one.
    struct Entry { size_t user, cls; uint64_t msg; };
    std::vector<Entry> entries;
    std::vector<std::pair<size_t, size_t>> region_classes;
    for (const auto& v : region.members())
        for (size_t u = 0; u < k; ++u) region_classes.emplace_back(u, v[u]);
    std::sort(region_classes.begin(), region_classes.end());
    region_classes.erase(std::unique(region_classes.begin(), region_classes.end()),
                         region_classes.end());
    for (auto [u, c] : region_classes)
        for (uint64_t m = 0; m < cb.class_size(u, c); ++m) entries.push_back({u, c, m});
    for (size_t u = 0; u < k; ++u) {
        if (!(static_cast<double>(msgs[u]) < cb.class_size_real(u, condition.rate_indices[u])))
            throw std::invalid_argument("condition message index exceeds the class size");
        const bool covered = std::binary_search(region_classes.begin(), region_classes.end(),
                                                std::pair<size_t, size_t>{u, condition.rate_indices[u]});
        if (!covered) entries.push_back({u, condition.rate_indices[u], msgs[u]});
    }

    double states = 1.0;
    for (const auto& e : entries)
        states *= std::pow(static_cast<double>(ch.input_size(e.user)), static_cast<double>(n));
    const double outputs = std::pow(static_cast<double>(ch.output_size()), static_cast<double>(n));
    if (states * outputs > max_enumeration)
        throw BudgetError("exact enumeration exceeds the configured budget");

    // Odometer over all participating codeword symbols.
    std::vector<std::vector<uint8_t>> sym(entries.size(), std::vector<uint8_t>(n, 0));
    std::vector<uint8_t> y(n);
    std::vector<std::span<const uint8_t>> tx(k);
    double total = 0.0;
    while (true) {
        double weight = 1.0;
        for (size_t e = 0; e < entries.size(); ++e) {
            const auto& dist = rp.point(entries[e].user, entries[e].cls).dist;
            for (uint32_t j = 0; j < n; ++j) weight *= dist[sym[e][j]];
        }
        if (weight > 0.0) {
            for (size_t e = 0; e < entries.size(); ++e)
                cb.set_codeword(entries[e].user, entries[e].cls, entries[e].msg, sym[e]);
            for (size_t u = 0; u < k; ++u) tx[u] = cb.codeword(u, condition.rate_indices[u], msgs[u]);

            std::fill(y.begin(), y.end(), 0);
            while (true) {
                double p = 1.0;
                for (uint32_t j = 0; j < n && p > 0.0; ++j) {
                    size_t off = 0;
                    for (size_t u = 0; u < k; ++u) off += ch.stride(u) * tx[u][j];
                    p *= ch.prob(off, y[j]);
                }
                if (p > 0.0) {
                    const DecodeOutcome out = single
                                                  ? decode_single(ch, y, cb, rp, region, tp0)
                                                  : decode_multi(ch, y, cb, rp, region, tp_by_subset);
                    const bool err = in_region ? !out.decoded(condition.rate_indices, msgs)
                                               : !out.collision;
                    if (err) total += weight * p;
                }
                size_t j = n;
                bool done = true;
                while (j-- > 0) {
                    if (++y[j] < ch.output_size()) { done = false; break; }
                    y[j] = 0;
                }
                if (done) break;
            }
        }
        // Advance the codeword odometer.
        size_t e = entries.size();
        bool done = true;
        while (e-- > 0) {
            size_t j = n;
            while (j-- > 0) {
                if (++sym[e][j] < ch.input_size(entries[e].user)) { done = false; break; }
                sym[e][j] = 0;
            }
            if (!done) break;
        }
        if (done) break;
    }
    return total;
}

}  // namespace raxcode
