#include "raxcode/exponents.hpp"

#include <algorithm>
#include <cmath>

#include "raxcode/util.hpp"

namespace raxcode {

void OptimizerConfig::validate() const {
    if (grid_points_rho < 8 || grid_points_s < 8)
        throw std::invalid_argument("optimizer grids need at least 8 points");
    if (refine_iters < 0) throw std::invalid_argument("refine_iters must be nonnegative");
    if (!(epsilon > 0.0) || epsilon >= 1e-3)
        throw std::invalid_argument("epsilon must be in (0, 1e-3)");
}

const char* to_string(ExponentKind k) {
    switch (k) {
        case ExponentKind::Em: return "Em";
        case ExponentKind::Ei: return "Ei";
        case ExponentKind::EmTilde: return "EmTilde";
        case ExponentKind::EiTilde: return "EiTilde";
    }
    return "?";
}

namespace {

// Assignments of the users inside (or outside) a subset: the channel joint
// offset of each assignment plus the per-user symbols.
struct Assignments {
    std::vector<size_t> offsets;
    std::vector<std::vector<uint8_t>> symbols;  // aligned with `users`
    std::vector<uint32_t> users;
};

Assignments enumerate_assignments(const Channel& ch, SubsetMask mask, bool inside) {
    Assignments a;
    for (uint32_t u = 0; u < ch.num_users(); ++u)
        if (in_subset(mask, u) == inside) a.users.push_back(u);
    std::vector<uint8_t> cur(a.users.size(), 0);
    while (true) {
        size_t off = 0;
        for (size_t i = 0; i < a.users.size(); ++i) off += ch.stride(a.users[i]) * cur[i];
        a.offsets.push_back(off);
        a.symbols.push_back(cur);
        size_t i = a.users.size();
        bool done = true;
        while (i-- > 0) {
            if (++cur[i] < ch.input_size(a.users[i])) { done = false; break; }
            cur[i] = 0;
        }
        if (done || a.users.empty()) break;
    }
    if (a.users.empty()) {
        a.offsets.assign(1, 0);
        a.symbols.assign(1, {});
    }
    return a;
}

// log prod_k dists[k](x_k) over the listed users, one value per assignment.
std::vector<double> assignment_log_weights(const Assignments& a,
                                           const std::vector<InputDistribution>& dists) {
    std::vector<double> w(a.offsets.size(), 0.0);
    for (size_t j = 0; j < a.offsets.size(); ++j)
        for (size_t i = 0; i < a.users.size(); ++i)
            w[j] += dists[a.users[i]].log_at(a.symbols[j][i]);
    return w;
}

// Objective shared by all four exponent kinds:
//   -rho * rate_sum - log sum_{y, x_S} prefix(x_S)
//       * [min over A-candidates of bracket_A(y, x_S)]^{ca(rho,s)}
//       * [min over B-candidates of bracket_B(y, x_S)]^{cb(rho,s)}
// where bracket_X(y, x_S) = sum_{x_Sc} w_X(x_Sc) P(y|x)^{px(rho,s)}.
// Dominance kind: A = sent bracket (power 1-s, coeff 1), B = competitor
// family (power s/rho, coeff rho). Threshold kind: A = in-region family
// (power s/(s+rho), coeff s+rho), B = out bracket (power 1, coeff 1-s).
struct Objective {
    const Channel* ch;
    bool dominance;  // true: Em-style, false: Ei-style
    double rate_sum;
    Assignments xs, xsb;
    std::vector<double> prefix_logw;
    std::vector<std::vector<double>> a_logw;  // per candidate, per xsb assignment
    std::vector<std::vector<double>> b_logw;

    mutable std::vector<double> scratch;

    double bracket(const std::vector<std::vector<double>>& cands, size_t xs_off, uint32_t y,
                   double power) const {
        double best = kPosInf;
        for (const auto& w : cands) {
            double m = kNegInf;
            scratch.clear();
            for (size_t j = 0; j < xsb.offsets.size(); ++j) {
                if (w[j] == kNegInf) continue;
                const double lp = ch->log_prob(xs_off + xsb.offsets[j], y);
                const double t = w[j] + log_pow(lp, power);
                if (t == kNegInf) continue;
                scratch.push_back(t);
                if (t > m) m = t;
            }
            double v = kNegInf;
            if (m != kNegInf) {
                double acc = 0.0;
                for (double t : scratch) acc += std::exp(t - m);
                v = m + std::log(acc);
            }
            if (v < best) best = v;
        }
        return best;
    }

    double eval(double rho, double s) const {
        double pa, ca, pb, cb;
        if (dominance) {
            pa = 1.0 - s; ca = 1.0;
            pb = s / rho; cb = rho;
        } else {
            pa = s / (s + rho); ca = s + rho;
            pb = 1.0; cb = 1.0 - s;
        }
        double m = kNegInf;
        std::vector<double> terms;
        terms.reserve(xs.offsets.size() * ch->output_size());
        for (uint32_t y = 0; y < ch->output_size(); ++y) {
            for (size_t i = 0; i < xs.offsets.size(); ++i) {
                if (prefix_logw[i] == kNegInf) continue;
                const double la = bracket(a_logw, xs.offsets[i], y, pa);
                if (la == kNegInf) continue;
                const double lb = bracket(b_logw, xs.offsets[i], y, pb);
                if (lb == kNegInf) continue;
                const double t = prefix_logw[i] + ca * la + cb * lb;
                terms.push_back(t);
                if (t > m) m = t;
            }
        }
        if (m == kNegInf) return kPosInf;  // no reachable term: bound decays faster than any exp
        double acc = 0.0;
        for (double t : terms) acc += std::exp(t - m);
        return -rho * rate_sum - (m + std::log(acc));
    }
};

void check_dists(const Channel& ch, const std::vector<InputDistribution>& dists,
                 SubsetMask mask, bool inside_only) {
    if (dists.size() != ch.num_users())
        throw std::invalid_argument("need one distribution entry per user");
    for (uint32_t u = 0; u < ch.num_users(); ++u) {
        if (inside_only && !in_subset(mask, u)) continue;
        if (dists[u].size() != ch.input_size(u))
            throw std::invalid_argument("input distribution size does not match alphabet");
    }
}

void check_subset(const Channel& ch, SubsetMask s_mask) {
    if (s_mask >= full_mask(ch.num_users()))
        throw std::invalid_argument("subset must be a proper subset of the users");
}

double rate_sum_outside(const Channel& ch, SubsetMask s_mask, const std::vector<double>& rates) {
    if (rates.size() != ch.num_users())
        throw std::invalid_argument("need one rate entry per user");
    double sum = 0.0;
    for (uint32_t u = 0; u < ch.num_users(); ++u) {
        if (in_subset(s_mask, u)) continue;
        if (!(rates[u] >= 0.0)) throw std::invalid_argument("rates must be nonnegative");
        sum += rates[u];
    }
    return sum;
}

struct GoldenResult { double x, value; };

// Golden-section maximization on [lo, hi]; endpoints are evaluated too.
template <typename F>
GoldenResult golden_max(F&& f, double lo, double hi, int iters = 60) {
    GoldenResult best{lo, f(lo)};
    if (hi > lo) {
        const double fhi = f(hi);
        if (fhi > best.value) best = {hi, fhi};
        const double inv_phi = 0.6180339887498949;
        double a = lo, b = hi;
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = f(c), fd = f(d);
        if (fc > best.value) best = {c, fc};
        if (fd > best.value) best = {d, fd};
        for (int i = 0; i < iters && d - c > 1e-14; ++i) {
            // Ties shrink toward the lower end, matching the lexicographic
            // tie-break of the grid stage on flat stretches.
            if (fc >= fd) {
                b = d; d = c; fd = fc;
                c = b - inv_phi * (b - a);
                fc = f(c);
                if (fc > best.value) best = {c, fc};
            } else {
                a = c; c = d; fc = fd;
                d = a + inv_phi * (b - a);
                fd = f(d);
                if (fd > best.value) best = {d, fd};
            }
        }
    }
    return best;
}

ExponentResult maximize(const Objective& obj, ExponentKind kind, const OptimizerConfig& cfg) {
    cfg.validate();
    const double eps = cfg.epsilon;
    const bool em = obj.dominance;
    const double rho_hi = em ? 1.0 : 1.0 - eps;
    const auto s_hi = [&](double rho) { return em ? 1.0 : 1.0 - rho; };

    const int nr = cfg.grid_points_rho, ns = cfg.grid_points_s;
    double best = kNegInf, brho = eps, bs = eps;
    for (int i = 0; i < nr; ++i) {
        const double rho = eps + (rho_hi - eps) * static_cast<double>(i) / (nr - 1);
        const double shi = s_hi(rho);
        if (shi < eps) continue;
        for (int j = 0; j < ns; ++j) {
            const double s =
                std::min(shi, eps + (shi - eps) * static_cast<double>(j) / (ns - 1));
            const double v = obj.eval(rho, s);
            if (v > best) { best = v; brho = rho; bs = s; }
        }
    }

    // Alternating full-interval line refinements anchored at the incumbent.
    // Equal values move the incumbent only toward lower coordinates, so flat
    // stretches drift to the lexicographically smallest maximizer. The
    // threshold-side feasible set is a triangle whose optimum frequently sits
    // on the s = 1 - rho edge, which coordinate lines cannot travel, so a
    // third search runs along that edge.
    for (int round = 0; round < cfg.refine_iters; ++round) {
        const double rho_cap = em ? 1.0 : std::min(1.0 - eps, 1.0 - bs);
        if (rho_cap >= eps) {
            auto r = golden_max([&](double x) { return obj.eval(x, bs); }, eps, rho_cap);
            if (r.value > best || (r.value == best && r.x < brho)) {
                best = r.value;
                brho = r.x;
            }
        }
        const double shi = s_hi(brho);
        if (shi >= eps) {
            auto sres = golden_max([&](double x) { return obj.eval(brho, x); }, eps, shi);
            if (sres.value > best || (sres.value == best && sres.x < bs)) {
                best = sres.value;
                bs = sres.x;
            }
        }
        if (!em) {
            auto d = golden_max([&](double t) { return obj.eval(t, 1.0 - t); }, eps, 1.0 - eps);
            if (d.value > best) {
                best = d.value;
                brho = d.x;
                bs = 1.0 - d.x;
            }
        }
    }

    // Keep the certificate inside the feasible set despite rounding at the
    // s = 1 - rho corner.
    if (!em && bs > 1.0 - brho) bs = 1.0 - brho;
    return ExponentResult{obj.eval(brho, bs), brho, bs, kind};
}

Objective build_dominance(const Channel& ch, SubsetMask s_mask,
                          const std::vector<InputDistribution>& sent_dists,
                          const std::vector<double>& competitor_rates,
                          const std::vector<std::vector<InputDistribution>>& family) {
    check_subset(ch, s_mask);
    check_dists(ch, sent_dists, 0, false);
    if (family.empty()) throw std::invalid_argument("competitor family is empty");
    for (const auto& f : family) check_dists(ch, f, ~s_mask, true);

    Objective obj;
    obj.ch = &ch;
    obj.dominance = true;
    obj.rate_sum = rate_sum_outside(ch, s_mask, competitor_rates);
    obj.xs = enumerate_assignments(ch, s_mask, true);
    obj.xsb = enumerate_assignments(ch, s_mask, false);
    obj.prefix_logw = assignment_log_weights(obj.xs, sent_dists);
    obj.a_logw.push_back(assignment_log_weights(obj.xsb, sent_dists));
    for (const auto& f : family) obj.b_logw.push_back(assignment_log_weights(obj.xsb, f));
    return obj;
}

Objective build_threshold(const Channel& ch, SubsetMask s_mask,
                          const std::vector<double>& grid_rates,
                          const std::vector<std::vector<InputDistribution>>& family,
                          const std::vector<InputDistribution>& out_dists) {
    check_subset(ch, s_mask);
    check_dists(ch, out_dists, 0, false);
    if (family.empty()) throw std::invalid_argument("in-region family is empty");
    for (const auto& f : family) check_dists(ch, f, ~s_mask, true);

    Objective obj;
    obj.ch = &ch;
    obj.dominance = false;
    obj.rate_sum = rate_sum_outside(ch, s_mask, grid_rates);
    obj.xs = enumerate_assignments(ch, s_mask, true);
    obj.xsb = enumerate_assignments(ch, s_mask, false);
    obj.prefix_logw = assignment_log_weights(obj.xs, out_dists);
    for (const auto& f : family) obj.a_logw.push_back(assignment_log_weights(obj.xsb, f));
    obj.b_logw.push_back(assignment_log_weights(obj.xsb, out_dists));
    return obj;
}

}  // namespace

ExponentResult em_multi(const Channel& ch, SubsetMask s_mask,
                        const std::vector<InputDistribution>& sent_dists,
                        const std::vector<double>& competitor_rates,
                        const std::vector<InputDistribution>& competitor_dists,
                        const OptimizerConfig& cfg) {
    auto obj = build_dominance(ch, s_mask, sent_dists, competitor_rates, {competitor_dists});
    return maximize(obj, ExponentKind::Em, cfg);
}

ExponentResult ei_multi(const Channel& ch, SubsetMask s_mask,
                        const std::vector<double>& sent_rates,
                        const std::vector<InputDistribution>& sent_dists,
                        const std::vector<InputDistribution>& out_dists,
                        const OptimizerConfig& cfg) {
    // The conditioning prefix is pinned to the sent vector (out-of-region
    // candidates agree with it on the subset), so splice sent entries in for
    // subset users.
    check_dists(ch, sent_dists, 0, false);
    std::vector<InputDistribution> out_full;
    out_full.reserve(ch.num_users());
    for (uint32_t u = 0; u < ch.num_users(); ++u)
        out_full.push_back(in_subset(s_mask, u) ? sent_dists[u] : out_dists[u]);
    auto obj = build_threshold(ch, s_mask, sent_rates, {sent_dists}, out_full);
    return maximize(obj, ExponentKind::Ei, cfg);
}

ExponentResult em_single(const Channel& ch, const InputDistribution& sent_dist,
                         double competitor_rate, const InputDistribution& competitor_dist,
                         const OptimizerConfig& cfg) {
    if (ch.num_users() != 1) throw std::invalid_argument("em_single expects one user");
    return em_multi(ch, 0, {sent_dist}, {competitor_rate}, {competitor_dist}, cfg);
}

ExponentResult ei_single(const Channel& ch, double sent_rate, const InputDistribution& sent_dist,
                         const InputDistribution& out_dist, const OptimizerConfig& cfg) {
    if (ch.num_users() != 1) throw std::invalid_argument("ei_single expects one user");
    return ei_multi(ch, 0, {sent_rate}, {sent_dist}, {out_dist}, cfg);
}

ExponentResult em_tilde(const Channel& ch, SubsetMask s_mask,
                        const std::vector<InputDistribution>& sent_dists,
                        const std::vector<double>& grid_rates,
                        const std::vector<std::vector<InputDistribution>>& family,
                        const OptimizerConfig& cfg) {
    auto obj = build_dominance(ch, s_mask, sent_dists, grid_rates, family);
    return maximize(obj, ExponentKind::EmTilde, cfg);
}

ExponentResult ei_tilde(const Channel& ch, SubsetMask s_mask,
                        const std::vector<double>& grid_rates,
                        const std::vector<std::vector<InputDistribution>>& family,
                        const std::vector<InputDistribution>& out_dists,
                        const OptimizerConfig& cfg) {
    auto obj = build_threshold(ch, s_mask, grid_rates, family, out_dists);
    return maximize(obj, ExponentKind::EiTilde, cfg);
}

namespace {

std::vector<double> rates_of(const RateProfile& rp, const RateIndexVector& v) {
    std::vector<double> r(v.size());
    for (size_t k = 0; k < v.size(); ++k) r[k] = rp.point(k, v[k]).rate;
    return r;
}

std::vector<InputDistribution> dists_of(const RateProfile& rp, const RateIndexVector& v) {
    std::vector<InputDistribution> d;
    d.reserve(v.size());
    for (size_t k = 0; k < v.size(); ++k) d.push_back(rp.point(k, v[k]).dist);
    return d;
}

bool agree_on(SubsetMask s, const RateIndexVector& a, const RateIndexVector& b) {
    for (size_t k = 0; k < a.size(); ++k)
        if (in_subset(s, static_cast<uint32_t>(k)) && a[k] != b[k]) return false;
    return true;
}

}  // namespace

EsLowerResult es_lower_multi(const Channel& ch, const RateProfile& rp,
                             const OperationRegion& region, const OptimizerConfig& cfg) {
    if (ch.num_users() != rp.num_users())
        throw std::invalid_argument("channel and profile user counts differ");
    validate_region(rp, region);
    const auto out_vecs = out_of_region_vectors(rp, region);

    EsLowerResult res;
    res.value = kPosInf;
    bool have = false;
    auto consider = [&](ExponentKind kind, SubsetMask s, const RateIndexVector& sent,
                        const RateIndexVector& comp, const ExponentResult& e) {
        if (!have || e.value < res.value) {
            have = true;
            res.value = e.value;
            res.witness = EsWitness{kind, s, sent, comp, e};
        }
    };

    for (SubsetMask s = 0; s < full_mask(ch.num_users()); ++s) {
        for (const auto& sent : region.members()) {
            const auto sent_dists = dists_of(rp, sent);
            for (const auto& comp : region.members()) {
                if (!agree_on(s, sent, comp)) continue;
                auto e = em_multi(ch, s, sent_dists, rates_of(rp, comp), dists_of(rp, comp), cfg);
                consider(ExponentKind::Em, s, sent, comp, e);
            }
            for (const auto& comp : out_vecs) {
                if (!agree_on(s, sent, comp)) continue;
                auto e = ei_multi(ch, s, rates_of(rp, sent), sent_dists, dists_of(rp, comp), cfg);
                consider(ExponentKind::Ei, s, sent, comp, e);
            }
        }
    }
    return res;
}

EsLowerResult es_lower_single(const Channel& ch, const RateProfile& rp,
                              const OperationRegion& region, const OptimizerConfig& cfg) {
    if (ch.num_users() != 1) throw std::invalid_argument("es_lower_single expects one user");
    return es_lower_multi(ch, rp, region, cfg);
}

}  // namespace raxcode
