#include "raxcode/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "raxcode/util.hpp"

namespace raxcode {

namespace {

std::string fmt_vec(const RateIndexVector& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(v[i]);
    }
    return s;
}

std::string fmt_group(const RateIndexVector& cells, const RateIndexVector& combo) {
    return fmt_vec(cells) + "/" + fmt_vec(combo);
}

std::string fmt_masked(const RateIndexVector& cells, const RateIndexVector& combo,
                       SubsetMask mask) {
    std::string s;
    for (size_t k = 0; k < cells.size(); ++k) {
        if (!in_subset(mask, static_cast<uint32_t>(k))) continue;
        if (!s.empty()) s += ';';
        s += std::to_string(k) + ":" + std::to_string(cells[k]) + ":" + std::to_string(combo[k]);
    }
    return s;
}

// Cross product of representative indices over the users selected by `mask`;
// entries of unselected users stay zero. Empty result when a selected cell
// has no representatives.
std::vector<RateIndexVector> rep_combos(const StandardGrid& grid, const RateIndexVector& cells,
                                        SubsetMask mask, uint32_t num_users) {
    std::vector<uint32_t> users;
    for (uint32_t u = 0; u < num_users; ++u)
        if (in_subset(mask, u)) {
            if (grid.reps[u][cells[u]].empty()) return {};
            users.push_back(u);
        }
    std::vector<RateIndexVector> out;
    RateIndexVector combo(num_users, 0);
    while (true) {
        out.push_back(combo);
        size_t i = users.size();
        bool done = true;
        while (i-- > 0) {
            const uint32_t u = users[i];
            if (++combo[u] < grid.reps[u][cells[u]].size()) { done = false; break; }
            combo[u] = 0;
        }
        if (done || users.empty()) break;
    }
    return out;
}

std::vector<InputDistribution> combo_dists(const StandardGrid& grid, const RateIndexVector& cells,
                                           const RateIndexVector& combo) {
    std::vector<InputDistribution> d;
    d.reserve(cells.size());
    for (size_t k = 0; k < cells.size(); ++k)
        d.push_back(grid.reps[k][cells[k]][combo[k]].dist);
    return d;
}

std::vector<double> edge_rates(const StandardGrid& grid, const RateIndexVector& cells) {
    std::vector<double> r(cells.size());
    for (size_t k = 0; k < cells.size(); ++k) r[k] = grid.edges[k][cells[k]];
    return r;
}

// All candidate distribution vectors of a cell vector restricted to the
// users outside the subset; subset users carry `filler` entries.
std::vector<std::vector<InputDistribution>> cell_family(const StandardGrid& grid,
                                                        const RateIndexVector& cells,
                                                        SubsetMask s_mask, uint32_t num_users,
                                                        const std::vector<InputDistribution>& filler) {
    auto combos = rep_combos(grid, cells, ~s_mask & full_mask(num_users), num_users);
    std::vector<std::vector<InputDistribution>> fam;
    fam.reserve(combos.size());
    for (const auto& combo : combos) {
        std::vector<InputDistribution> d;
        d.reserve(num_users);
        for (uint32_t u = 0; u < num_users; ++u)
            d.push_back(in_subset(s_mask, u) ? filler[u] : grid.reps[u][cells[u]][combo[u]].dist);
        fam.push_back(std::move(d));
    }
    return fam;
}

bool agree_on(SubsetMask s, const RateIndexVector& a, const RateIndexVector& b) {
    for (size_t k = 0; k < a.size(); ++k)
        if (in_subset(s, static_cast<uint32_t>(k)) && a[k] != b[k]) return false;
    return true;
}

std::vector<RateIndexVector> cell_product(const StandardGrid& grid) {
    std::vector<RateIndexVector> out;
    RateIndexVector v(grid.num_users(), 0);
    while (true) {
        out.push_back(v);
        size_t k = grid.num_users();
        while (k-- > 0) {
            if (++v[k] < grid.edges[k].size()) break;
            v[k] = 0;
            if (k == 0) return out;
        }
    }
}

struct TermData {
    SubsetMask subset;
    ExponentKind kind;
    std::string competitor;
    double exponent;
    double rho_star, s_star;
};

struct Group {
    BoundBranch branch;
    std::string name;
    std::vector<TermData> terms;
};

struct Assembly {
    std::vector<Group> groups;

    BoundResult at(uint64_t n) const;
};

BoundResult Assembly::at(uint64_t n) const {
    BoundResult res;
    res.n = n;
    for (const auto& g : groups) {
        for (const auto& t : g.terms) {
            BoundTerm bt;
            bt.branch = g.branch;
            bt.subset = t.subset;
            bt.kind = t.kind;
            bt.group = g.name;
            bt.competitor = t.competitor;
            bt.log_value = t.exponent == kPosInf ? kNegInf
                                                 : -static_cast<double>(n) * t.exponent;
            bt.rho_star = t.rho_star;
            bt.s_star = t.s_star;
            res.breakdown.push_back(std::move(bt));
        }
    }
    res.log_p_es_upper = recombine_breakdown(res.breakdown);

    // Dominant branch for reporting.
    double decode = kNegInf, collision = kNegInf;
    std::map<std::pair<int, std::string>, std::vector<double>> by_group;
    for (const auto& t : res.breakdown)
        by_group[{static_cast<int>(t.branch), t.group}].push_back(t.log_value);
    for (auto& [key, vals] : by_group) {
        const double v = log_sum_exp(vals);
        if (key.first == static_cast<int>(BoundBranch::DecodeSide)) decode = std::max(decode, v);
        else collision = std::max(collision, v);
    }
    res.dominant = collision > decode ? BoundBranch::CollisionSide : BoundBranch::DecodeSide;
    res.p_es_upper = std::exp(res.log_p_es_upper);
    res.trivial = res.log_p_es_upper >= 0.0;
    return res;
}

Assembly assemble(const Channel& ch, const StandardGrid& grid, const OperationRegion& region,
                  const OptimizerConfig& cfg) {
    grid.validate(ch);
    const uint32_t k = ch.num_users();
    if (grid.num_users() != k)
        throw std::invalid_argument("grid and channel user counts differ");
    for (const auto& v : region.members()) {
        if (v.size() != k) throw std::invalid_argument("region vector length mismatch");
        for (size_t u = 0; u < v.size(); ++u) {
            if (v[u] >= grid.edges[u].size())
                throw std::invalid_argument("region cell index out of range");
            if (grid.reps[u][v[u]].empty())
                throw std::invalid_argument("in-region cell has an empty representative set");
        }
    }

    std::vector<RateIndexVector> in_cells(region.members().begin(), region.members().end());
    std::vector<RateIndexVector> out_cells;
    for (auto& c : cell_product(grid))
        if (!region.contains(c)) out_cells.push_back(std::move(c));

    const SubsetMask full = full_mask(k);
    std::map<std::string, ExponentResult> cache;

    auto em_term = [&](SubsetMask s, const RateIndexVector& sent_cells,
                       const RateIndexVector& sent_combo, const RateIndexVector& comp_cells) {
        const std::string key = "m|" + std::to_string(s) + "|" +
                                fmt_group(sent_cells, sent_combo) + "|" + fmt_vec(comp_cells);
        auto it = cache.find(key);
        if (it == cache.end()) {
            const auto sent = combo_dists(grid, sent_cells, sent_combo);
            const auto fam = cell_family(grid, comp_cells, s, k, sent);
            auto res = em_tilde(ch, s, sent, edge_rates(grid, comp_cells), fam, cfg);
            it = cache.emplace(key, res).first;
        }
        return it->second;
    };

    // prefix_*: source of the subset users' distributions (the transmitted
    // vector; out-of-region candidates agree with it on the subset).
    auto ei_term = [&](SubsetMask s, const RateIndexVector& fam_cells,
                       const RateIndexVector& prefix_cells, const RateIndexVector& prefix_combo,
                       const RateIndexVector& out_cells_v, const RateIndexVector& out_combo) {
        const std::string key = "i|" + std::to_string(s) + "|" + fmt_vec(fam_cells) + "|p=" +
                                fmt_masked(prefix_cells, prefix_combo, s) + "|o=" +
                                fmt_masked(out_cells_v, out_combo, ~s & full);
        auto it = cache.find(key);
        if (it == cache.end()) {
            std::vector<InputDistribution> out_full;
            out_full.reserve(k);
            for (uint32_t u = 0; u < k; ++u)
                out_full.push_back(in_subset(s, u)
                                       ? grid.reps[u][prefix_cells[u]][prefix_combo[u]].dist
                                       : grid.reps[u][out_cells_v[u]][out_combo[u]].dist);
            const auto fam = cell_family(grid, fam_cells, s, k, out_full);
            auto res = ei_tilde(ch, s, edge_rates(grid, fam_cells), fam, out_full, cfg);
            it = cache.emplace(key, res).first;
        }
        return it->second;
    };

    Assembly asm_;

    // Decode side: one group per transmitted in-region representative.
    for (const auto& c : in_cells) {
        for (const auto& combo : rep_combos(grid, c, full, k)) {
            Group g;
            g.branch = BoundBranch::DecodeSide;
            g.name = fmt_group(c, combo);
            for (SubsetMask s = 0; s < full; ++s) {
                for (const auto& ct : in_cells) {
                    if (!agree_on(s, ct, c)) continue;
                    auto e = em_term(s, c, combo, ct);
                    g.terms.push_back({s, e.kind, fmt_vec(ct) + "/*", e.value, e.rho_star,
                                       e.s_star});
                }
                // Worst out-of-region candidate agreeing on the subset.
                bool have = false;
                TermData best{};
                for (const auto& co : out_cells) {
                    if (!agree_on(s, co, c)) continue;
                    for (const auto& oc : rep_combos(grid, co, ~s & full, k)) {
                        auto e = ei_term(s, c, c, combo, co, oc);
                        if (!have || e.value < best.exponent) {
                            have = true;
                            best = {s, e.kind, fmt_group(co, oc), e.value, e.rho_star, e.s_star};
                        }
                    }
                }
                if (have) g.terms.push_back(best);
            }
            asm_.groups.push_back(std::move(g));
        }
    }

    // Collision side: one group per transmitted out-of-region representative.
    for (const auto& ct : out_cells) {
        for (const auto& combo : rep_combos(grid, ct, full, k)) {
            Group g;
            g.branch = BoundBranch::CollisionSide;
            g.name = fmt_group(ct, combo);
            for (SubsetMask s = 0; s < full; ++s) {
                for (const auto& c : in_cells) {
                    if (!agree_on(s, c, ct)) continue;
                    bool have = false;
                    TermData best{};
                    for (const auto& co : out_cells) {
                        if (!agree_on(s, co, ct)) continue;
                        for (const auto& oc : rep_combos(grid, co, ~s & full, k)) {
                            auto e = ei_term(s, c, ct, combo, co, oc);
                            if (!have || e.value < best.exponent) {
                                have = true;
                                best = {s, e.kind, fmt_vec(c) + "<" + fmt_group(co, oc),
                                        e.value, e.rho_star, e.s_star};
                            }
                        }
                    }
                    if (have) g.terms.push_back(best);
                }
            }
            asm_.groups.push_back(std::move(g));
        }
    }
    return asm_;
}

}  // namespace

std::string BoundTerm::describe() const {
    std::string s = branch == BoundBranch::DecodeSide ? "decode" : "collision";
    s += "|S=" + std::to_string(subset);
    s += "|";
    s += to_string(kind);
    s += "|sent=" + group + "|vs=" + competitor;
    return s;
}

double recombine_breakdown(const std::vector<BoundTerm>& breakdown) {
    std::map<std::pair<int, std::string>, std::vector<double>> by_group;
    for (const auto& t : breakdown)
        by_group[{static_cast<int>(t.branch), t.group}].push_back(t.log_value);
    double bound = kNegInf;
    for (auto& [key, vals] : by_group) bound = std::max(bound, log_sum_exp(vals));
    return bound;
}

void StandardGrid::validate(const Channel& ch) const {
    if (edges.empty() || edges.size() != reps.size())
        throw std::invalid_argument("grid needs matching edges and representative tables");
    for (size_t u = 0; u < edges.size(); ++u) {
        if (edges[u].empty()) throw std::invalid_argument("grid user has no cells");
        if (reps[u].size() != edges[u].size())
            throw std::invalid_argument("representative table shape mismatch");
        for (size_t i = 0; i < edges[u].size(); ++i) {
            if (!(edges[u][i] >= 0.0)) throw std::invalid_argument("grid rates must be >= 0");
            if (i > 0 && edges[u][i] < edges[u][i - 1])
                throw std::invalid_argument("grid rates must be nondecreasing");
            for (const auto& rp : reps[u][i]) {
                if (rp.dist.size() != ch.input_size(u))
                    throw std::invalid_argument("representative distribution size mismatch");
                if (!(rp.rate <= edges[u][i]) || (i > 0 && !(rp.rate > edges[u][i - 1])))
                    throw std::invalid_argument("representative rate outside its cell");
            }
        }
    }
}

StandardGrid singleton_grid(const RateProfile& rp) {
    StandardGrid g;
    g.edges.resize(rp.num_users());
    g.reps.resize(rp.num_users());
    for (size_t u = 0; u < rp.num_users(); ++u) {
        for (const auto& pt : rp.user(u)) {
            g.edges[u].push_back(pt.rate);
            g.reps[u].push_back({pt});
        }
    }
    return g;
}

BoundResult pes_bound_standard(uint64_t n, const Channel& ch, const StandardGrid& grid,
                               const OperationRegion& cell_region, const OptimizerConfig& cfg) {
    if (n == 0) throw std::invalid_argument("codeword length must be positive");
    return assemble(ch, grid, cell_region, cfg).at(n);
}

BoundResult pes_bound_multi(uint64_t n, const Channel& ch, const RateProfile& rp,
                            const OperationRegion& region, const OptimizerConfig& cfg) {
    if (ch.num_users() != rp.num_users())
        throw std::invalid_argument("channel and profile user counts differ");
    validate_region(rp, region);
    return pes_bound_standard(n, ch, singleton_grid(rp), region, cfg);
}

BoundResult pes_bound_single(uint64_t n, const Channel& ch, const RateProfile& rp,
                             const OperationRegion& region, const OptimizerConfig& cfg) {
    if (ch.num_users() != 1) throw std::invalid_argument("pes_bound_single expects one user");
    return pes_bound_multi(n, ch, rp, region, cfg);
}

}  // namespace raxcode
