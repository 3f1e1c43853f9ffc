// Command-line front end: parses a JSON experiment config and emits
// machine-readable tables (CSV or JSON) for the region, exponent, bound,
// simulation and sweep commands.
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "raxcode/bounds.hpp"
#include "raxcode/channel.hpp"
#include "raxcode/exponents.hpp"
#include "raxcode/simulator.hpp"

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
using namespace raxcode;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Output table: one value representation feeding both encodings.

using Cell = std::variant<double, int64_t, uint64_t, bool, std::string>;
using Row = std::vector<std::pair<std::string, Cell>>;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cell_to_csv(const Cell& c) {
    if (std::holds_alternative<double>(c)) {
        const double v = std::get<double>(c);
        return std::isnan(v) ? "" : fmt17(v);
    }
    if (std::holds_alternative<int64_t>(c)) return std::to_string(std::get<int64_t>(c));
    if (std::holds_alternative<uint64_t>(c)) return std::to_string(std::get<uint64_t>(c));
    if (std::holds_alternative<bool>(c)) return std::get<bool>(c) ? "true" : "false";
    return std::get<std::string>(c);
}

std::string render_csv(const std::vector<Row>& rows) {
    std::string out;
    if (rows.empty()) return out;
    for (size_t i = 0; i < rows[0].size(); ++i) {
        if (i) out += ',';
        out += rows[0][i].first;
    }
    out += '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += cell_to_csv(row[i].second);
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const std::vector<Row>& rows) {
    ojson arr = ojson::array();
    for (const auto& row : rows) {
        ojson obj = ojson::object();
        for (const auto& [key, cell] : row) {
            if (std::holds_alternative<double>(cell)) {
                const double v = std::get<double>(cell);
                if (std::isnan(v)) obj[key] = nullptr;
                else obj[key] = v;
            } else if (std::holds_alternative<int64_t>(cell)) {
                obj[key] = std::get<int64_t>(cell);
            } else if (std::holds_alternative<uint64_t>(cell)) {
                obj[key] = std::get<uint64_t>(cell);
            } else if (std::holds_alternative<bool>(cell)) {
                obj[key] = std::get<bool>(cell);
            } else {
                obj[key] = std::get<std::string>(cell);
            }
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

// Output lands in one atomic rename when a path is given.
void emit(const std::vector<Row>& rows, const std::string& format, const std::string& out_path) {
    const std::string text = format == "json" ? render_json(rows) : render_csv(rows);
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    const std::filesystem::path target(out_path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write output file '" + out_path + "'");
        f.write(text.data(), static_cast<std::streamsize>(text.size()));
    }
    std::filesystem::rename(tmp, target);
}

// ---------------------------------------------------------------------------
// Experiment configuration.

struct SimulationSettings {
    std::vector<uint32_t> n_list;
    uint64_t trials = 10000;
    uint64_t seed = 0;
    double threshold_offset = 0.0;
    bool exact_oracle = false;
    double max_enumeration = 1e7;
    std::vector<SimCondition> conditions;  // empty: every rate vector
};

struct SweepSettings {
    std::vector<double> rates;
    std::vector<uint32_t> n_list;
    std::vector<double> out_rates;
    std::vector<double> dist;
};

struct ExperimentConfig {
    std::optional<Channel> channel;
    std::optional<RateProfile> profile;
    std::optional<OperationRegion> region;
    std::optional<StandardGrid> standard_grid;
    std::optional<OperationRegion> cell_region;
    OptimizerConfig optimizer;
    std::vector<uint32_t> bound_n_list;
    SimulationSettings sim;
    SweepSettings sweep;
    std::string format = "csv";
};

const json& need(const json& j, const char* key, const char* ctx) {
    auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(std::string("config: missing '") + key + "' in " + ctx);
    return *it;
}

InputDistribution parse_dist(const json& j, const char* ctx) {
    if (!j.is_array()) throw ConfigError(std::string("config: '") + ctx + "' must be an array");
    std::vector<double> p;
    for (const auto& v : j) p.push_back(v.get<double>());
    try {
        return InputDistribution(p);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + ctx + ": " + e.what());
    }
}

RateProfile parse_profile(const json& j) {
    if (!j.is_array() || j.empty())
        throw ConfigError("config: 'profile' must be a nonempty array of users");
    std::vector<std::vector<RatePoint>> users;
    for (const auto& user : j) {
        std::vector<RatePoint> pts;
        for (const auto& pt : need(user, "points", "profile user")) {
            pts.push_back({need(pt, "rate", "rate point").get<double>(),
                           parse_dist(need(pt, "dist", "rate point"), "rate point dist")});
        }
        users.push_back(std::move(pts));
    }
    try {
        return RateProfile(std::move(users));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: profile: ") + e.what());
    }
}

OperationRegion parse_region(const json& j) {
    if (!j.is_array() || j.empty())
        throw ConfigError("config: 'region' must be a nonempty array of index vectors");
    std::set<RateIndexVector> members;
    for (const auto& vec : j) {
        RateIndexVector v;
        for (const auto& idx : vec) v.push_back(idx.get<uint32_t>());
        members.insert(std::move(v));
    }
    return OperationRegion(std::move(members));
}

StandardGrid parse_grid(const json& j) {
    StandardGrid g;
    for (const auto& user : need(j, "users", "standard_grid")) {
        std::vector<double> edges;
        for (const auto& e : need(user, "edges", "grid user")) edges.push_back(e.get<double>());
        std::vector<std::vector<RatePoint>> cells;
        for (const auto& cell : need(user, "cells", "grid user")) {
            std::vector<RatePoint> reps;
            for (const auto& pt : cell)
                reps.push_back({need(pt, "rate", "grid rep").get<double>(),
                                parse_dist(need(pt, "dist", "grid rep"), "grid rep dist")});
            cells.push_back(std::move(reps));
        }
        g.edges.push_back(std::move(edges));
        g.reps.push_back(std::move(cells));
    }
    return g;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open '" + path + "'");
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    if (j.contains("channel")) {
        const std::string ch_path = j["channel"].get<std::string>();
        try {
            cfg.channel = load_channel_file(ch_path);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }
    if (j.contains("profile")) cfg.profile = parse_profile(j["profile"]);
    if (j.contains("region")) cfg.region = parse_region(j["region"]);
    if (j.contains("standard_grid")) {
        cfg.standard_grid = parse_grid(j["standard_grid"]);
        cfg.cell_region = parse_region(need(j["standard_grid"], "region", "standard_grid"));
    }
    if (j.contains("optimizer")) {
        const auto& o = j["optimizer"];
        if (o.contains("grid_rho")) cfg.optimizer.grid_points_rho = o["grid_rho"].get<int>();
        if (o.contains("grid_s")) cfg.optimizer.grid_points_s = o["grid_s"].get<int>();
        if (o.contains("refine_iters")) cfg.optimizer.refine_iters = o["refine_iters"].get<int>();
        if (o.contains("epsilon")) cfg.optimizer.epsilon = o["epsilon"].get<double>();
    }
    if (j.contains("bound"))
        for (const auto& n : need(j["bound"], "n_list", "bound"))
            cfg.bound_n_list.push_back(n.get<uint32_t>());
    if (j.contains("simulation")) {
        const auto& s = j["simulation"];
        for (const auto& n : need(s, "n_list", "simulation"))
            cfg.sim.n_list.push_back(n.get<uint32_t>());
        if (s.contains("trials")) cfg.sim.trials = s["trials"].get<uint64_t>();
        if (s.contains("seed")) cfg.sim.seed = s["seed"].get<uint64_t>();
        if (s.contains("threshold_offset"))
            cfg.sim.threshold_offset = s["threshold_offset"].get<double>();
        if (s.contains("exact_oracle")) cfg.sim.exact_oracle = s["exact_oracle"].get<bool>();
        if (s.contains("max_enumeration"))
            cfg.sim.max_enumeration = s["max_enumeration"].get<double>();
        if (s.contains("conditions")) {
            for (const auto& c : s["conditions"]) {
                SimCondition cond;
                for (const auto& idx : need(c, "rates", "condition"))
                    cond.rate_indices.push_back(idx.get<uint32_t>());
                if (c.contains("messages"))
                    for (const auto& m : c["messages"])
                        cond.messages.push_back(m.get<uint64_t>());
                cfg.sim.conditions.push_back(std::move(cond));
            }
        }
    }
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        for (const auto& r : need(s, "rates", "sweep")) cfg.sweep.rates.push_back(r.get<double>());
        for (const auto& n : need(s, "n_list", "sweep"))
            cfg.sweep.n_list.push_back(n.get<uint32_t>());
        for (const auto& r : need(s, "out_rates", "sweep"))
            cfg.sweep.out_rates.push_back(r.get<double>());
        for (const auto& v : need(s, "dist", "sweep")) cfg.sweep.dist.push_back(v.get<double>());
    }
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (cfg.format != "csv" && cfg.format != "json")
        throw ConfigError("config: format must be 'csv' or 'json'");
    return cfg;
}

const Channel& need_channel(const ExperimentConfig& c) {
    if (!c.channel) throw ConfigError("config: 'channel' is required for this command");
    return *c.channel;
}

const RateProfile& need_profile(const ExperimentConfig& c) {
    if (!c.profile) throw ConfigError("config: 'profile' is required for this command");
    return *c.profile;
}

const OperationRegion& need_region(const ExperimentConfig& c) {
    if (!c.region) throw ConfigError("config: 'region' is required for this command");
    return *c.region;
}

// ---------------------------------------------------------------------------
// Formatting helpers.

std::string fmt_indices(const RateIndexVector& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(v[i]);
    }
    return s;
}

std::string fmt_messages(const std::vector<uint64_t>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(v[i]);
    }
    return s;
}

std::string fmt_rates(const RateProfile& rp, const RateIndexVector& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += fmt17(rp.point(i, v[i]).rate);
    }
    return s;
}

// Subsets print 1-based as {1+2}; the empty subset prints {}.
std::string fmt_subset(SubsetMask m) {
    std::string s = "{";
    bool first = true;
    for (uint32_t u = 0; u < 32; ++u) {
        if (!in_subset(m, u)) continue;
        if (!first) s += '+';
        s += std::to_string(u + 1);
        first = false;
    }
    return s + "}";
}

void validate_profile_channel(const Channel& ch, const RateProfile& rp) {
    if (ch.num_users() != rp.num_users())
        throw ConfigError("config: channel and profile user counts differ");
    for (size_t u = 0; u < rp.num_users(); ++u)
        for (const auto& pt : rp.user(u))
            if (pt.dist.size() != ch.input_size(u))
                throw ConfigError("config: profile distribution size does not match alphabet");
}

// ---------------------------------------------------------------------------
// Commands.

std::vector<Row> cmd_region(const ExperimentConfig& cfg) {
    const Channel& ch = need_channel(cfg);
    const RateProfile& rp = need_profile(cfg);
    const OperationRegion& region = need_region(cfg);
    validate_profile_channel(ch, rp);
    validate_region(rp, region);

    std::vector<Row> rows;
    for (const auto& v : all_rate_vectors(rp)) {
        const auto violations = rate_vector_violations(ch, rp, v);
        std::string subsets;
        for (size_t i = 0; i < violations.size(); ++i) {
            if (i) subsets += ';';
            subsets += fmt_subset(violations[i]);
        }
        rows.push_back(Row{{"rates", fmt_rates(rp, v)},
                           {"indices", fmt_indices(v)},
                           {"in_region", region.contains(v)},
                           {"achievable", violations.empty()},
                           {"violated_subsets", subsets}});
    }
    return rows;
}

std::vector<Row> cmd_exponent(const ExperimentConfig& cfg) {
    const Channel& ch = need_channel(cfg);
    const RateProfile& rp = need_profile(cfg);
    const OperationRegion& region = need_region(cfg);
    validate_profile_channel(ch, rp);
    validate_region(rp, region);

    const auto out_vecs = out_of_region_vectors(rp, region);
    auto rates_of = [&](const RateIndexVector& v) {
        std::vector<double> r(v.size());
        for (size_t k = 0; k < v.size(); ++k) r[k] = rp.point(k, v[k]).rate;
        return r;
    };
    auto dists_of = [&](const RateIndexVector& v) {
        std::vector<InputDistribution> d;
        for (size_t k = 0; k < v.size(); ++k) d.push_back(rp.point(k, v[k]).dist);
        return d;
    };
    auto agree = [](SubsetMask s, const RateIndexVector& a, const RateIndexVector& b) {
        for (size_t k = 0; k < a.size(); ++k)
            if (in_subset(s, static_cast<uint32_t>(k)) && a[k] != b[k]) return false;
        return true;
    };

    std::vector<Row> rows;
    auto push = [&](const char* kind, SubsetMask s, const RateIndexVector& sent,
                    const RateIndexVector& comp, const ExponentResult& e) {
        rows.push_back(Row{{"kind", std::string(kind)},
                           {"subset", fmt_subset(s)},
                           {"sent", fmt_indices(sent)},
                           {"competitor", fmt_indices(comp)},
                           {"value", e.value},
                           {"rho_star", e.rho_star},
                           {"s_star", e.s_star}});
    };

    for (SubsetMask s = 0; s < full_mask(ch.num_users()); ++s) {
        for (const auto& sent : region.members()) {
            for (const auto& comp : region.members()) {
                if (!agree(s, sent, comp)) continue;
                push("Em", s, sent, comp,
                     em_multi(ch, s, dists_of(sent), rates_of(comp), dists_of(comp),
                              cfg.optimizer));
            }
            for (const auto& comp : out_vecs) {
                if (!agree(s, sent, comp)) continue;
                push("Ei", s, sent, comp,
                     ei_multi(ch, s, rates_of(sent), dists_of(sent), dists_of(comp),
                              cfg.optimizer));
            }
        }
    }
    const auto es = es_lower_multi(ch, rp, region, cfg.optimizer);
    rows.push_back(Row{{"kind", std::string("EsLower")},
                       {"subset", fmt_subset(es.witness.subset)},
                       {"sent", fmt_indices(es.witness.sent)},
                       {"competitor", fmt_indices(es.witness.competitor)},
                       {"value", es.value},
                       {"rho_star", es.witness.exponent.rho_star},
                       {"s_star", es.witness.exponent.s_star}});
    return rows;
}

Row bound_row(const BoundResult& b) {
    return Row{{"n", static_cast<uint64_t>(b.n)},
               {"log_p_es_upper", b.log_p_es_upper},
               {"p_es_upper", b.p_es_upper},
               {"trivial", b.trivial},
               {"dominant_branch",
                std::string(b.dominant == BoundBranch::DecodeSide ? "decode" : "collision")}};
}

std::vector<Row> cmd_bound(const ExperimentConfig& cfg) {
    const Channel& ch = need_channel(cfg);
    if (cfg.bound_n_list.empty()) throw ConfigError("config: bound.n_list must be nonempty");

    std::vector<Row> rows;
    if (cfg.standard_grid) {
        for (uint32_t n : cfg.bound_n_list)
            rows.push_back(bound_row(
                pes_bound_standard(n, ch, *cfg.standard_grid, *cfg.cell_region, cfg.optimizer)));
        return rows;
    }
    const RateProfile& rp = need_profile(cfg);
    const OperationRegion& region = need_region(cfg);
    validate_profile_channel(ch, rp);
    for (uint32_t n : cfg.bound_n_list)
        rows.push_back(bound_row(pes_bound_multi(n, ch, rp, region, cfg.optimizer)));
    return rows;
}

// Threshold parameters for the decoder come from the bound's own optimizing
// certificate: per subset, the binding (largest) decode-side threshold term.
std::vector<ThresholdParams> thresholds_from_bound(const BoundResult& b, uint32_t num_users,
                                                   double offset) {
    const SubsetMask full = full_mask(num_users);
    std::vector<ThresholdParams> tps;
    for (SubsetMask s = 0; s < full; ++s) {
        const BoundTerm* best = nullptr;
        for (const auto& t : b.breakdown) {
            if (t.branch != BoundBranch::DecodeSide || t.subset != s) continue;
            if (t.kind != ExponentKind::Ei && t.kind != ExponentKind::EiTilde) continue;
            if (!best || t.log_value > best->log_value) best = &t;
        }
        if (!best) return {};  // no out-of-region rates anywhere
        tps.emplace_back(best->rho_star, best->s_star, offset);
    }
    return tps;
}

std::vector<Row> cmd_simulate(const ExperimentConfig& cfg, uint64_t seed, int threads) {
    const Channel& ch = need_channel(cfg);
    const RateProfile& rp = need_profile(cfg);
    const OperationRegion& region = need_region(cfg);
    validate_profile_channel(ch, rp);
    validate_region(rp, region);
    if (cfg.sim.n_list.empty()) throw ConfigError("config: simulation.n_list must be nonempty");

    std::vector<SimCondition> conditions = cfg.sim.conditions;
    if (conditions.empty())
        for (const auto& v : all_rate_vectors(rp)) conditions.push_back({v, {}});
    for (const auto& c : conditions) {
        if (c.rate_indices.size() != rp.num_users())
            throw ConfigError("config: condition index count does not match users");
        for (size_t u = 0; u < c.rate_indices.size(); ++u)
            if (c.rate_indices[u] >= rp.user(u).size())
                throw ConfigError("config: condition rate index out of range");
    }

    std::vector<Row> rows;
    for (uint32_t n : cfg.sim.n_list) {
        const BoundResult bound = pes_bound_multi(n, ch, rp, region, cfg.optimizer);
        const auto tps =
            thresholds_from_bound(bound, ch.num_users(), cfg.sim.threshold_offset);
        const size_t block_start = rows.size();
        double empirical_p_es = 0.0;
        for (const auto& cond : conditions) {
            const SimOutcome out = run_trials(ch, rp, region, tps, n, cond, cfg.sim.trials,
                                              seed, threads);
            const double radius = out.wilson_radius_95();
            const bool pass = out.freq() <= bound.p_es_upper + 3.0 * radius;
            double exact = std::numeric_limits<double>::quiet_NaN();
            if (cfg.sim.exact_oracle)
                exact = exact_ensemble_error(ch, rp, region, tps, n, cond,
                                             cfg.sim.max_enumeration);
            empirical_p_es = std::max(empirical_p_es, out.freq());
            rows.push_back(Row{{"n", static_cast<uint64_t>(n)},
                               {"condition", fmt_indices(cond.rate_indices)},
                               {"messages", fmt_messages(out.condition.messages)},
                               {"in_region", out.in_region},
                               {"trials", out.trials},
                               {"errors", out.errors},
                               {"freq", out.freq()},
                               {"wilson_radius_95", radius},
                               {"empirical_p_es", 0.0},  // filled once the block is complete
                               {"bound_log_p", bound.log_p_es_upper},
                               {"bound_p", bound.p_es_upper},
                               {"pass", pass},
                               {"exact_prob", exact}});
        }
        // The system-level estimate is the worst condition of this length.
        for (size_t i = block_start; i < rows.size(); ++i)
            for (auto& [key, cell] : rows[i])
                if (key == "empirical_p_es") cell = empirical_p_es;
    }
    return rows;
}

std::vector<Row> cmd_sweep(const ExperimentConfig& cfg) {
    const Channel& ch = need_channel(cfg);
    if (ch.num_users() != 1) throw ConfigError("config: sweep supports single-user channels");
    if (cfg.sweep.rates.empty() || cfg.sweep.n_list.empty() || cfg.sweep.out_rates.empty())
        throw ConfigError("config: sweep needs rates, n_list and out_rates");
    const InputDistribution dist = [&] {
        try {
            return InputDistribution(cfg.sweep.dist);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: sweep dist: ") + e.what());
        }
    }();

    std::vector<Row> rows;
    for (double rate : cfg.sweep.rates) {
        std::vector<RatePoint> pts{{rate, dist}};
        for (double out : cfg.sweep.out_rates) {
            if (out <= rate) throw ConfigError("config: sweep out_rates must exceed each rate");
            pts.push_back({out, dist});
        }
        const RateProfile rp({pts});
        const OperationRegion region(std::set<RateIndexVector>{{0}});
        const auto es = es_lower_single(ch, rp, region, cfg.optimizer);
        for (uint32_t n : cfg.sweep.n_list) {
            const auto b = pes_bound_single(n, ch, rp, region, cfg.optimizer);
            rows.push_back(Row{{"n", static_cast<uint64_t>(n)},
                               {"rate", rate},
                               {"es_lower", es.value},
                               {"log_p_es_upper", b.log_p_es_upper},
                               {"p_es_upper", b.p_es_upper},
                               {"trivial", b.trivial}});
        }
    }
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random-access channel coding bounds and simulation"};
    app.require_subcommand(1);

    std::string config_path, out_path, format_override;
    std::optional<uint64_t> seed_override;
    int threads = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", out_path, "output path (default: stdout)");
        sub->add_option("--format", format_override, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", seed_override, "simulation seed override");
        sub->add_option("--threads", threads, "simulation worker threads")
            ->check(CLI::PositiveNumber);
        return sub;
    };

    auto* region_cmd = add_common(app.add_subcommand("region", "achievability per rate vector"));
    auto* exponent_cmd = add_common(app.add_subcommand("exponent", "exponent table"));
    auto* bound_cmd = add_common(app.add_subcommand("bound", "error probability bounds"));
    auto* simulate_cmd = add_common(app.add_subcommand("simulate", "Monte Carlo validation"));
    auto* sweep_cmd = add_common(app.add_subcommand("sweep", "rate/length sweep dataset"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        ExperimentConfig cfg = load_config(config_path);
        if (!format_override.empty()) cfg.format = format_override;
        const uint64_t seed = seed_override.value_or(cfg.sim.seed);

        std::vector<Row> rows;
        if (region_cmd->parsed()) rows = cmd_region(cfg);
        else if (exponent_cmd->parsed()) rows = cmd_exponent(cfg);
        else if (bound_cmd->parsed()) rows = cmd_bound(cfg);
        else if (simulate_cmd->parsed()) rows = cmd_simulate(cfg, seed, threads);
        else if (sweep_cmd->parsed()) rows = cmd_sweep(cfg);
        emit(rows, cfg.format, out_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
