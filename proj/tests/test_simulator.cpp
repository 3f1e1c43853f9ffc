#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "raxcode/bounds.hpp"
#include "raxcode/simulator.hpp"

using namespace raxcode;

namespace {

InputDistribution uniform2() { return InputDistribution({0.5, 0.5}); }

OperationRegion region_of(std::set<RateIndexVector> v) { return OperationRegion(std::move(v)); }

// Rate 0.75 keeps floor(e^{n r}) at exactly 2 codewords for n = 1 without
// sitting on a floating-point boundary.
const double kTwoWordRate = 0.75;

}  // namespace

TEST_CASE("threshold parameters: inverse variable change round-trips") {
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        const double rho = 1e-6 + (1.0 - 2e-6) * rng.next_unit();
        const double s = (1.0 - rho) * (1e-6 + (1.0 - 2e-6) * rng.next_unit());
        if (s <= 0.0) continue;
        const ThresholdParams tp(rho, s);
        const double den = tp.rho_tilde - (1.0 - tp.rho_tilde) * tp.s2;
        CHECK(tp.rho_tilde * (tp.rho_tilde - tp.s2) / den == doctest::Approx(rho).epsilon(1e-12));
        CHECK(1.0 - (tp.rho_tilde - tp.s2) / den == doctest::Approx(s).epsilon(1e-12));
        CHECK(tp.s2 > 0.0);
        CHECK(tp.s2 < tp.rho_tilde);
        CHECK(tp.s1 > 0.0);
        CHECK(tp.s1 < 1.0);
    }
    CHECK_THROWS_AS(ThresholdParams(1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(ThresholdParams(0.5, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(ThresholdParams(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("codebook: deterministic for a fixed seed") {
    const Channel ch = oracle::bsc(0.1);
    const RateProfile rp({{{0.3, uniform2()}, {0.8, uniform2()}}});
    Codebook a = generate_codebook(ch, rp, {16, 12345});
    Codebook b = generate_codebook(ch, rp, {16, 12345});
    Codebook lazy(ch, rp, {16, 12345});
    for (size_t cls = 0; cls < 2; ++cls)
        for (uint64_t m = 0; m < a.class_size(0, cls); ++m) {
            const auto wa = a.codeword(0, cls, m);
            const auto wb = b.codeword(0, cls, m);
            const auto wl = lazy.codeword(0, cls, m);
            CHECK(std::equal(wa.begin(), wa.end(), wb.begin()));
            CHECK(std::equal(wa.begin(), wa.end(), wl.begin()));
        }
    Codebook c = generate_codebook(ch, rp, {16, 54321});
    bool any_diff = false;
    for (uint64_t m = 0; m < a.class_size(0, 1) && !any_diff; ++m) {
        const auto wa = a.codeword(0, 1, m);
        const auto wc = c.codeword(0, 1, m);
        any_diff = !std::equal(wa.begin(), wa.end(), wc.begin());
    }
    CHECK(any_diff);
}

TEST_CASE("codebook: point-mass distribution gives constant codewords") {
    const Channel ch = oracle::bsc(0.1);
    const RateProfile rp({{{0.5, InputDistribution({0.0, 1.0})}}});
    Codebook cb = generate_codebook(ch, rp, {8, 7});
    for (uint64_t m = 0; m < cb.class_size(0, 0); ++m)
        for (uint8_t sym : cb.codeword(0, 0, m)) CHECK(sym == 1);
}

TEST_CASE("codebook: empirical symbol frequency concentrates") {
    const Channel ch = oracle::bsc(0.1);
    const RateProfile rp({{{0.0, uniform2()}}});  // one codeword
    Codebook cb = generate_codebook(ch, rp, {10000, 2222});
    const auto cw = cb.codeword(0, 0, 0);
    uint32_t ones = 0;
    for (uint8_t s : cw) ones += s;
    // 3 sigma of Binomial(10^4, 1/2)
    CHECK(std::fabs(static_cast<double>(ones) - 5000.0) <= 150.0);
}

TEST_CASE("codebook: symbol budget is enforced") {
    const Channel ch = oracle::bsc(0.1);
    const RateProfile rp({{{0.5, uniform2()}}});
    CHECK_THROWS_AS(generate_codebook(ch, rp, {1000, 1}, 100), BudgetError);
}

TEST_CASE("compute_threshold: constant over outputs on a symmetric useless channel") {
    const Channel ch = oracle::bsc(0.5);
    const ThresholdParams tp(0.4, 0.3);
    const std::vector<InputDistribution> outs{uniform2()};
    const std::vector<uint8_t> y1{0, 0, 0, 0};
    const std::vector<uint8_t> y2{1, 0, 1, 1};
    const double t1 = compute_threshold(ch, y1, 0.2, uniform2(), outs, tp);
    const double t2 = compute_threshold(ch, y2, 0.2, uniform2(), outs, tp);
    CHECK(t1 == doctest::Approx(t2).epsilon(1e-12));
}

TEST_CASE("compute_threshold: matches the closed-form transcription") {
    const oracle::Matrix p{{0.9, 0.1}, {0.3, 0.7}};
    const Channel ch = oracle::make_channel(p);
    const ThresholdParams tp(0.4, 0.3, 0.05);
    const std::vector<uint8_t> y{0, 1, 1, 0, 1};
    const std::vector<double> sent{0.5, 0.5};
    const std::vector<std::vector<double>> outs{{0.25, 0.75}, {0.9, 0.1}};
    const double expect =
        oracle::threshold_ref(p, y, 0.2, sent, outs, tp.rho_tilde, tp.s1, tp.s2, tp.offset);
    const double got = compute_threshold(
        ch, y, 0.2, uniform2(),
        {InputDistribution({0.25, 0.75}), InputDistribution({0.9, 0.1})}, tp);
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("compute_threshold: offset is purely additive") {
    const Channel ch = oracle::bsc(0.1);
    const std::vector<uint8_t> y{0, 1, 0};
    const std::vector<InputDistribution> outs{uniform2()};
    const double base = compute_threshold(ch, y, 0.2, uniform2(), outs, {0.4, 0.3, 0.0});
    const double shifted = compute_threshold(ch, y, 0.2, uniform2(), outs, {0.4, 0.3, 0.25});
    CHECK(shifted == doctest::Approx(base + 0.25).epsilon(1e-12));
}

TEST_CASE("compute_threshold: no out-of-region rates disables the test") {
    const Channel ch = oracle::bsc(0.1);
    const std::vector<uint8_t> y{0, 1};
    CHECK(compute_threshold(ch, y, 0.2, uniform2(), {}, {0.4, 0.3}) == kPosInf);
}

TEST_CASE("decode_single: exact match decodes, duplicates collide") {
    const Channel ch = oracle::identity2();
    const RateProfile rp({{{0.45, uniform2()}}});  // two codewords at n = 2
    const OperationRegion region = region_of({{0}});
    const ThresholdParams tp(0.5, 0.25, 0.0);

    Codebook cb(ch, rp, {2, 0});
    cb.set_codeword(0, 0, 0, {0, 1});
    cb.set_codeword(0, 0, 1, {1, 1});
    const std::vector<uint8_t> y{0, 1};
    const auto out = decode_single(ch, y, cb, rp, region, tp);
    CHECK(out.decoded({0}, {0}));

    // Identical codewords tie under strict dominance.
    cb.set_codeword(0, 0, 1, {0, 1});
    const auto tie = decode_single(ch, y, cb, rp, region, tp);
    CHECK(tie.collision);

    // A received word no codeword can produce collides as well.
    cb.set_codeword(0, 0, 0, {0, 0});
    cb.set_codeword(0, 0, 1, {0, 0});
    const std::vector<uint8_t> y2{1, 1};
    CHECK(decode_single(ch, y2, cb, rp, region, tp).collision);
}

TEST_CASE("decode_multi: bit-for-bit identical to decode_single at K=1") {
    const Channel ch = oracle::bsc(0.2);
    const RateProfile rp({{{0.3, uniform2()}, {0.8, uniform2()}}});
    const OperationRegion region = region_of({{0}});
    const std::vector<ThresholdParams> tps{{0.4, 0.3, 0.0}};
    Rng rng(31337);
    int decoded = 0;
    for (int t = 0; t < 1000; ++t) {
        Codebook cb1(ch, rp, {6, rng.next_u64()});
        Codebook cb2 = cb1;
        std::vector<uint8_t> y(6);
        for (auto& v : y) v = static_cast<uint8_t>(rng.next_u64() & 1);
        const auto a = decode_single(ch, y, cb1, rp, region, tps[0]);
        const auto b = decode_multi(ch, y, cb2, rp, region, tps);
        CHECK(a.collision == b.collision);
        if (!a.collision) {
            CHECK(a.classes == b.classes);
            CHECK(a.messages == b.messages);
            ++decoded;
        }
    }
    CHECK(decoded > 0);  // the comparison actually exercised decodes
}

TEST_CASE("decode_multi: xor channel with distinct codewords decodes both users") {
    const Channel ch = oracle::xor2();
    // floor(e^{2 * 0.45}) = 2 codewords per class at n = 2
    const RateProfile rp({{{0.45, uniform2()}}, {{0.45, uniform2()}}});
    const OperationRegion region = region_of({{0, 0}});
    Codebook cb(ch, rp, {2, 0});
    // The four candidate pairs produce pairwise distinct xor sums
    // (00, 10, 11, 01), so the transmitted pair is the unique explanation.
    cb.set_codeword(0, 0, 0, {0, 0});
    cb.set_codeword(0, 0, 1, {1, 1});
    cb.set_codeword(1, 0, 0, {0, 0});
    cb.set_codeword(1, 0, 1, {1, 0});
    // Transmit (w0=1, w1=0): y = (1,1) xor (0,0) = (1,1).
    const std::vector<uint8_t> y{1, 1};
    const auto out = decode_multi(ch, y, cb, rp, region, {});
    CHECK(out.decoded({0, 0}, {1, 0}));
}

TEST_CASE("decode_multi: swapped duplicate codebooks collide") {
    const Channel ch = oracle::xor2();
    const RateProfile rp({{{0.45, uniform2()}}, {{0.45, uniform2()}}});
    const OperationRegion region = region_of({{0, 0}});
    Codebook cb(ch, rp, {2, 0});
    // Both users share the same pair of codewords; swapping users yields the
    // same xor, so the maximum-likelihood candidate cannot be unique.
    cb.set_codeword(0, 0, 0, {0, 0});
    cb.set_codeword(0, 0, 1, {1, 0});
    cb.set_codeword(1, 0, 0, {0, 0});
    cb.set_codeword(1, 0, 1, {1, 0});
    const std::vector<uint8_t> y{1, 0};
    CHECK(decode_multi(ch, y, cb, rp, region, {}).collision);
}

TEST_CASE("run_trials: noiseless point-mass classes never err") {
    const Channel ch = oracle::identity2();
    const RateProfile rp({{{0.0, InputDistribution({1.0, 0.0})}}});
    const auto out = run_trials(ch, rp, region_of({{0}}), {}, 4, {{0}, {0}}, 500, 11);
    CHECK(out.errors == 0);
    CHECK(out.in_region);
}

TEST_CASE("run_trials: deterministic in the seed and across thread counts") {
    const Channel ch = oracle::bsc(0.2);
    const RateProfile rp({{{0.3, uniform2()}, {0.8, uniform2()}}});
    const OperationRegion region = region_of({{0}});
    const std::vector<ThresholdParams> tps{{0.4, 0.3, 0.0}};
    const SimCondition cond{{0}, {0}};
    const auto a = run_trials(ch, rp, region, tps, 8, cond, 2000, 424242, 1);
    const auto b = run_trials(ch, rp, region, tps, 8, cond, 2000, 424242, 1);
    const auto c = run_trials(ch, rp, region, tps, 8, cond, 2000, 424242, 4);
    CHECK(a.errors == b.errors);
    CHECK(a.errors == c.errors);
    const auto d = run_trials(ch, rp, region, tps, 8, cond, 2000, 5, 1);
    CHECK(a.trials == d.trials);
}

TEST_CASE("exact oracle: deterministic tiny cases") {
    const Channel ch = oracle::identity2();
    SUBCASE("single message at rate zero cannot err") {
        const RateProfile rp({{{0.0, uniform2()}}});
        CHECK(exact_ensemble_error(ch, rp, region_of({{0}}), {}, 1, {{0}, {0}}) == 0.0);
    }
    SUBCASE("two uniform codewords collide half the time") {
        const RateProfile rp({{{kTwoWordRate, uniform2()}}});
        const double p = exact_ensemble_error(ch, rp, region_of({{0}}), {}, 1, {{0}, {0}});
        CHECK(p == 0.5);
    }
}

TEST_CASE("exact oracle: threshold offset drives miss detection to either extreme") {
    const Channel ch = oracle::bsc(0.5);
    const RateProfile rp({{{0.0, uniform2()}, {kTwoWordRate, uniform2()}}});
    const OperationRegion region = region_of({{0}});
    const SimCondition cond{{1}, {0}};  // transmit out of region
    const double hi = exact_ensemble_error(ch, rp, region, {{0.4, 0.3, 50.0}}, 1, cond);
    const double lo = exact_ensemble_error(ch, rp, region, {{0.4, 0.3, -50.0}}, 1, cond);
    CHECK(hi == 1.0);  // threshold never rejects: the lone candidate always decodes
    CHECK(lo == 0.0);  // threshold rejects everything: collision is always declared
}

TEST_CASE("exact oracle: miss detection frequency is monotone in the offset") {
    const Channel ch = oracle::bsc(0.3);
    const RateProfile rp({{{kTwoWordRate, uniform2()}, {1.2, uniform2()}}});
    const OperationRegion region = region_of({{0}});
    const SimCondition cond{{1}, {0}};
    double prev = -1.0;
    for (double off : {-1.0, -0.3, 0.0, 0.3, 1.0}) {
        const double p = exact_ensemble_error(ch, rp, region, {{0.4, 0.3, off}}, 2, cond);
        CHECK(p >= prev - 1e-12);
        prev = p;
    }
}

TEST_CASE("exact oracle: in-region decode errors are monotone nonincreasing in the offset") {
    const Channel ch = oracle::bsc(0.3);
    const RateProfile rp({{{kTwoWordRate, uniform2()}, {1.2, uniform2()}}});
    const OperationRegion region = region_of({{0}});
    const SimCondition cond{{0}, {0}};
    double prev = 2.0;
    for (double off : {-1.0, 0.0, 1.0}) {
        const double p = exact_ensemble_error(ch, rp, region, {{0.4, 0.3, off}}, 2, cond);
        CHECK(p <= prev + 1e-12);
        prev = p;
    }
}

TEST_CASE("exact oracle: enumeration budget is enforced") {
    const Channel ch = oracle::bsc(0.1);
    const RateProfile rp({{{1.0, uniform2()}}});
    CHECK_THROWS_AS(exact_ensemble_error(ch, rp, region_of({{0}}), {{0.4, 0.3}}, 12, {{0}, {0}}),
                    BudgetError);
}

TEST_CASE("run_trials matches the exact oracle within three Wilson radii") {
    const Channel ch = oracle::bsc(0.2);
    const RateProfile rp({{{kTwoWordRate, uniform2()}, {1.2, uniform2()}}});
    const OperationRegion region = region_of({{0}});
    const std::vector<ThresholdParams> tps{{0.4, 0.3, 0.0}};

    for (const auto& cond : {SimCondition{{0}, {0}}, SimCondition{{1}, {0}}}) {
        const double exact = exact_ensemble_error(ch, rp, region, tps, 2, cond);
        const auto sim = run_trials(ch, rp, region, tps, 2, cond, 20000, 777);
        CHECK(std::fabs(sim.freq() - exact) <= 3.0 * sim.wilson_radius_95());
    }
}

TEST_CASE("ensemble symmetry: the transmitted message does not matter") {
    const Channel ch = oracle::bsc(0.2);
    const RateProfile rp({{{1.0, uniform2()}, {1.5, uniform2()}}});
    const OperationRegion region = region_of({{0}});
    const std::vector<ThresholdParams> tps{{0.4, 0.3, 0.0}};
    const auto a = run_trials(ch, rp, region, tps, 3, {{0}, {0}}, 20000, 99);
    const auto b = run_trials(ch, rp, region, tps, 3, {{0}, {1}}, 20000, 98);
    CHECK(std::fabs(a.freq() - b.freq()) <=
          3.0 * (a.wilson_radius_95() + b.wilson_radius_95()));
}

TEST_CASE("two-user bound validity: empirical frequencies stay under the bound") {
    const Channel ch = oracle::xor2();
    const auto u = uniform2();
    const RateProfile rp({{{0.2, u}, {0.9, u}}, {{0.2, u}, {0.9, u}}});
    const OperationRegion region = region_of({{0, 0}});
    const uint32_t n = 6;
    const auto bound = pes_bound_multi(n, ch, rp, region, OptimizerConfig{});

    // Thresholds from the bound's binding decode-side term per subset.
    std::vector<ThresholdParams> tps;
    for (SubsetMask s = 0; s < full_mask(2); ++s) {
        const BoundTerm* best = nullptr;
        for (const auto& t : bound.breakdown) {
            if (t.branch != BoundBranch::DecodeSide || t.subset != s) continue;
            if (t.kind != ExponentKind::Ei && t.kind != ExponentKind::EiTilde) continue;
            if (!best || t.log_value > best->log_value) best = &t;
        }
        REQUIRE(best != nullptr);
        tps.emplace_back(best->rho_star, best->s_star, 0.0);
    }

    for (const auto& cond : all_rate_vectors(rp)) {
        const auto out = run_trials(ch, rp, region, tps, n, {cond, {}}, 3000, 1234 + cond[0]);
        CHECK(out.freq() <= bound.p_es_upper + 3.0 * out.wilson_radius_95());
    }
}

TEST_CASE("wilson radius: frozen spot value and count integrality") {
    SimOutcome o;
    o.trials = 100;
    o.errors = 10;
    CHECK(o.freq() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(o.wilson_radius_95() == doctest::Approx(0.059568262222119).epsilon(1e-12));
    CHECK(o.freq() * o.trials == doctest::Approx(10.0).epsilon(1e-12));
}
