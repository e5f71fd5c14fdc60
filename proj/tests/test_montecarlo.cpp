// Unit tests for the Monte Carlo layer: the xoshiro256++ generator and its
// distributions, channel sampling, the direct and decomposed SINR samplers,
// deterministic sharded execution, and the empirical-CDF/KS helpers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <vector>

#include "mfsinr/montecarlo.hpp"
#include "mfsinr/special.hpp"

using mfsinr::SystemConfig;
namespace mc = mfsinr::mc;

namespace {

SystemConfig config(int L, int K, double p_t, double sigma2 = 1.0) {
    SystemConfig cfg;
    cfg.L = L;
    cfg.K = K;
    cfg.p_t = p_t;
    cfg.sigma2 = sigma2;
    return cfg;
}

}  // namespace

TEST_CASE("generator is deterministic per seed and distinct across seeds") {
    mc::Xoshiro256pp a(123), b(123), c(124);
    bool all_equal = true, any_equal_c = false;
    for (int i = 0; i < 32; ++i) {
        const auto va = a.next();
        all_equal = all_equal && (va == b.next());
        any_equal_c = any_equal_c || (va == c.next());
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_c);

    // long_jump moves to a far-separated substream.
    mc::Xoshiro256pp d(123);
    d.long_jump();
    mc::Xoshiro256pp e(123);
    bool diverged = false;
    for (int i = 0; i < 8; ++i) diverged = diverged || (d.next() != e.next());
    CHECK(diverged);
}

TEST_CASE("uniform01 stays in (0, 1] with the right mean") {
    mc::Xoshiro256pp rng(5);
    double sum = 0.0;
    bool in_range = true;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        in_range = in_range && (u > 0.0) && (u <= 1.0);
        sum += u;
    }
    CHECK(in_range);
    CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("normal sampler has standard moments") {
    mc::Xoshiro256pp rng(11);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        s += x;
        s2 += x * x;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("gamma sampler passes a KS test against the exact CDF") {
    const std::uint64_t n = 100000;
    for (int alpha : {1, 3}) {
        mc::Xoshiro256pp rng(17 + alpha);
        std::vector<double> xs(n);
        for (auto& x : xs) x = rng.gamma_shape(alpha);
        const double d = mc::ks_statistic(
            xs, [alpha](double x) { return mfsinr::regularized_lower_gamma_int(alpha, x); });
        CHECK(d < mc::ks_critical_value(n, 0.001));
    }
}

TEST_CASE("channel matrices have the declared shape and unit-variance entries") {
    const SystemConfig cfg = config(4, 3, 10.0);
    mc::Xoshiro256pp rng(23);
    double sum_re = 0.0, sum_abs2 = 0.0;
    const int draws = 2000;
    for (int d = 0; d < draws; ++d) {
        const auto chan = mc::sample_channel(cfg, rng);
        REQUIRE(chan.L == 4);
        REQUIRE(chan.K == 3);
        REQUIRE(chan.h.size() == 12);
        for (const auto& v : chan.h) {
            sum_re += v.real();
            sum_abs2 += std::norm(v);
        }
    }
    const double n_entries = 12.0 * draws;
    CHECK(std::abs(sum_re / n_entries) < 0.02);
    CHECK(std::abs(sum_abs2 / n_entries - 1.0) < 0.03);
}

TEST_CASE("fused signal/interference draw matches the direct channel computation") {
    const SystemConfig cfg = config(8, 4, 10.0);
    const double scale = cfg.p_t / cfg.K;
    std::vector<double> scratch(static_cast<std::size_t>(2 * cfg.L));
    for (std::uint64_t seed : {77ULL, 78ULL, 79ULL}) {
        mc::Xoshiro256pp r1(seed), r2(seed);
        const auto chan = mc::sample_channel(cfg, r1);
        const double want = mc::sinr_direct(chan, 0, cfg);
        double sig = 0.0, intf = 0.0;
        mc::draw_sig_int(cfg.L, cfg.K, r2, scratch, sig, intf);
        const double got = scale * sig / (cfg.sigma2 + scale * intf);
        CHECK(std::abs(got - want) / want < 1e-12);
        CHECK(sig > 0.0);
        CHECK(intf >= 0.0);
    }
}

TEST_CASE("direct and decomposed samplers draw from the same law") {
    const SystemConfig cfg = config(8, 4, 10.0);
    mc::McSpec spec;
    spec.n_samples = 20000;
    spec.seed = 31;
    const auto direct = mc::sample_sinr_direct(cfg, spec);
    mc::McSpec spec2 = spec;
    spec2.seed = 97;  // independent stream for the second sample
    const auto decomposed = mc::sample_sinr_decomposed(cfg, spec2);
    const double d = mc::two_sample_ks(direct, decomposed);
    CHECK(d < mc::two_sample_ks_critical_value(spec.n_samples, spec2.n_samples, 0.001));
}

TEST_CASE("sharded execution is bit-identical for every shard count") {
    const SystemConfig cfg = config(8, 4, 10.0);
    mc::McSpec spec;
    spec.n_samples = 70000;  // spans two blocks
    spec.seed = 13;
    spec.shards = 1;
    const auto one = mc::sample_sinr_direct(cfg, spec);
    spec.shards = 4;
    const auto four = mc::sample_sinr_direct(cfg, spec);
    spec.shards = 16;
    const auto sixteen = mc::sample_sinr_direct(cfg, spec);
    CHECK(one == four);
    CHECK(one == sixteen);

    // Rerun with the originals untouched: full reproducibility.
    spec.shards = 1;
    CHECK(mc::sample_sinr_direct(cfg, spec) == one);
}

TEST_CASE("one power-independent batch serves every transmit power bit-for-bit") {
    mc::McSpec spec;
    spec.n_samples = 30000;
    spec.seed = 3;
    const auto batch = mc::sample_sig_int(8, 4, spec);
    REQUIRE(batch.signal.size() == spec.n_samples);
    REQUIRE(batch.interference.size() == spec.n_samples);

    for (double p : {2.5, 10.0, 40.0}) {
        const SystemConfig cfg = config(8, 4, p);
        const auto direct = mc::sample_sinr_direct(cfg, spec);
        const auto reused = mc::sinr_from_sig_int(batch, cfg);
        CHECK(direct == reused);
    }

    // Scaling the power by an exact binary factor leaves the scale product
    // exact, so the two evaluations agree bit-for-bit term by term.
    const auto at40 = mc::sinr_from_sig_int(batch, config(8, 4, 40.0));
    bool exact = true;
    const double s40 = 40.0 / 4.0;
    for (std::size_t j = 0; j < at40.size(); ++j) {
        const double want =
            s40 * batch.signal[j] / (1.0 + s40 * batch.interference[j]);
        exact = exact && (at40[j] == want);
    }
    CHECK(exact);
}

TEST_CASE("single interference terms scaled by L approach the unit exponential") {
    // X_i ~ Beta(1, L-1) sampled by inversion; L X_i -> Exp(1) as L grows, so
    // the KS distance against 1 - e^{-x} must fall monotonically.
    const std::uint64_t n = 50000;
    double prev = 1.0;
    for (int L : {8, 64, 512}) {
        mc::Xoshiro256pp rng(41);
        std::vector<double> xs(n);
        for (auto& x : xs)
            x = L * (1.0 - std::pow(rng.uniform01(), 1.0 / (L - 1)));
        const double d =
            mc::ks_statistic(xs, [](double x) { return 1.0 - std::exp(-x); });
        CHECK(d < prev);
        prev = d;
    }
    // At L = 512 the limit is close enough to pass a KS test outright.
    CHECK(prev < mc::ks_critical_value(n, 0.001));
}

TEST_CASE("interference ratio from raw channels has mean 1/L") {
    const int L = 8;
    const SystemConfig cfg = config(L, 2, 10.0);
    mc::Xoshiro256pp rng(53);
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int j = 0; j < n; ++j) {
        const auto chan = mc::sample_channel(cfg, rng);
        std::complex<double> dot(0.0, 0.0);
        double na = 0.0, nb = 0.0;
        for (int l = 0; l < L; ++l) {
            dot += chan.h[l] * std::conj(chan.h[L + l]);
            na += std::norm(chan.h[l]);
            nb += std::norm(chan.h[L + l]);
        }
        const double x = std::norm(dot) / (na * nb);
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - 1.0 / L) < 4.0 * se);
}

TEST_CASE("empirical CDF counts correctly") {
    const std::vector<double> values{3.0, 1.0, 2.0};
    const std::vector<double> grid{0.5, 1.5, 2.5, 3.5};
    const auto F = mc::empirical_cdf(values, grid);
    REQUIRE(F.size() == 4);
    CHECK(F[0] == 0.0);
    CHECK(F[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(F[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(F[3] == 1.0);
}

TEST_CASE("KS statistics behave at the extremes and in calibration") {
    // Identical samples: distance 0. Disjoint samples: distance 1.
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> b{11.0, 12.0, 13.0};
    CHECK(mc::two_sample_ks(a, a) == 0.0);
    CHECK(mc::two_sample_ks(a, b) == 1.0);

    // Uniform sample against the uniform CDF: the statistic should land under
    // the 0.001 critical value (soft calibration check).
    const std::uint64_t n = 100000;
    mc::Xoshiro256pp rng(61);
    std::vector<double> u(n);
    for (auto& x : u) x = rng.uniform01();
    const double d = mc::ks_statistic(u, [](double x) {
        return std::min(1.0, std::max(0.0, x));
    });
    CHECK(d < mc::ks_critical_value(n, 0.001));
    // And a clearly wrong reference must be rejected.
    const double dbad = mc::ks_statistic(u, [](double x) {
        return std::min(1.0, std::max(0.0, x * x));
    });
    CHECK(dbad > mc::ks_critical_value(n, 0.001));
}

TEST_CASE("critical values and band widths follow the published formulas") {
    CHECK(mc::ks_critical_value(100000, 0.001) ==
          doctest::Approx(std::sqrt(-0.5 * std::log(0.0005) / 100000.0)).epsilon(1e-12));
    CHECK(mc::two_sample_ks_critical_value(100000, 50000, 0.001) ==
          doctest::Approx(std::sqrt(-0.5 * std::log(0.0005)) *
                          std::sqrt((100000.0 + 50000.0) / (100000.0 * 50000.0)))
              .epsilon(1e-12));
    CHECK(mc::dkw_halfwidth(10000000, 0.01) ==
          doctest::Approx(std::sqrt(std::log(2.0 / 0.01) / (2.0 * 10000000.0)))
              .epsilon(1e-12));
    // The acceptance band quoted for 10^7 samples is about 5.1e-4.
    CHECK(mc::dkw_halfwidth(10000000, 0.01) ==
          doctest::Approx(5.1475e-4).epsilon(1e-3));
}

TEST_CASE("spec validation and block coverage") {
    mc::McSpec bad;
    bad.n_samples = 0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);

    mc::McSpec spec;
    spec.n_samples = 150000;  // 65536 + 65536 + 18928
    spec.seed = 2;
    spec.shards = 3;
    std::mutex mu;
    std::set<std::size_t> blocks;
    std::uint64_t covered = 0;
    bool sizes_ok = true;
    mc::run_blocks(spec, [&](std::size_t b, std::uint64_t count, mc::Xoshiro256pp&) {
        std::lock_guard<std::mutex> lock(mu);
        blocks.insert(b);
        covered += count;
        sizes_ok = sizes_ok && (count <= mc::kBlockSize) && (count > 0);
    });
    CHECK(blocks.size() == 3);
    CHECK(covered == spec.n_samples);
    CHECK(sizes_ok);
    CHECK(*blocks.rbegin() == 2);
}
