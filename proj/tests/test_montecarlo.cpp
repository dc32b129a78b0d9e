#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bdris/montecarlo.hpp"
#include "bdris/statistics.hpp"

using namespace bdris;

namespace {
std::vector<double> exp_samples(std::size_t n, std::uint64_t seed) {
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream rng = RngStream::substream(seed, i);
        s[i] = -std::log(1.0 - rng.uniform());
    }
    return s;
}
double exp_cdf(double x) { return x > 0 ? -std::expm1(-x) : 0.0; }
double exp2_cdf(double x) { return x > 0 ? -std::expm1(-2.0 * x) : 0.0; }
} // namespace

TEST_CASE("empirical cdf semantics") {
    EmpiricalCdf f({3.0, 1.0, 2.0});
    CHECK(f(0.5) == 0.0);
    CHECK(f(1.0) == doctest::Approx(1.0 / 3.0));  // right-continuous
    CHECK(f(1.5) == doctest::Approx(1.0 / 3.0));
    CHECK(f(3.0) == 1.0);
    CHECK(f(9.0) == 1.0);
}

TEST_CASE("KS distance") {
    SUBCASE("sample set against itself vanishes") {
        auto s = exp_samples(500, 1);
        CHECK(ks_distance_two_sample(s, s) == 0.0);
    }
    SUBCASE("matched law is small, mismatched law is large") {
        auto s = exp_samples(100000, 2);
        EmpiricalCdf emp(std::move(s));
        CHECK(ks_distance(emp, exp_cdf) < 0.006);   // 1.628/sqrt(n) at 99%
        CHECK(ks_distance(emp, exp2_cdf) > 0.2);    // analytic sup gap is 0.25
    }
    SUBCASE("needs enough samples") {
        EmpiricalCdf emp(exp_samples(50, 3));
        CHECK_THROWS_AS(ks_distance(emp, exp_cdf), InvalidParameter);
    }
    SUBCASE("distance shrinks as the sample grows") {
        double prev = 1.0;
        for (std::size_t n : {1000u, 10000u, 100000u}) {
            EmpiricalCdf emp(exp_samples(n, 4));
            const double d = ks_distance(emp, exp_cdf);
            CHECK(d < prev);
            prev = d;
        }
    }
}

TEST_CASE("metric simulation") {
    auto cfg = SystemConfig::umi_default();
    cfg.N = 32;
    Geometry geom;
    RngStream rng(7);
    geom.user_pos = uniform_user_positions(cfg.K, 100.0, rng);

    SUBCASE("deterministic given the seed") {
        auto a = simulate_metrics(cfg, geom, 3, 42);
        auto b = simulate_metrics(cfg, geom, 3, 42);
        CHECK(a.radar_snr == b.radar_snr);
        CHECK(a.zf_sinr == b.zf_sinr);
        auto c = simulate_metrics(cfg, geom, 3, 43);
        CHECK(a.radar_snr != c.radar_snr);
    }
    SUBCASE("two half runs merge into the full run") {
        auto full = simulate_metrics(cfg, geom, 100, 42);
        auto lo = simulate_metrics(cfg, geom, 50, 42, 0);
        auto hi = simulate_metrics(cfg, geom, 50, 42, 50);
        for (int t = 0; t < 50; ++t) {
            CHECK(full.radar_snr[t] == lo.radar_snr[t]);
            CHECK(full.radar_snr[50 + t] == hi.radar_snr[t]);
        }
    }
    SUBCASE("radar metric mean matches the Erlang model") {
        // sqrt(M Gamma / gbar) has mean ~ M N
        auto c64 = cfg;
        c64.N = 64;
        const auto gains = derive_gains(c64, geom);
        auto ms = simulate_metrics(c64, geom, 20000, 11);
        double mean = 0.0;
        for (int t = 0; t < 20000; ++t)
            mean += std::sqrt(c64.M * ms.radar_snr[t] / gains.gbar_rt);
        mean /= 20000.0;
        CHECK(mean == doctest::Approx(c64.M * c64.N).epsilon(0.03));
    }
    SUBCASE("empirical outage within binomial noise of the model") {
        auto c2 = SystemConfig::equal_power(4, 3, 64, 115.0, 115.0);
        c2.rate_bps_hz = 1.0;
        auto gains = derive_gains(c2, geom);
        auto tables = comm_cdf_tables(4, 3);
        auto ms = simulate_metrics(c2, geom, 20000, 12);
        for (int k = 0; k < 3; ++k) {
            double bad = 0.0;
            for (int t = 0; t < 20000; ++t)
                if (ms.zf_sinr(t, k) <= gains.gamma_c_th) bad += 1.0;
            bad /= 20000.0;
            const double want = comm_sinr_cdf_t(gains.gamma_c_th, tables,
                                                gains.varrho * gains.sir_k[k]);
            CHECK(std::abs(bad - want) < 3.0 * (binomial_se(bad, 20000) + 5e-3));
        }
    }
    SUBCASE("radar KS shrinks with more trials") {
        auto c64 = cfg;
        c64.N = 64;
        const auto gains = derive_gains(c64, geom);
        auto cdf = [&](double g) { return radar_snr_cdf(g, c64.M, c64.N, gains.gbar_rt); };
        auto run = [&](std::int64_t n) {
            auto ms = simulate_metrics(c64, geom, n, 13);
            std::vector<double> v(ms.radar_snr.data(), ms.radar_snr.data() + n);
            return ks_distance(EmpiricalCdf(std::move(v)), cdf);
        };
        const double d3 = run(1000);
        const double d4 = run(10000);
        CHECK(d4 < d3);
    }
}
