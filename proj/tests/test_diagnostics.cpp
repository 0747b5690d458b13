#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "soilc/diagnostics.hpp"
#include "soilc/distributions.hpp"

#include <cmath>

using namespace soilc;

namespace {

std::vector<std::vector<std::vector<double>>> wrap(const std::vector<std::vector<double>>& cols) {
    // [chain][sample][param=1]
    std::vector<std::vector<std::vector<double>>> chains;
    for (const auto& c : cols) {
        std::vector<std::vector<double>> samples;
        for (double v : c) samples.push_back({v});
        chains.push_back(std::move(samples));
    }
    return chains;
}

}  // namespace

TEST_CASE("F quantile against reference values") {
    CHECK(f_quantile(0.975, 3, 10) == doctest::Approx(4.825621493405407).epsilon(1e-9));
    CHECK(f_quantile(0.975, 1, 5) == doctest::Approx(10.006982196613581).epsilon(1e-9));
    CHECK(f_quantile(0.975, 7, 120) == doctest::Approx(2.3947943485655845).epsilon(1e-9));
}

TEST_CASE("gelman-rubin matches an independent transcription on fixed data") {
    std::vector<std::vector<double>> cols(3, std::vector<double>(20));
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 20; ++i) cols[j][i] = std::sin(i * 0.7 + j * 1.3) + 0.1 * j;
    const auto report = gelman_rubin(wrap(cols), {"x"});
    CHECK(report[0].rhat == doctest::Approx(0.9888014313056667).epsilon(1e-10));
    CHECK(report[0].upper_ci == doctest::Approx(1.023518111734108).epsilon(1e-10));
}

TEST_CASE("identical chains sit at one, separated chains blow up") {
    std::vector<double> base(2000);
    Rng rng(4);
    for (auto& v : base) v = rng.normal();
    const auto same = gelman_rubin(wrap({base, base, base}), {"x"});
    CHECK(same[0].rhat == doctest::Approx(1.0).epsilon(1e-3));

    std::vector<double> shifted = base;
    for (auto& v : shifted) v += 10.0;
    const auto apart = gelman_rubin(wrap({base, shifted}), {"x"});
    CHECK(apart[0].rhat > 1.2);
}

TEST_CASE("chains from a common distribution mix") {
    Rng rng(99);
    std::vector<std::vector<double>> cols(4, std::vector<double>(10000));
    for (auto& c : cols)
        for (auto& v : c) v = rng.normal();
    const auto report = gelman_rubin(wrap(cols), {"x"});
    CHECK(report[0].rhat < 1.05);
    CHECK(report[0].rhat >= report[0].rhat);  // finite
}

TEST_CASE("stuck chains report infinity") {
    std::vector<double> fixed(50, 3.14);
    const auto report = gelman_rubin(wrap({fixed, fixed}), {"x"});
    CHECK(std::isinf(report[0].rhat));
}

TEST_CASE("gelman-rubin is invariant under a common affine map") {
    Rng rng(31);
    std::vector<std::vector<double>> cols(3, std::vector<double>(500));
    for (auto& c : cols)
        for (auto& v : c) v = rng.normal(2.0, 1.5);
    const auto raw = gelman_rubin(wrap(cols), {"x"});
    for (auto& c : cols)
        for (auto& v : c) v = -4.0 * v + 7.0;
    const auto mapped = gelman_rubin(wrap(cols), {"x"});
    CHECK(mapped[0].rhat == doctest::Approx(raw[0].rhat).epsilon(1e-12));
    CHECK(mapped[0].upper_ci == doctest::Approx(raw[0].upper_ci).epsilon(1e-12));
}

TEST_CASE("interpolated order statistics") {
    std::vector<double> u(100);
    for (int i = 0; i < 100; ++i) u[i] = i + 1.0;
    CHECK(quantile_sorted(u, 0.025) == doctest::Approx(3.475).epsilon(1e-12));
    std::vector<double> odd = {1.0, 5.0, 9.0};
    CHECK(quantile_sorted(odd, 0.5) == 5.0);
    CHECK(quantile_sorted(odd, 0.0) == 1.0);
    CHECK(quantile_sorted(odd, 1.0) == 9.0);
}

TEST_CASE("soc change summaries") {
    ModelSpec spec{Pools::OnePool, Site::Tarlee};
    LatentTrajectory traj;
    traj.resize(spec, 3);
    for (int f = 0; f < kNumFields; ++f) {
        traj.carbon_at(f, 0)[0] = 40.0;
        traj.carbon_at(f, 2)[0] = 38.5;
    }
    SUBCASE("target equals baseline gives zeros") {
        const auto out = soc_change({traj, traj}, spec, 1978, 1978);
        for (const auto& s : out) {
            CHECK(s.mean == 0.0);
            CHECK(s.q2_5 == 0.0);
            CHECK(s.q97_5 == 0.0);
        }
    }
    SUBCASE("single sample collapses to the difference") {
        const auto out = soc_change({traj}, spec, 1978, 1980);
        for (const auto& s : out) {
            CHECK(s.mean == doctest::Approx(-1.5));
            CHECK(s.q2_5 == doctest::Approx(-1.5));
            CHECK(s.q50 == doctest::Approx(-1.5));
            CHECK(s.q97_5 == doctest::Approx(-1.5));
        }
    }
    SUBCASE("percentiles are monotone in the quantile level") {
        std::vector<LatentTrajectory> samples;
        Rng rng(8);
        for (int s = 0; s < 40; ++s) {
            LatentTrajectory t = traj;
            for (int f = 0; f < kNumFields; ++f) t.carbon_at(f, 2)[0] = 38.0 + rng.normal();
            samples.push_back(std::move(t));
        }
        const auto out = soc_change(samples, spec, 1978, 1980);
        for (const auto& s : out) {
            CHECK(s.q2_5 <= s.q25);
            CHECK(s.q25 <= s.q50);
            CHECK(s.q50 <= s.q75);
            CHECK(s.q75 <= s.q97_5);
        }
    }
    SUBCASE("out-of-range years throw") {
        CHECK_THROWS(soc_change({traj}, spec, 1978, 1999));
    }
}

TEST_CASE("percentile bands") {
    const std::vector<double> qs = {0.025, 0.25, 0.5, 0.75, 0.975};
    SUBCASE("constant samples collapse") {
        const auto bands = percentile_bands(
            5, 1978, 4, [](int, int, int) { return 7.25; }, qs);
        for (int f = 0; f < kNumFields; ++f)
            for (int t = 0; t < 4; ++t)
                for (size_t q = 0; q < qs.size(); ++q) CHECK(bands.curves[f][t][q] == 7.25);
    }
    SUBCASE("single sample returns that sample exactly") {
        const auto bands = percentile_bands(
            1, 1978, 2, [](int, int f, int t) { return 10.0 * f + t; }, qs);
        for (int f = 0; f < kNumFields; ++f)
            for (int t = 0; t < 2; ++t)
                for (size_t q = 0; q < qs.size(); ++q)
                    CHECK(bands.curves[f][t][q] == 10.0 * f + t);
    }
    SUBCASE("uniform grid reproduces the interpolation rule") {
        const auto bands = percentile_bands(
            100, 1978, 1, [](int s, int, int) { return s + 1.0; }, {0.025});
        CHECK(bands.curves[0][0][0] == doctest::Approx(3.475).epsilon(1e-12));
    }
}
