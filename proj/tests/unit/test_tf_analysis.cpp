#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "anelab/tf_analysis.hpp"
#include "test_util.hpp"

using ane::Complex;
using ane::PathResponse;
using ane::Scenario;
using ane::Strategy;

namespace {

constexpr double kPi = std::numbers::pi;

Complex unit(double freq) { return std::polar(1.0, 2.0 * kPi * freq); }

} // namespace

TEST_CASE("aux gain at the section-3.1 parameter point") {
    // omega0 = pi/4, A~ = 1, gamma = 0, beta = 0.5, mu = 0.01, z = -1:
    // the inner ratio is exactly -1/2, so G = -2 * 0.01 * 2 * (-1/2) = 0.02.
    const Scenario s = ane::single_channel_scenario(0.125, 0.5, 0.0, 0.01);
    const Complex g = ane::aux_gain_single(s, Complex{-1.0, 0.0}, 0, 0);
    CHECK(g.real() == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(std::abs(g.imag()) < 1e-15);
}

TEST_CASE("aux gain basics") {
    SUBCASE("mu = 0 annihilates G") {
        const Scenario s = ane::single_channel_scenario(0.125, 0.5, 0.0, 0.0);
        for (double a : {0.3, 1.1, 2.9})
            CHECK(std::abs(ane::aux_gain_single(s, std::polar(0.9, a), 0, 0)) == 0.0);
    }
    SUBCASE("pole proximity is rejected on both half-planes") {
        const Scenario s = ane::single_channel_scenario(0.125, 0.5, 0.0, 0.01);
        CHECK_THROWS_AS(ane::aux_gain_single(s, unit(0.125), 0, 0), ane::PoleProximityError);
        CHECK_THROWS_AS(ane::aux_gain_single(s, std::conj(unit(0.125)), 0, 0),
                        ane::PoleProximityError);
    }
    SUBCASE("multi form collapses to the single form at L = 1") {
        std::mt19937 rng(61);
        for (int trial = 0; trial < 10; ++trial) {
            const Scenario s = ane::test::random_l1_scenario(rng);
            const Complex z = std::polar(0.8 + 0.3 * (trial % 3), 0.5 + 0.2 * trial);
            for (std::size_t j = 0; j < s.actuators; ++j)
                for (std::size_t k = 0; k < s.sensors; ++k)
                    CHECK(ane::aux_gain_single(s, z, j, k) == ane::aux_gain_multi(s, z, 0, j, k));
        }
    }
    SUBCASE("beta -> 2 - beta flips the sign through (1 - beta)") {
        const Scenario base = ane::single_channel_scenario(0.125, 0.5, 0.0, 0.01);
        Scenario flipped = base;
        flipped.eq.beta = {1.5};
        const Complex z = std::polar(0.9, 1.0);
        const Complex ga = ane::aux_gain_single(base, z, 0, 0);
        const Complex gb = ane::aux_gain_single(flipped, z, 0, 0);
        // G(beta') / G(beta) = (1 - beta) / (1 - beta') = -1 here.
        CHECK(std::abs(gb + ga) < 1e-15 * (1.0 + std::abs(ga)));
    }
}

TEST_CASE("assemble_single reproduces the hand-built 1x1 system") {
    const PathResponse path = PathResponse::fir({0.8, 0.2, -0.1});
    const Scenario s = ane::single_channel_scenario(0.2, 0.5, 0.1, 0.015, path, path, true);
    const Complex z = std::polar(0.92, 0.8);
    const auto sys = ane::assemble_single(s, z, 0);

    REQUIRE(sys.matrix.rows() == 2);
    REQUIRE(sys.matrix.cols() == 2);

    const Complex g = ane::aux_gain_single(s, z, 0, 0);
    const Complex c = ane::path_gain(path, z);
    const double beta = 0.5, gamma = 0.1;

    CHECK(sys.matrix(0, 0) == Complex{1.0, 0.0});
    CHECK(std::abs(sys.matrix(0, 1) - (1.0 - gamma) * c) < 1e-15);
    CHECK(sys.matrix(1, 0) == Complex{0.0, 0.0});
    const Complex e_expected = 1.0 - (1.0 - gamma) * (beta / (1.0 - beta)) * g * c;
    CHECK(std::abs(sys.matrix(1, 1) - e_expected) < 1e-14);
    CHECK(sys.rhs[0] == Complex{1.0, 0.0});
    CHECK(sys.rhs[1] == g);
}

TEST_CASE("assemble_single block structure for K = 4") {
    const Scenario s = ane::test::figure4_scenario();
    const Complex z = std::polar(0.95, 1.7);
    const auto sys = ane::assemble_single(s, z, 0);

    REQUIRE(sys.matrix.rows() == 8);
    // u has exactly one nonzero entry, u_1 = 1.
    CHECK(sys.rhs[0] == Complex{1.0, 0.0});
    for (std::size_t f = 1; f < 4; ++f) CHECK(sys.rhs[f] == Complex{0.0, 0.0});
    // A's first column carries the P ratios (identity primaries here), the
    // rest of the diagonal is -1, everything else 0.
    for (std::size_t f = 0; f < 4; ++f) {
        CHECK(sys.matrix(f, 0) == Complex{1.0, 0.0});
        if (f != 0) CHECK(sys.matrix(f, f) == Complex{-1.0, 0.0});
        for (std::size_t c = 1; c < 4; ++c)
            if (c != f) CHECK(sys.matrix(f, c) == Complex{0.0, 0.0});
    }
    // D's first column is zero.
    for (std::size_t f = 4; f < 8; ++f) CHECK(sys.matrix(f, 0) == Complex{0.0, 0.0});
}

TEST_CASE("primary-path ratios enter A through the permuted first column") {
    std::mt19937 rng(97);
    Scenario s = ane::test::random_l1_scenario(rng);
    // Force a 2-sensor layout with distinct primary paths.
    while (s.sensors != 2) s = ane::test::random_l1_scenario(rng);
    s.primary[0] = PathResponse::fir({1.0});
    s.primary[1] = PathResponse::fir({0.5});

    const Complex z = std::polar(0.9, 2.2);
    const auto sys0 = ane::assemble_single(s, z, 0);
    CHECK(std::abs(sys0.matrix(1, 0) - Complex{0.5, 0.0}) < 1e-15); // P_2 / P_1

    const auto sys1 = ane::assemble_single(s, z, 1);
    CHECK(std::abs(sys1.matrix(1, 0) - Complex{2.0, 0.0}) < 1e-15); // P_1 / P_2
}

TEST_CASE("multi-frequency assembly") {
    const Scenario s = ane::test::figure5_scenario();
    const Complex z = std::polar(0.93, 2.0);

    SUBCASE("fig5 system is 12x12") {
        const auto sys = ane::assemble_common(s, z, 0);
        CHECK(sys.matrix.rows() == 12);
        CHECK(sys.matrix.cols() == 12);
        CHECK(sys.rhs.size() == 12);
    }

    SUBCASE("multiple strategy zeroes every off-diagonal E block") {
        const auto sys = ane::assemble_multiple(s, z, 1);
        const std::size_t K = 2, J = 2, L = 5;
        for (std::size_t F = 0; F < L; ++F)
            for (std::size_t C = 0; C < L; ++C) {
                if (F == C) continue;
                for (std::size_t f = 0; f < J; ++f)
                    for (std::size_t c = 0; c < J; ++c)
                        CHECK(sys.matrix(K + F * J + f, K + C * J + c) == Complex{0.0, 0.0});
            }
    }

    SUBCASE("common and multiple differ only inside E") {
        const auto sc = ane::assemble_common(s, z, 0);
        const auto sm = ane::assemble_multiple(s, z, 0);
        const std::size_t K = 2;
        for (std::size_t r = 0; r < 12; ++r)
            for (std::size_t c = 0; c < 12; ++c) {
                if (r >= K && c >= K) continue; // E block may differ
                CHECK(sc.matrix(r, c) == sm.matrix(r, c));
            }
        for (std::size_t i = 0; i < 12; ++i) CHECK(sc.rhs[i] == sm.rhs[i]);
        // And they do differ somewhere inside E.
        bool differs = false;
        for (std::size_t r = K; r < 12 && !differs; ++r)
            for (std::size_t c = K; c < 12 && !differs; ++c)
                differs = sc.matrix(r, c) != sm.matrix(r, c);
        CHECK(differs);
    }

    SUBCASE("block assembly collapses to the single-frequency system at L = 1") {
        std::mt19937 rng(73);
        for (int trial = 0; trial < 8; ++trial) {
            const Scenario s1 = ane::test::random_l1_scenario(rng);
            const Complex zz = std::polar(0.9 + 0.05 * trial, 0.6 + 0.4 * trial);
            for (std::size_t k = 0; k < s1.sensors; ++k) {
                const auto a = ane::assemble_single(s1, zz, k);
                const auto b = ane::assemble_common(s1, zz, k);
                const auto c = ane::assemble_multiple(s1, zz, k);
                REQUIRE(a.matrix.rows() == b.matrix.rows());
                for (std::size_t i = 0; i < a.matrix.data().size(); ++i) {
                    CHECK(a.matrix.data()[i] == b.matrix.data()[i]);
                    CHECK(b.matrix.data()[i] == c.matrix.data()[i]);
                }
                for (std::size_t i = 0; i < a.rhs.size(); ++i) {
                    CHECK(a.rhs[i] == b.rhs[i]);
                    CHECK(b.rhs[i] == c.rhs[i]);
                }
            }
        }
    }
}

TEST_CASE("generic solver matches the closed form on random single-channel scenarios") {
    std::mt19937 rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        const Scenario s = ane::test::random_single_channel(rng, trial % 2 == 0);
        for (int i = 0; i < 8; ++i) {
            const double f = (static_cast<double>(i) + 0.5) / 16.0 * 0.5;
            if (std::abs(f - s.tones[0].freq) < 1e-4) continue;
            const Complex z = unit(f);
            const Complex via_system = ane::transfer_function(s, Strategy::common, z, 0).h;
            const Complex via_formula = ane::closed_form_single(s, z);
            CHECK(std::abs(via_system - via_formula) <=
                  1e-9 * (1.0 + std::abs(via_formula)));
        }
    }
}

TEST_CASE("mu = 0 gives the open-loop identity H = 1 for every variant") {
    Scenario s5 = ane::test::figure5_scenario(0.0);
    const Scenario s4 = ane::test::figure4_scenario(0.0);
    for (double f : {0.07, 0.21, 0.33}) {
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(std::abs(ane::transfer_function(s5, Strategy::common, unit(f), k).h -
                           Complex{1.0, 0.0}) < 1e-12);
            CHECK(std::abs(ane::transfer_function(s5, Strategy::multiple, unit(f), k).h -
                           Complex{1.0, 0.0}) < 1e-12);
        }
        for (std::size_t k = 0; k < 4; ++k)
            CHECK(std::abs(ane::transfer_function(s4, Strategy::common, unit(f), k).h -
                           Complex{1.0, 0.0}) < 1e-12);
    }
}

TEST_CASE("transfer_function_all gathers every sensor at one z") {
    const Scenario s = ane::test::figure4_scenario();
    const Complex z = std::polar(0.93, 1.1);
    const auto all = ane::transfer_function_all(s, Strategy::common, z);
    REQUIRE(all.h.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        const auto point = ane::transfer_function(s, Strategy::common, z, k);
        CHECK(all.h[k] == point.h);
        CHECK(all.max_residual >= point.residual);
    }
}

TEST_CASE("conjugate symmetry of H") {
    std::mt19937 rng(113);
    const Scenario s5 = ane::test::figure5_scenario();
    std::uniform_real_distribution<double> ua(0.1, 3.0);
    std::uniform_real_distribution<double> ur(0.5, 1.0);
    for (int i = 0; i < 12; ++i) {
        const Complex z = std::polar(ur(rng), ua(rng));
        for (std::size_t k = 0; k < 2; ++k)
            for (Strategy strat : {Strategy::common, Strategy::multiple}) {
                const Complex h = ane::transfer_function(s5, strat, z, k).h;
                const Complex hc = ane::transfer_function(s5, strat, std::conj(z), k).h;
                CHECK(std::abs(hc - std::conj(h)) <= 1e-10 * (1.0 + std::abs(h)));
            }
    }
}

TEST_CASE("closed form at the control frequency") {
    SUBCASE("perfect estimates give exactly beta") {
        const Scenario s = ane::test::figure3_scenario(0.5);
        const Complex h = ane::closed_form_single(s, unit(0.25));
        CHECK(std::abs(h - Complex{0.5, 0.0}) < 1e-12);
    }
    SUBCASE("imperfect estimates agree with the two-sided limit") {
        const PathResponse truth = PathResponse::fir({0.9, 0.3, -0.15, 0.1});
        const PathResponse estimate = PathResponse::fir({1.1, -0.2, 0.1, 0.05});
        const Scenario s =
            ane::single_channel_scenario(0.25, 0.5, 0.0, 0.01, truth, estimate, false);
        const Complex at_pole = ane::closed_form_single(s, unit(0.25));
        const auto limit = ane::control_frequency_gain(s, Strategy::common, 0, 0);
        CHECK(std::abs(at_pole - limit.value) < 1e-3 * (1.0 + std::abs(at_pole)));
    }
}

TEST_CASE("control-frequency gains reproduce the figure targets") {
    SUBCASE("figure 3: beta in {0, 0.5, 1.5} at f0 = 0.25") {
        for (double beta : {0.0, 0.5, 1.5}) {
            const Scenario s = ane::test::figure3_scenario(beta);
            const auto gain = ane::control_frequency_gain(s, Strategy::common, 0, 0);
            CHECK(std::abs(std::abs(gain.value) - beta) <= 1e-3);
        }
    }
    SUBCASE("figure 4: per-sensor targets at f = 0.1") {
        const Scenario s = ane::test::figure4_scenario();
        const double expected[] = {1.3, 0.8, 0.0, 0.2};
        for (std::size_t k = 0; k < 4; ++k) {
            const auto gain = ane::control_frequency_gain(s, Strategy::common, k, 0);
            CHECK(std::abs(std::abs(gain.value) - expected[k]) <= 1e-3);
        }
    }
    SUBCASE("figure 5: sensor 2 at f = 0.45 targets 0.1, both strategies") {
        const Scenario s = ane::test::figure5_scenario();
        for (Strategy strat : {Strategy::common, Strategy::multiple}) {
            const auto gain = ane::control_frequency_gain(s, strat, 1, 4);
            CHECK(std::abs(std::abs(gain.value) - 0.1) <= 1e-3);
        }
    }
}

TEST_CASE("sweep behaviour") {
    SUBCASE("mu = 0 keeps the magnitude at one across the grid") {
        const Scenario s = ane::test::figure3_scenario(0.5, 0.0);
        const auto table = ane::sweep(s, Strategy::common, 0, 64);
        for (double m : table.magnitude) CHECK(m == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("figure 3 with beta = 0 notches out the control frequency") {
        const Scenario s = ane::test::figure3_scenario(0.0);
        const auto table = ane::sweep(s, Strategy::common, 0, 4096);
        // Grid point 2048 sits exactly on f = 0.25.
        CHECK(table.freq[2048] == doctest::Approx(0.25));
        CHECK(table.flag[2048] == ane::SweepFlag::control);
        CHECK(table.magnitude[2048] < 1e-3);
    }
    SUBCASE("figure 3 with beta = 0.5 pins the control row at 0.5") {
        const Scenario s = ane::test::figure3_scenario(0.5);
        const auto table = ane::sweep(s, Strategy::common, 0, 4096);
        CHECK(table.magnitude[2048] == doctest::Approx(0.5).epsilon(2e-3));
        CHECK(table.freq.size() == 4096);
        for (std::size_t i = 1; i < table.freq.size(); ++i)
            CHECK(table.freq[i] > table.freq[i - 1]);
    }
    SUBCASE("grid floor") {
        const Scenario s = ane::test::figure3_scenario(0.5);
        CHECK_THROWS_AS(ane::sweep(s, Strategy::common, 0, 8), ane::Error);
    }
}

TEST_CASE("gain-table paths are rejected by the analytic systems") {
    ane::Scenario s = ane::single_channel_scenario(
        0.25, 0.5, 0.0, 0.01, PathResponse::unity(),
        PathResponse::gain_table({{0.25, 1.0, 0.0}}), false);
    CHECK_THROWS_AS(ane::assemble_single(s, std::polar(0.9, 1.0), 0), ane::Error);
    CHECK_THROWS_AS(ane::closed_form_single(s, std::polar(0.9, 1.0)), ane::Error);
}

TEST_CASE("loop-gain width against a fixed threshold grows with mu") {
    // |G| scales linearly in mu, so the comparison uses one fixed threshold
    // taken from the mu = 0.005 curve at omega0 + delta.
    const double delta = 2.0 * kPi * 1e-3;
    const Scenario narrow = ane::single_channel_scenario(0.125, 0.5, 0.0, 0.005);
    const Scenario wide = ane::single_channel_scenario(0.125, 0.5, 0.0, 0.02);
    const double omega0 = narrow.omega(0);
    const double threshold =
        std::abs(ane::aux_gain_single(narrow, std::polar(1.0, omega0 + delta), 0, 0)) /
        std::sqrt(2.0);

    auto width_at = [&](const Scenario& s) {
        auto level = [&](double w) {
            return std::abs(ane::aux_gain_single(s, std::polar(1.0, w), 0, 0));
        };
        auto crossing = [&](double dir) {
            double lo = 1e-6, hi = 1e-6;
            while (level(omega0 + dir * hi) >= threshold) hi *= 1.5;
            while (hi - lo > 1e-9) {
                const double mid = 0.5 * (lo + hi);
                (level(omega0 + dir * mid) >= threshold ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        };
        return crossing(+1.0) + crossing(-1.0);
    };

    const double w_narrow = width_at(narrow);
    const double w_wide = width_at(wide);
    CHECK(w_wide > w_narrow);
    CHECK(w_wide > 2.0 * w_narrow); // fourfold mu, strictly wider band
}

TEST_CASE("estimated-path phase skews the loop gain") {
    const double delta = 2.0 * kPi * 1e-3;

    SUBCASE("phase -pi/4 breaks the two-sided balance") {
        const Scenario s = ane::single_channel_scenario(
            0.125, 0.5, 0.0, 0.01, PathResponse::unity(), PathResponse::fir({0.0, 1.0}), false);
        const double omega0 = s.omega(0);
        const double hi = std::abs(ane::aux_gain_single(s, std::polar(1.0, omega0 + delta), 0, 0));
        const double lo = std::abs(ane::aux_gain_single(s, std::polar(1.0, omega0 - delta), 0, 0));
        CHECK(std::abs(hi - lo) > 1e-6 * std::max(hi, lo));
    }

    SUBCASE("zero phase is exactly balanced where the pole sits at omega = pi/2") {
        const Scenario s = ane::single_channel_scenario(0.25, 0.5, 0.0, 0.01);
        const double omega0 = s.omega(0);
        for (double d : {delta, 5.0 * delta, 0.1}) {
            const double hi =
                std::abs(ane::aux_gain_single(s, std::polar(1.0, omega0 + d), 0, 0));
            const double lo =
                std::abs(ane::aux_gain_single(s, std::polar(1.0, omega0 - d), 0, 0));
            CHECK(hi == doctest::Approx(lo).epsilon(1e-12));
        }
    }
}
