#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "wptsim/channel.hpp"
#include "wptsim/rng.hpp"

using namespace wptsim;
using namespace wptsim::channel;

namespace {
constexpr double kPi = std::numbers::pi;
const UlaConfig kUla{};  // 8 antennas, 0.1 m spacing, 800 MHz
}

TEST_CASE("steering codeword") {
    SUBCASE("broadside kills all phases") {
        const auto w = steering_codeword(kPi / 2.0, kUla);
        for (const auto& c : w.weights) {
            CHECK(c.real() == doctest::Approx(1.0 / std::sqrt(8.0)));
            CHECK(c.imag() == doctest::Approx(0.0));
        }
    }
    SUBCASE("endfire with half-wavelength spacing") {
        UlaConfig ula = kUla;
        ula.n_antennas = 2;
        ula.spacing_m = ula.wavelength() / 2.0;
        const auto w = steering_codeword(0.0, ula);
        CHECK(w.weights[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
        CHECK(w.weights[1].real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
        CHECK(w.weights[1].imag() == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("unit norm for random angles") {
        auto stream = rng::substream(5, rng::Purpose::Instance);
        for (int k = 0; k < 50; ++k) {
            const auto w = steering_codeword(stream.uniform(0.0, kPi), kUla);
            double norm = 0.0;
            for (const auto& c : w.weights) norm += std::norm(c);
            CHECK(std::abs(norm - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("codebook construction") {
    SUBCASE("twelve uniformly spread beams") {
        const auto book = build_codebook(12, kUla);
        REQUIRE(book.size() == 12);
        for (int k = 0; k < 12; ++k) {
            CHECK(book.entries[k].beam_angle == doctest::Approx(k * kPi / 12.0));
        }
    }
    SUBCASE("degenerate single-entry codebook") {
        const auto book = build_codebook(1, kUla);
        REQUIRE(book.size() == 1);
        CHECK(book.entries[0].beam_angle == 0.0);
    }
    SUBCASE("angles strictly increasing below pi") {
        const auto book = build_codebook(7, kUla);
        for (int k = 1; k < book.size(); ++k) {
            CHECK(book.entries[k].beam_angle > book.entries[k - 1].beam_angle);
        }
        CHECK(book.entries.back().beam_angle < kPi);
    }
}

TEST_CASE("mean channel") {
    SUBCASE("magnitudes scale as gain over distance") {
        const auto h = mean_channel({2.0, 0.0}, 1.0, {0.0, 0.0}, kUla);
        for (const auto& c : h) CHECK(std::abs(c) == doctest::Approx(0.5));
        const auto h3 = mean_channel({1.0, 0.0}, 3.0, {0.0, 0.0}, kUla);
        const auto h1 = mean_channel({1.0, 0.0}, 1.0, {0.0, 0.0}, kUla);
        for (std::size_t i = 0; i < h3.size(); ++i) {
            CHECK(std::abs(h3[i]) == doctest::Approx(3.0 * std::abs(h1[i])));
        }
    }
    SUBCASE("phases conjugate-match the steering codeword at the same bearing") {
        const Point sensor{1.7, 2.3};
        const auto h = mean_channel(sensor, 1.0, {0.0, 0.0}, kUla);
        const auto w = steering_codeword(bearing({0.0, 0.0}, sensor), kUla);
        std::complex<double> y{0.0, 0.0};
        for (std::size_t i = 0; i < h.size(); ++i) y += h[i] * w.weights[i];
        CHECK(y.imag() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(y.real() > 0.0);
    }
    SUBCASE("coincident geometry throws") {
        CHECK_THROWS_AS(mean_channel({1.0, 1.0}, 1.0, {1.0, 1.0}, kUla), ModelError);
    }
}

TEST_CASE("csi sampling") {
    SUBCASE("unit second moment") {
        auto stream = rng::substream(5, rng::Purpose::Fade);
        std::vector<std::complex<double>> mean(1, {1.0, 0.0});
        double acc = 0.0;
        constexpr int kDraws = 100000;
        for (int k = 0; k < kDraws; ++k) {
            acc += std::norm(sample_csi(mean, stream).fade);
        }
        CHECK(acc / kDraws > 0.98);
        CHECK(acc / kDraws < 1.02);
    }
    SUBCASE("zero mean annihilates") {
        auto stream = rng::substream(5, rng::Purpose::Fade);
        const auto draw = sample_csi(std::vector<std::complex<double>>(4, {0.0, 0.0}), stream);
        for (const auto& c : draw.realized) CHECK(std::abs(c) == 0.0);
    }
    SUBCASE("identical stream state gives identical draws") {
        auto s1 = rng::substream(9, rng::Purpose::Fade, 3, 1, 4);
        auto s2 = rng::substream(9, rng::Purpose::Fade, 3, 1, 4);
        std::vector<std::complex<double>> mean(3, {0.5, 0.25});
        const auto a = sample_csi(mean, s1);
        const auto b = sample_csi(mean, s2);
        CHECK(a.fade == b.fade);
    }
}

TEST_CASE("received power") {
    SUBCASE("matched pair attains the array gain") {
        const Point sensor{1.0, 0.0};
        const auto h = mean_channel(sensor, 1.0, {0.0, 0.0}, kUla);
        const auto w = steering_codeword(bearing({0.0, 0.0}, sensor), kUla);
        CHECK(received_power(h, w) == doctest::Approx(8.0).epsilon(1e-9));
    }
    SUBCASE("zero channel") {
        const auto w = steering_codeword(1.0, kUla);
        CHECK(received_power(std::vector<std::complex<double>>(8, {0.0, 0.0}), w) == 0.0);
    }
    SUBCASE("perfect destructive interference") {
        Codeword w;
        w.weights = {{1.0 / std::sqrt(2.0), 0.0}, {1.0 / std::sqrt(2.0), 0.0}};
        const std::vector<std::complex<double>> h = {{1.0, 0.0}, {-1.0, 0.0}};
        CHECK(received_power(h, w) == doctest::Approx(0.0));
    }
    SUBCASE("dimension mismatch") {
        const auto w = steering_codeword(1.0, kUla);
        CHECK_THROWS_AS(
            received_power(std::vector<std::complex<double>>(3, {1.0, 0.0}), w),
            std::invalid_argument);
    }
}

TEST_CASE("superposed power") {
    const Point sensor{2.0, 1.0};
    const auto h = mean_channel(sensor, 1.0, {0.0, 0.0}, kUla);
    const auto w = steering_codeword(bearing({0.0, 0.0}, sensor), kUla);

    SUBCASE("single contribution reduces to received power") {
        std::vector<Contribution> contributions(1);
        contributions[0].channel = h;
        contributions[0].codeword = &w;
        CHECK(superposed_power(contributions) ==
              doctest::Approx(received_power(h, w)).epsilon(1e-12));
    }
    SUBCASE("two equal inner products quadruple the power") {
        std::vector<Contribution> contributions(2);
        contributions[0].channel = h;
        contributions[0].codeword = &w;
        contributions[1].channel = h;
        contributions[1].codeword = &w;
        CHECK(superposed_power(contributions) ==
              doctest::Approx(4.0 * received_power(h, w)).epsilon(1e-12));
    }
    SUBCASE("opposite phases cancel") {
        auto flipped = h;
        for (auto& c : flipped) c = -c;
        std::vector<Contribution> contributions(2);
        contributions[0].channel = h;
        contributions[0].codeword = &w;
        contributions[1].channel = flipped;
        contributions[1].codeword = &w;
        CHECK(superposed_power(contributions) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("both enhancement and cancellation regimes exist") {
        std::vector<Contribution> two(2);
        two[0].channel = h;
        two[0].codeword = &w;
        two[1].channel = h;
        two[1].codeword = &w;
        const double sum_of_powers = 2.0 * received_power(h, w);
        CHECK(superposed_power(two) > sum_of_powers);
        auto flipped = h;
        for (auto& c : flipped) c = -c;
        two[1].channel = flipped;
        CHECK(superposed_power(two) < sum_of_powers);
    }
    SUBCASE("empty input throws") {
        CHECK_THROWS_AS(superposed_power(std::vector<Contribution>{}),
                        std::invalid_argument);
    }
}

TEST_CASE("expected power") {
    SUBCASE("matched policy at unit distance") {
        const auto w = steering_codeword(bearing({0.0, 0.0}, {1.0, 0.0}), kUla);
        CHECK(expected_power({1.0, 0.0}, 1.0, {0.0, 0.0}, w, kUla) ==
              doctest::Approx(8.0).epsilon(1e-9));
    }
    SUBCASE("Monte Carlo mean of realized power matches") {
        auto stream = rng::substream(5, rng::Purpose::Fade, 2);
        const Point sensor{1.4, 2.1};
        const auto w = steering_codeword(0.9, kUla);
        const auto mean = mean_channel(sensor, 1.0, {0.0, 0.0}, kUla);
        const double expected = expected_power(sensor, 1.0, {0.0, 0.0}, w, kUla);
        double acc = 0.0;
        constexpr int kDraws = 100000;
        for (int k = 0; k < kDraws; ++k) {
            acc += received_power(sample_csi(mean, stream).realized, w);
        }
        CHECK(std::abs(acc / kDraws - expected) / expected < 0.02);
    }
    SUBCASE("inverse-square decay along a ray") {
        const double theta = 0.7;
        const auto w = steering_codeword(theta, kUla);
        const Point near{2.0 * std::cos(theta), 2.0 * std::sin(theta)};
        const Point far{4.0 * std::cos(theta), 4.0 * std::sin(theta)};
        const double p_near = expected_power(near, 1.0, {0.0, 0.0}, w, kUla);
        const double p_far = expected_power(far, 1.0, {0.0, 0.0}, w, kUla);
        CHECK(p_far == doctest::Approx(0.25 * p_near).epsilon(1e-9));
    }
}

TEST_CASE("power normalization") {
    CHECK(normalize_power(5.0, 5.0) == 1.0);
    CHECK(normalize_power(0.0, 5.0) == 0.0);
    CHECK(normalize_power(10.0, 5.0) == 1.0);
    CHECK(normalize_power(2.5, 5.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(normalize_power(1.0, 0.0), ConfigError);
}

TEST_CASE("antenna gain drift") {
    SUBCASE("zero drift rate is a no-op") {
        AntennaGainState state{{1.0, 2.0}, {1.0, 2.0}, 0.0};
        auto stream = rng::substream(5, rng::Purpose::GainDrift);
        const auto next = drift_antenna_gain(state, stream);
        CHECK(next.current[0] == 1.0);
        CHECK(next.current[1] == 2.0);
    }
    SUBCASE("one step moves at most five percent of the initial gain") {
        AntennaGainState state{{1.0, 0.5}, {1.0, 0.5}, 0.05};
        auto stream = rng::substream(5, rng::Purpose::GainDrift, 1);
        const auto next = drift_antenna_gain(state, stream);
        for (std::size_t i = 0; i < next.current.size(); ++i) {
            CHECK(std::abs(next.current[i] - state.current[i]) <=
                  0.05 * state.initial[i] + 1e-15);
        }
    }
    SUBCASE("gains never fall below the floor") {
        AntennaGainState state{{1.0}, {1.0}, 0.05};
        auto stream = rng::substream(5, rng::Purpose::GainDrift, 2);
        for (int step = 0; step < 10000; ++step) {
            state = drift_antenna_gain(state, stream);
            CHECK(state.current[0] >= 0.01 * state.initial[0]);
        }
    }
}

TEST_CASE("array gain identity over a dense steering family") {
    auto stream = rng::substream(5, rng::Purpose::Instance, 1);
    std::vector<Codeword> family;
    family.reserve(720);
    for (int k = 0; k < 720; ++k) {
        family.push_back(steering_codeword(k * kPi / 720.0, kUla));
    }
    for (int rep = 0; rep < 5; ++rep) {
        const int pick = stream.uniform_int(720);
        const double theta = pick * kPi / 720.0;
        if (theta < 0.05 || theta > kPi - 0.05) continue;
        const double d = stream.uniform(0.5, 4.0);
        const double gain = stream.uniform(0.5, 2.0);
        const Point sensor{d * std::cos(theta), d * std::sin(theta)};
        const auto h = mean_channel(sensor, gain, {0.0, 0.0}, kUla);
        double best = 0.0;
        for (const auto& w : family) best = std::max(best, received_power(h, w));
        const double ideal = kUla.n_antennas * gain * gain / (d * d);
        CHECK(std::abs(best - ideal) / ideal <= 1e-9);
    }
}

TEST_CASE("boresight optimality within a codebook") {
    // "closest" is measured in cos space, the coordinate the pattern lives in
    auto stream = rng::substream(5, rng::Purpose::Instance, 2);
    for (const int m_size : {4, 12}) {
        const auto book = build_codebook(m_size, kUla);
        for (int rep = 0; rep < 200; ++rep) {
            const double theta = stream.uniform(0.02, kPi - 0.02);
            const Point sensor{2.0 * std::cos(theta), 2.0 * std::sin(theta)};
            const auto h = mean_channel(sensor, 1.0, {0.0, 0.0}, kUla);
            int best_power = 0;
            int best_cos = 0;
            double top_power = -1.0;
            double smallest_gap = std::numeric_limits<double>::infinity();
            for (int m = 0; m < book.size(); ++m) {
                const double p = received_power(h, book.entries[m]);
                if (p > top_power) {
                    top_power = p;
                    best_power = m;
                }
                const double gap =
                    std::abs(std::cos(book.entries[m].beam_angle) - std::cos(theta));
                if (gap < smallest_gap) {
                    smallest_gap = gap;
                    best_cos = m;
                }
            }
            CHECK(best_power == best_cos);
        }
    }
}

TEST_CASE("beam sector analysis") {
    const auto book = build_codebook(12, kUla);
    const auto& cw = book.entries[6];  // broadside
    const auto sector = analyze_beam_sector(cw, kUla, 3.0, cw.beam_angle, cw.beam_angle,
                                            cw.beam_angle, 2.0);
    CHECK(sector.theta01 < cw.beam_angle);
    CHECK(sector.theta02 > cw.beam_angle);
    CHECK(sector.thetae1 > sector.theta01);
    CHECK(sector.thetae1 < cw.beam_angle);
    CHECK(sector.thetae2 < sector.theta02);
    CHECK(sector.thetae2 > cw.beam_angle);
    // the 1/gamma crossings really sit at half the peak power
    const double peak = array_factor(cw, std::cos(cw.beam_angle), kUla);
    CHECK(array_factor(cw, std::cos(sector.thetae1), kUla) ==
          doctest::Approx(peak / 2.0).epsilon(1e-6));
    CHECK(array_factor(cw, std::cos(sector.thetae2), kUla) ==
          doctest::Approx(peak / 2.0).epsilon(1e-6));
    // pattern is essentially dead at the nulls
    CHECK(array_factor(cw, std::cos(sector.theta01), kUla) < 1e-6 * peak);
    CHECK(array_factor(cw, std::cos(sector.theta02), kUla) < 1e-6 * peak);
}
