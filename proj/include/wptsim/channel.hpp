#pragma once

#include <complex>
#include <span>
#include <vector>

#include "wptsim/common.hpp"
#include "wptsim/geometry.hpp"
#include "wptsim/rng.hpp"

namespace wptsim::channel {

inline constexpr double kSpeedOfLight = 299792458.0;

struct UlaConfig {
    int n_antennas = 8;
    double spacing_m = 0.1;
    double carrier_hz = 800e6;

    double wavelength() const { return kSpeedOfLight / carrier_hz; }
    void validate() const;
};

// Unit-norm beamforming weight vector steering toward beam_angle.
struct Codeword {
    std::vector<std::complex<double>> weights;
    double beam_angle = 0.0;
};

struct Codebook {
    std::vector<Codeword> entries;
    int size() const { return static_cast<int>(entries.size()); }
};

// Phase convention: weight n carries exp(-i 2pi n (spacing/lambda) cos(theta)),
// theta measured from the array axis in [0, pi). Patterns are mirror
// symmetric about the axis, so [pi, 2pi) adds nothing.
Codeword steering_codeword(double theta_m, const UlaConfig& ula);

// m_size codewords at angles k*pi/m_size, k = 0..m_size-1.
Codebook build_codebook(int m_size, const UlaConfig& ula);

// Deterministic channel vector: element magnitudes gain/d, phases conjugate
// matching a codeword steered at the same bearing. Throws ModelError at d=0.
std::vector<std::complex<double>> mean_channel(Point sensor_pos, double gain,
                                               Point charger_pos, const UlaConfig& ula);

struct ChannelDraw {
    std::vector<std::complex<double>> mean;
    std::complex<double> fade;  // scalar, E|fade|^2 = 1
    std::vector<std::complex<double>> realized;
};

// Rank-one fading: one complex Gaussian scalar multiplies the whole mean
// vector, so |fade|^2 ~ Exp(1) and the beam pattern shape is preserved.
ChannelDraw sample_csi(std::vector<std::complex<double>> mean, rng::Stream& rng);

// |h^T w|^2 (plain transpose, no conjugation).
double received_power(std::span<const std::complex<double>> h, const Codeword& w);

struct Contribution {
    std::vector<std::complex<double>> channel;
    const Codeword* codeword = nullptr;
};

// |sum_c h_c^T w_c|^2; coherent superposition, not a sum of powers.
double superposed_power(std::span<const Contribution> contributions);

// Mean received power under the unit-mean fade law: equals the deterministic
// power on the mean channel.
double expected_power(Point sensor_pos, double gain, Point charger_pos,
                      const Codeword& w, const UlaConfig& ula);

// min(p / p_ref, 1); p_ref must be positive.
double normalize_power(double p, double p_ref);

struct AntennaGainState {
    std::vector<double> initial;
    std::vector<double> current;
    double drift_rate = 0.05;
};

// Random-walk step: each gain moves by U(-rate*A0, +rate*A0), floored at
// 0.01*A0.
AntennaGainState drift_antenna_gain(const AntennaGainState& state, rng::Stream& rng);

// Angle from `from` toward `to`, folded into [0, pi].
double bearing(Point from, Point to);

// |<e(theta), w>|^2 with e_n = exp(+i 2pi n (spacing/lambda) cos_theta).
// Peaks at n_antennas for a matched steering codeword.
double array_factor(const Codeword& w, double cos_theta, const UlaConfig& ula);

// Numeric sector analysis around the codeword's beam direction: first
// pattern nulls (theta01/theta02) and the 1/gamma drop angles
// (thetae1/thetae2). Diagnostics for the discretization bound.
geometry::BeamSectorGeometry analyze_beam_sector(const Codeword& w, const UlaConfig& ula,
                                                 double d1, double theta1, double theta_l,
                                                 double theta_r, double gamma);

}  // namespace wptsim::channel
