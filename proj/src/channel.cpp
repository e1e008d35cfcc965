#include "wptsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wptsim::channel {

namespace {
constexpr double kPi = std::numbers::pi;
}

void UlaConfig::validate() const {
    if (n_antennas < 1) throw ConfigError("ULA needs at least one antenna");
    if (!(spacing_m > 0.0)) throw ConfigError("antenna spacing must be positive");
    if (!(carrier_hz > 0.0)) throw ConfigError("carrier frequency must be positive");
}

Codeword steering_codeword(double theta_m, const UlaConfig& ula) {
    ula.validate();
    const int n = ula.n_antennas;
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    const double k = 2.0 * kPi * ula.spacing_m / ula.wavelength() * std::cos(theta_m);
    Codeword w;
    w.beam_angle = theta_m;
    w.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        w.weights[i] = std::polar(amp, -k * i);
    }
    return w;
}

Codebook build_codebook(int m_size, const UlaConfig& ula) {
    if (m_size < 1) throw std::invalid_argument("codebook size must be >= 1");
    Codebook book;
    book.entries.reserve(m_size);
    for (int k = 0; k < m_size; ++k) {
        book.entries.push_back(steering_codeword(k * kPi / m_size, ula));
    }
    return book;
}

double bearing(Point from, Point to) {
    return std::abs(std::atan2(to.y - from.y, to.x - from.x));
}

std::vector<std::complex<double>> mean_channel(Point sensor_pos, double gain,
                                               Point charger_pos, const UlaConfig& ula) {
    ula.validate();
    const double d = geometry::distance(charger_pos, sensor_pos);
    if (!(d > 0.0)) throw ModelError("degenerate geometry: sensor coincides with charger");
    const double theta = bearing(charger_pos, sensor_pos);
    const double k = 2.0 * kPi * ula.spacing_m / ula.wavelength() * std::cos(theta);
    std::vector<std::complex<double>> h(ula.n_antennas);
    const double amp = gain / d;
    for (int i = 0; i < ula.n_antennas; ++i) {
        h[i] = std::polar(amp, k * i);
    }
    return h;
}

ChannelDraw sample_csi(std::vector<std::complex<double>> mean, rng::Stream& rng) {
    ChannelDraw draw;
    draw.fade = rng.cnormal_unit();
    draw.realized.resize(mean.size());
    for (std::size_t i = 0; i < mean.size(); ++i) {
        draw.realized[i] = draw.fade * mean[i];
    }
    draw.mean = std::move(mean);
    return draw;
}

double received_power(std::span<const std::complex<double>> h, const Codeword& w) {
    if (h.size() != w.weights.size()) {
        throw std::invalid_argument("channel/codeword dimension mismatch");
    }
    std::complex<double> y{0.0, 0.0};
    for (std::size_t i = 0; i < h.size(); ++i) {
        y += h[i] * w.weights[i];
    }
    return std::norm(y);
}

double superposed_power(std::span<const Contribution> contributions) {
    if (contributions.empty()) {
        throw std::invalid_argument("superposed_power needs at least one contribution");
    }
    std::complex<double> y{0.0, 0.0};
    for (const auto& c : contributions) {
        if (c.codeword == nullptr || c.channel.size() != c.codeword->weights.size()) {
            throw std::invalid_argument("contribution dimension mismatch");
        }
        for (std::size_t i = 0; i < c.channel.size(); ++i) {
            y += c.channel[i] * c.codeword->weights[i];
        }
    }
    return std::norm(y);
}

double expected_power(Point sensor_pos, double gain, Point charger_pos,
                      const Codeword& w, const UlaConfig& ula) {
    const auto h = mean_channel(sensor_pos, gain, charger_pos, ula);
    return received_power(h, w);
}

double normalize_power(double p, double p_ref) {
    if (!(p_ref > 0.0)) throw ConfigError("reference power must be positive");
    return std::min(p / p_ref, 1.0);
}

AntennaGainState drift_antenna_gain(const AntennaGainState& state, rng::Stream& rng) {
    AntennaGainState next = state;
    for (std::size_t i = 0; i < next.current.size(); ++i) {
        const double a0 = next.initial[i];
        const double step = rng.uniform(-state.drift_rate * a0, state.drift_rate * a0);
        next.current[i] = std::max(next.current[i] + step, 0.01 * a0);
    }
    return next;
}

double array_factor(const Codeword& w, double cos_theta, const UlaConfig& ula) {
    const double k = 2.0 * kPi * ula.spacing_m / ula.wavelength() * cos_theta;
    std::complex<double> y{0.0, 0.0};
    for (std::size_t i = 0; i < w.weights.size(); ++i) {
        y += w.weights[i] * std::polar(1.0, k * static_cast<double>(i));
    }
    return std::norm(y);
}

namespace {

// First local minimum of the pattern marching from theta_m toward `limit`.
double first_null(const Codeword& w, const UlaConfig& ula, double theta_m, double limit) {
    const double step = (limit > theta_m ? 1.0 : -1.0) * 1e-3;
    double prev = array_factor(w, std::cos(theta_m), ula);
    double theta = theta_m;
    while ((step > 0.0) ? (theta + step < limit) : (theta + step > limit)) {
        theta += step;
        const double cur = array_factor(w, std::cos(theta), ula);
        if (cur > prev) {
            // bracket [theta - 2*step, theta]; ternary refine the minimum
            double lo = theta - 2.0 * step;
            double hi = theta;
            if (lo > hi) std::swap(lo, hi);
            for (int it = 0; it < 80; ++it) {
                const double m1 = lo + (hi - lo) / 3.0;
                const double m2 = hi - (hi - lo) / 3.0;
                if (array_factor(w, std::cos(m1), ula) <
                    array_factor(w, std::cos(m2), ula)) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            return 0.5 * (lo + hi);
        }
        prev = cur;
    }
    return limit;
}

// Angle between theta_m and "edge" where the pattern crosses peak/gamma.
double gamma_crossing(const Codeword& w, const UlaConfig& ula, double theta_m,
                      double edge, double target) {
    double lo = theta_m;  // pattern >= target here
    double hi = edge;     // pattern <= target here (null or boundary)
    if (array_factor(w, std::cos(hi), ula) > target) return hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (array_factor(w, std::cos(mid), ula) >= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

geometry::BeamSectorGeometry analyze_beam_sector(const Codeword& w, const UlaConfig& ula,
                                                 double d1, double theta1, double theta_l,
                                                 double theta_r, double gamma) {
    geometry::BeamSectorGeometry sector;
    sector.d1 = d1;
    sector.theta1 = theta1;
    sector.theta_m = w.beam_angle;
    sector.theta_l = theta_l;
    sector.theta_r = theta_r;
    sector.gamma = gamma;
    sector.theta01 = first_null(w, ula, w.beam_angle, 0.0);
    sector.theta02 = first_null(w, ula, w.beam_angle, kPi);
    const double target = array_factor(w, std::cos(w.beam_angle), ula) / gamma;
    sector.thetae1 = gamma_crossing(w, ula, w.beam_angle, sector.theta01, target);
    sector.thetae2 = gamma_crossing(w, ula, w.beam_angle, sector.theta02, target);
    return sector;
}

}  // namespace wptsim::channel
