#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wptsim/oracle.hpp"

namespace wptsim::oracle {

namespace {

// Objective and gradient of the continuous relaxation. Energies are affine
// in the allocation and the battery cap is dropped, so the objective is
// concave on {t >= 0, sum t <= t_c}.
struct Relaxation {
    const ExpectedPowerMatrix& powers;
    const energy::UtilitySpec& spec;
    double capacity;
    std::vector<double> residual;  // uncharged end-of-round energy per sensor

    double sensor_sigma(std::span<const double> t, int i) const {
        double q = residual[i];
        for (int j = 0; j < powers.n_policies; ++j) {
            q += t[j] * powers.at(j, i);
        }
        return q / capacity;
    }

    double objective(std::span<const double> t) const {
        double v = 0.0;
        for (int i = 0; i < powers.n_sensors; ++i) {
            v += spec.value(sensor_sigma(t, i)) - spec.value(residual[i] / capacity);
        }
        return v;
    }

    void gradient(std::span<const double> t, std::vector<double>& grad) const {
        std::vector<double> du(powers.n_sensors);
        for (int i = 0; i < powers.n_sensors; ++i) {
            du[i] = spec.derivative(sensor_sigma(t, i)) / capacity;
        }
        for (int j = 0; j < powers.n_policies; ++j) {
            double g = 0.0;
            const auto row = powers.row(j);
            for (int i = 0; i < powers.n_sensors; ++i) {
                g += du[i] * row[i];
            }
            grad[j] = g;
        }
    }
};

}  // namespace

P1Result upper_bound_p1(const ExpectedPowerMatrix& powers, std::span<const double> initial,
                        const energy::UtilitySpec& spec, double capacity, double t_c,
                        double zeta) {
    powers.validate();
    if (!(t_c > 0.0)) throw std::invalid_argument("t_c must be positive");
    if (!(capacity > 0.0)) throw std::invalid_argument("capacity must be positive");
    if (static_cast<int>(initial.size()) != powers.n_sensors) {
        throw std::invalid_argument("initial energy length mismatch");
    }

    Relaxation relax{powers, spec, capacity, {}};
    relax.residual.reserve(initial.size());
    for (double x : initial) {
        const double rate = energy::consumption_rate(x, zeta, t_c);
        relax.residual.push_back(std::max(x - rate * t_c, 0.0));
    }

    const int n = powers.n_policies;
    constexpr int kMaxIters = 10000;
    constexpr double kRelGap = 1e-6;

    // Vertices: the origin plus t_c * e_j. Vertex -1 denotes the origin.
    std::vector<double> t(n, 0.0);
    std::vector<double> weight(n, 0.0);  // simplex weight of each t_c*e_j vertex
    double origin_weight = 1.0;

    std::vector<double> grad(n);
    std::vector<double> direction(n);

    double best_obj = 0.0;  // objective at the origin
    std::vector<double> best_t(n, 0.0);
    double certified = std::numeric_limits<double>::infinity();
    int iter = 0;
    double gap = std::numeric_limits<double>::infinity();

    for (; iter < kMaxIters; ++iter) {
        relax.gradient(t, grad);
        const double cur_obj = relax.objective(t);
        if (cur_obj > best_obj) {
            best_obj = cur_obj;
            best_t = t;
        }

        // Toward vertex: maximize <grad, v> over vertices.
        int fw = -1;  // origin
        double fw_val = 0.0;
        for (int j = 0; j < n; ++j) {
            const double v = grad[j] * t_c;
            if (v > fw_val) {
                fw_val = v;
                fw = j;
            }
        }
        double grad_dot_t = 0.0;
        for (int j = 0; j < n; ++j) grad_dot_t += grad[j] * t[j];
        gap = fw_val - grad_dot_t;
        certified = std::min(certified, cur_obj + std::max(gap, 0.0));
        if (gap <= kRelGap * std::max(1.0, std::abs(cur_obj))) break;

        // Away vertex: the worst active one.
        int away = -1;
        double away_val = origin_weight > 0.0 ? 0.0
                                              : std::numeric_limits<double>::infinity();
        bool away_found = origin_weight > 0.0;
        for (int j = 0; j < n; ++j) {
            if (weight[j] <= 0.0) continue;
            const double v = grad[j] * t_c;
            if (!away_found || v < away_val) {
                away_val = v;
                away = j;
                away_found = true;
            }
        }

        bool away_step = false;
        double gamma_max = 1.0;
        if (away_found && (away_val < grad_dot_t)) {
            const double away_gap = grad_dot_t - away_val;
            if (away_gap > gap) {
                const double alpha = (away == -1) ? origin_weight : weight[away];
                if (alpha < 1.0) {
                    away_step = true;
                    gamma_max = alpha / (1.0 - alpha);
                }
            }
        }

        if (away_step) {
            // d = t - v_away
            for (int j = 0; j < n; ++j) direction[j] = t[j];
            if (away >= 0) direction[away] -= t_c;
        } else {
            for (int j = 0; j < n; ++j) direction[j] = -t[j];
            if (fw >= 0) direction[fw] += t_c;
            gamma_max = 1.0;
        }

        // Exact line search on the concave 1-D slice via derivative bisection;
        // sigma is affine in the step, so each probe costs O(n_sensors).
        std::vector<double> proj(powers.n_sensors, 0.0);
        std::vector<double> base(powers.n_sensors, 0.0);
        for (int i = 0; i < powers.n_sensors; ++i) {
            double b = 0.0;
            for (int j = 0; j < n; ++j) b += direction[j] * powers.at(j, i);
            proj[i] = b / capacity;
            base[i] = relax.sensor_sigma(t, i);
        }
        auto slice_deriv = [&](double g) {
            double d = 0.0;
            for (int i = 0; i < powers.n_sensors; ++i) {
                d += spec.derivative(base[i] + g * proj[i]) * proj[i];
            }
            return d;
        };
        double step = gamma_max;
        if (slice_deriv(gamma_max) < 0.0) {
            double lo = 0.0;
            double hi = gamma_max;
            for (int it2 = 0; it2 < 64; ++it2) {
                const double mid = 0.5 * (lo + hi);
                if (slice_deriv(mid) >= 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            step = 0.5 * (lo + hi);
        }

        for (int j = 0; j < n; ++j) t[j] += step * direction[j];
        if (away_step) {
            const double scale = 1.0 + step;
            origin_weight *= scale;
            for (int j = 0; j < n; ++j) weight[j] *= scale;
            if (away == -1) {
                origin_weight -= step;
            } else {
                weight[away] -= step;
            }
        } else {
            const double scale = 1.0 - step;
            origin_weight *= scale;
            for (int j = 0; j < n; ++j) weight[j] *= scale;
            if (fw == -1) {
                origin_weight += step;
            } else {
                weight[fw] += step;
            }
        }
        origin_weight = std::max(origin_weight, 0.0);
        for (int j = 0; j < n; ++j) weight[j] = std::max(weight[j], 0.0);

        // Keep the iterate feasible against weight drift.
        double total = 0.0;
        for (double v : t) total += std::max(v, 0.0);
        if (total > t_c) {
            const double shrink = t_c / total;
            for (auto& v : t) v = std::max(v, 0.0) * shrink;
        } else {
            for (auto& v : t) v = std::max(v, 0.0);
        }
    }

    const double final_obj = relax.objective(t);
    if (final_obj > best_obj) {
        best_obj = final_obj;
        best_t = t;
    }
    certified = std::min(certified, final_obj + std::max(gap, 0.0));

    P1Result result;
    result.allocation.t = std::move(best_t);
    result.objective = best_obj;
    result.upper_bound = std::max(certified, best_obj);
    result.gap = gap;
    result.iterations = iter;
    return result;
}

}  // namespace wptsim::oracle
