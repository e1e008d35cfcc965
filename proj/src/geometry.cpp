#include "wptsim/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace wptsim::geometry {

namespace {

int divide_exact(double span, double epsilon, const char* what) {
    const double ratio = span / epsilon;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        throw ConfigError(std::string(what) +
                          " must be a positive integer multiple of epsilon");
    }
    return static_cast<int>(rounded);
}

}  // namespace

void Area::validate() const {
    if (!(width > 0.0) || !(height > 0.0)) {
        throw ConfigError("area dimensions must be positive");
    }
    if (!(epsilon > 0.0) || epsilon > std::min(width, height)) {
        throw ConfigError("epsilon must lie in (0, min(width, height)]");
    }
    divide_exact(width, epsilon, "area width");
    divide_exact(height, epsilon, "area height");
}

int Area::cells_x() const { return divide_exact(width, epsilon, "area width"); }
int Area::cells_y() const { return divide_exact(height, epsilon, "area height"); }

std::vector<GridLocation> build_grid(const Area& area) {
    area.validate();
    const int nx = area.cells_x();
    const int ny = area.cells_y();
    std::vector<GridLocation> grid;
    grid.reserve(static_cast<std::size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            GridLocation loc;
            loc.index = iy * nx + ix;
            loc.center = {(ix + 0.5) * area.epsilon, (iy + 0.5) * area.epsilon};
            grid.push_back(loc);
        }
    }
    return grid;
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double distance(const GridLocation& loc, Point sensor_pos) {
    return distance(loc.center, sensor_pos);
}

double discretization_ratio_bound(const BeamSectorGeometry& geom, double epsilon) {
    const double half_diag = std::numbers::sqrt2 * epsilon / 2.0;
    if (!(geom.d1 > half_diag)) {
        throw ModelError("charger and grid overlap: d1 <= sqrt(2)*epsilon/2");
    }
    if (!(geom.gamma >= 1.0)) {
        throw ModelError("in-beam power ratio gamma must be >= 1");
    }
    const double r = (geom.d1 + half_diag) / (geom.d1 - half_diag);
    return geom.gamma * r * r;
}

namespace {

// half_diag * sin(num) / sin(den). A vanishing denominator makes the
// stand-off unsatisfiable; a non-positive value makes it vacuous.
double standoff_term(double half_diag, double num, double den) {
    const double s = std::sin(den);
    if (std::abs(s) < 1e-12) return std::numeric_limits<double>::infinity();
    return half_diag * std::sin(num) / s;
}

}  // namespace

bool min_distance_ok(double d_prime, double epsilon, const BeamSectorGeometry& sector) {
    const double half_diag = std::numbers::sqrt2 * epsilon / 2.0;
    if (!(sector.d1 > half_diag)) return false;
    if (!(d_prime > 0.0)) return false;
    for (double a : {sector.theta01, sector.theta02, sector.thetae1, sector.thetae2}) {
        if (!std::isfinite(a)) return false;
    }
    const double quarter = std::numbers::pi / 4.0;
    const double b1 = standoff_term(half_diag, quarter - sector.theta01,
                                    sector.thetae1 - sector.theta01);
    const double b2 = standoff_term(half_diag, quarter + sector.theta02,
                                    sector.thetae2 - sector.theta02);
    return d_prime > b1 && d_prime > b2;
}

}  // namespace wptsim::geometry
