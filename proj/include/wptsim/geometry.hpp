#pragma once

#include <vector>

#include "wptsim/common.hpp"

namespace wptsim::geometry {

// Rectangular field divided into square cells of edge `epsilon`. Width and
// height must be integer multiples of epsilon.
struct Area {
    double width = 0.0;
    double height = 0.0;
    double epsilon = 0.0;

    void validate() const;  // throws ConfigError
    int cells_x() const;
    int cells_y() const;
};

struct GridLocation {
    int index = 0;
    Point center{};
};

// Cell centers in row-major order (x fastest), indices dense in [0, count).
std::vector<GridLocation> build_grid(const Area& area);

double distance(Point a, Point b);
double distance(const GridLocation& loc, Point sensor_pos);

// One beam over one grid cell, in polar coordinates centered on the charger.
// theta01/theta02 bound the main lobe, thetae1/thetae2 are the directions
// where the pattern drops to 1/gamma of its peak. The derived angles come
// from the array-factor analysis in the channel module and feed only the
// stand-off check below.
struct BeamSectorGeometry {
    double d1 = 0.0;       // charger to cell center
    double theta1 = 0.0;   // bearing of the cell center
    double theta_m = 0.0;  // main beam direction
    double theta_l = 0.0;  // cell corner bearings
    double theta_r = 0.0;
    double gamma = 2.0;    // in-beam peak/edge power ratio
    double theta01 = 0.0;
    double theta02 = 0.0;
    double thetae1 = 0.0;
    double thetae2 = 0.0;
};

// Worst-case in-cell max/min power ratio gamma * (d1 + s)^2 / (d1 - s)^2
// with s = sqrt(2)*epsilon/2. Throws ModelError when the charger sits inside
// the cell (d1 <= s) or gamma < 1.
double discretization_ratio_bound(const BeamSectorGeometry& geom, double epsilon);

// True when the charger-to-sensor distance clears both law-of-sines
// stand-off bounds of the sector and the charger is outside the cell.
bool min_distance_ok(double d_prime, double epsilon, const BeamSectorGeometry& sector);

}  // namespace wptsim::geometry
