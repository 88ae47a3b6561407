#pragma once

#include <vector>

#include "levygen/types.hpp"

namespace levygen {

/// Point of a quadrature rule on the unit sphere S^{d-1}.
struct SphereNode {
  Vector direction;
  double weight;   // surface measure carried by the node
  int antipode;    // index of the node at -direction, or -1
};

/// Surface area of S^{d-1}.
double sphere_area(int d);

/// Quadrature rule on S^{d-1} whose weights sum to sphere_area(d).
/// d=1: {+1,-1}; d=2: 64 equal angles; d=3: Gauss-Legendre(10) in the polar
/// cosine times 20 equal azimuths; d>3: 128 quasi-random directions plus
/// their antipodes with equal weights. Every rule is closed under x -> -x.
const std::vector<SphereNode>& sphere_rule(int d);

/// Well-spread probe directions (not a quadrature rule). d=1 gives {+1,-1};
/// d=2 equal angles; d=3 a Fibonacci lattice; d>3 quasi-random normals.
std::vector<Vector> probe_directions(int d, int count);

/// Van der Corput radical inverse, used for quasi-random directions.
double radical_inverse(unsigned long i, unsigned base);

}  // namespace levygen
