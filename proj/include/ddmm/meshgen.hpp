#ifndef DDMM_MESHGEN_HPP
#define DDMM_MESHGEN_HPP

#include "ddmm/mesh.hpp"

namespace ddmm {

/// Plate with symmetric triangular edge notches at mid-height, meshed by
/// transfinite interpolation between the notch line and the loaded edges;
/// layers are graded toward the ligament.
struct VnotchGeometry {
  double width = 200;          // mm
  double height = 200;         // mm
  double notch_depth = 40;     // mm
  double notch_half_open = 20; // mm, half opening at the edge
  int ns = 24;                 // columns (even, so a mid node exists)
  int nr = 8;                  // layers per half
  double grade = 1.5;          // layer grading exponent toward the ligament
};
Mesh generate_vnotch(const VnotchGeometry& g, MicroSymmetry sym = MicroSymmetry::Microstrain);

/// Rectangle with a central circular hole, meshed by rays from the hole ring
/// to the perimeter (perimeter nodes include the corners); radial layers are
/// graded toward the hole.
struct BiaxialGeometry {
  double width = 50;    // mm
  double height = 100;  // mm
  double hole_radius = 4;
  int side_a = 14;  // intervals along each horizontal edge (even)
  int side_b = 26;  // intervals along each vertical edge
  int nr = 10;      // radial layers
  double grade = 1.3;
};
Mesh generate_biaxial(const BiaxialGeometry& g, MicroSymmetry sym = MicroSymmetry::Microstrain);

}  // namespace ddmm

#endif
