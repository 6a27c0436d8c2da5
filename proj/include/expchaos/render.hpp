#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "expchaos/dynamics.hpp"
#include "expchaos/hyperbolic.hpp"

namespace expchaos {

struct GridSpec {
  double re_min = -3.0, re_max = 3.0;
  double im_min = -3.0, im_max = 3.0;
  int width = 64, height = 64;

  void validate() const;  // InvalidArgument on an empty or inverted grid
  // Pixel (0,0) is the top-left corner (re_min, im_max); samples at pixel centers.
  Complex pixel_center(int x, int y) const;
};

enum class Palette { Grayscale, Classification };

Palette parse_palette(const std::string& s);

struct RenderParams {
  int max_steps = 40;
  double escape_re_threshold = 50.0;
  Palette palette = Palette::Grayscale;
  int threads = 1;  // rows are dealt out round-robin; output does not depend on this
};

struct Image {
  int width = 0, height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  std::string to_ppm() const;  // binary P6, maxval 255
  void write_ppm(const std::string& path) const;
};

// Classification palette.
//   EscapingCertified  255 200  40
//   EscapingHeuristic  230  90  30
//   PeriodicDetected    40 120 255
//   Unresolved          20  20  20
//   Overflowed         200  30 160
std::array<std::uint8_t, 3> class_color(OrbitClass c) noexcept;

// Gray level for the first step whose real part passes the threshold;
// step 1 is white, max_steps is darkest, never crossing is black.
std::uint8_t crossing_gray(int step, int max_steps) noexcept;

Image render_escape_map(const GridSpec& grid, const RenderParams& params);

// Grayscale of log density normalized over the in-domain pixels; pixels
// outside the domain are black.
Image render_density_map(HyperbolicDomain domain, const GridSpec& grid, int threads = 1);

// FNV-1a over the bytes, hex encoded. Used for golden comparisons.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace expchaos
