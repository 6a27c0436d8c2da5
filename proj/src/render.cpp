#include "expchaos/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

namespace expchaos {

namespace {

// Runs row(y) for every row, rows dealt round-robin across workers.
void for_rows(int height, int threads, const std::function<void(int)>& row) {
  const int n = std::clamp(threads, 1, std::max(1, height));
  if (n == 1) {
    for (int y = 0; y < height; ++y) row(y);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (int w = 0; w < n; ++w)
    pool.emplace_back([=, &row] {
      for (int y = w; y < height; y += n) row(y);
    });
  for (auto& t : pool) t.join();
}

int first_crossing(const OrbitRecord& rec, double threshold) {
  for (std::size_t k = 1; k < rec.points.size(); ++k) {
    const double re = rec.points[k].real();
    if (re > threshold || std::isinf(re) || std::isnan(re)) return static_cast<int>(k);
  }
  // A stop on overflow means the next real part is beyond any threshold.
  if (rec.overflow_step > 0) return rec.overflow_step;
  return 0;
}

}  // namespace

void GridSpec::validate() const {
  if (!(re_min < re_max) || !(im_min < im_max) || !std::isfinite(re_min) ||
      !std::isfinite(re_max) || !std::isfinite(im_min) || !std::isfinite(im_max))
    throw Error(ErrorCode::InvalidArgument, "grid needs re_min < re_max and im_min < im_max");
  if (width < 1 || height < 1) throw Error(ErrorCode::InvalidArgument, "grid needs positive size");
}

Complex GridSpec::pixel_center(int x, int y) const {
  const double re = re_min + (x + 0.5) * (re_max - re_min) / width;
  const double im = im_max - (y + 0.5) * (im_max - im_min) / height;
  return {re, im};
}

Palette parse_palette(const std::string& s) {
  if (s == "grayscale") return Palette::Grayscale;
  if (s == "classification") return Palette::Classification;
  throw Error(ErrorCode::InvalidArgument, "unknown palette '" + s + "'");
}

std::string Image::to_ppm() const {
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(rgb.data()), rgb.size());
  return out;
}

void Image::write_ppm(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  const std::string bytes = to_ppm();
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

std::array<std::uint8_t, 3> class_color(OrbitClass c) noexcept {
  switch (c) {
    case OrbitClass::EscapingCertified: return {255, 200, 40};
    case OrbitClass::EscapingHeuristic: return {230, 90, 30};
    case OrbitClass::PeriodicDetected: return {40, 120, 255};
    case OrbitClass::Unresolved: return {20, 20, 20};
    case OrbitClass::Overflowed: return {200, 30, 160};
  }
  return {0, 0, 0};
}

std::uint8_t crossing_gray(int step, int max_steps) noexcept {
  if (step <= 0 || max_steps <= 0) return 0;
  const double frac = static_cast<double>(max_steps - std::min(step, max_steps) + 1) / max_steps;
  return static_cast<std::uint8_t>(std::lround(255.0 * frac));
}

Image render_escape_map(const GridSpec& grid, const RenderParams& params) {
  grid.validate();
  if (params.max_steps < 1) throw Error(ErrorCode::InvalidArgument, "max_steps must be >= 1");
  ClassifyParams cp;
  cp.escape_re_threshold = params.escape_re_threshold;
  Image img{grid.width, grid.height,
            std::vector<std::uint8_t>(static_cast<std::size_t>(grid.width) * grid.height * 3)};
  for_rows(grid.height, params.threads, [&](int y) {
    for (int x = 0; x < grid.width; ++x) {
      const OrbitRecord rec = iterate(grid.pixel_center(x, y), params.max_steps, cp);
      std::array<std::uint8_t, 3> px;
      if (params.palette == Palette::Classification) {
        px = class_color(rec.classification.kind);
      } else {
        const std::uint8_t g = crossing_gray(first_crossing(rec, params.escape_re_threshold),
                                             params.max_steps);
        px = {g, g, g};
      }
      const std::size_t at = (static_cast<std::size_t>(y) * grid.width + x) * 3;
      std::copy(px.begin(), px.end(), img.rgb.begin() + at);
    }
  });
  return img;
}

Image render_density_map(HyperbolicDomain domain, const GridSpec& grid, int threads) {
  grid.validate();
  const std::size_t n = static_cast<std::size_t>(grid.width) * grid.height;
  std::vector<double> logd(n, NAN);
  for_rows(grid.height, threads, [&](int y) {
    for (int x = 0; x < grid.width; ++x) {
      const Complex z = grid.pixel_center(x, y);
      if (!in_domain(domain, z)) continue;
      const double d = density(domain, z);
      if (std::isfinite(d) && d > 0.0) logd[static_cast<std::size_t>(y) * grid.width + x] = std::log(d);
    }
  });
  double lo = INFINITY, hi = -INFINITY;
  for (double v : logd)
    if (!std::isnan(v)) { lo = std::min(lo, v); hi = std::max(hi, v); }
  Image img{grid.width, grid.height, std::vector<std::uint8_t>(n * 3, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(logd[i])) continue;
    // In-domain pixels start at 1 so they never read as outside.
    const double frac = hi > lo ? (logd[i] - lo) / (hi - lo) : 1.0;
    const auto g = static_cast<std::uint8_t>(1 + std::lround(254.0 * frac));
    img.rgb[3 * i] = img.rgb[3 * i + 1] = img.rgb[3 * i + 2] = g;
  }
  return img;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace expchaos
