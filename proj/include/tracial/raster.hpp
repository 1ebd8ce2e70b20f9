#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tracial/measure.hpp"

namespace tracial::raster {

struct Frame {
  double x0 = -1.0, x1 = 1.0;  // a range
  double y0 = -1.0, y1 = 1.0;  // b range
};

/// Density at pixel centres. Row 0 is the top (largest b); values[j * nx + i]
/// sits at a = x0 + (i + 1/2) dx, b = y1 - (j + 1/2) dy. +inf marks a centre on
/// a singular line.
struct RasterGrid {
  Frame frame;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  double a_at(int i) const { return frame.x0 + (i + 0.5) * (frame.x1 - frame.x0) / nx; }
  double b_at(int j) const { return frame.y1 - (j + 0.5) * (frame.y1 - frame.y0) / ny; }
};

/// The support square padded by 10%.
Frame default_frame(const measure::TracialMeasure& mu);

/// Min of hardware concurrency and TRACIAL_THREADS when set; at least 1.
int worker_count();

/// Rows are split across threads; the result does not depend on the count.
/// A centre exactly at the origin is assigned 0.
RasterGrid compute_raster(const measure::TracialMeasure& mu, const Frame& frame, int nx, int ny, int threads);

/// Header "# x0 x1 y0 y1 nx ny", then ny rows of nx values; %.17g and "inf"
/// make the round trip exact.
std::string to_csv(const RasterGrid& grid);
/// Throws ParseError.
RasterGrid parse_csv(const std::string& text);

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  std::uint8_t* at(int i, int j) { return &rgb[3 * (static_cast<std::size_t>(j) * width + i)]; }
  const std::uint8_t* at(int i, int j) const { return &rgb[3 * (static_cast<std::size_t>(j) * width + i)]; }
};

inline constexpr std::uint8_t kSegmentGreen[3] = {0, 170, 0};

/// Median of the positive finite values; 1 when there are none.
double median_positive(const std::vector<double>& values);

/// White -> red -> black through t = d / (d + q), q the median positive
/// density, +inf black; segments from the origin overdrawn in green.
Image colorize(const RasterGrid& grid, const std::vector<measure::SingularSegment>& segments);

/// Pixel nearest to the plane point (a, b).
std::pair<int, int> pixel_of(const RasterGrid& grid, double a, double b);

std::vector<std::uint8_t> encode_png(const Image& image);
/// Throws IOError.
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);
void write_file(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

}  // namespace tracial::raster
