#include "tracial/raster.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <png.h>

#include "tracial/errors.hpp"

namespace tracial::raster {

namespace {

std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_value(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::ParseError, "bad raster value '" + std::string(s) + "'");
  return v;
}

std::vector<double> split_values(const std::string& line) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    const std::size_t end = std::min(line.find(',', start), line.size());
    out.push_back(parse_value(std::string_view(line).substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

void blend_colormap(double t, std::uint8_t* px) {
  // t in [0, 1]: white at 0, red at 1/2, black at 1.
  t = std::clamp(t, 0.0, 1.0);
  if (t <= 0.5) {
    const auto g = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - 2.0 * t)));
    px[0] = 255;
    px[1] = g;
    px[2] = g;
  } else {
    px[0] = static_cast<std::uint8_t>(std::lround(255.0 * (2.0 - 2.0 * t)));
    px[1] = 0;
    px[2] = 0;
  }
}

void png_append(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

}  // namespace

Frame default_frame(const measure::TracialMeasure& mu) {
  const double r = 1.1 * std::max(mu.support_radius(), 1e-12);
  return {-r, r, -r, r};
}

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("TRACIAL_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

RasterGrid compute_raster(const measure::TracialMeasure& mu, const Frame& frame, int nx, int ny, int threads) {
  if (nx < 1 || ny < 1) throw Error(ErrorCode::InvalidArgument, "raster needs positive pixel counts");
  RasterGrid g{frame, nx, ny, std::vector<double>(static_cast<std::size_t>(nx) * ny, 0.0)};
  auto rows = [&](int first, int stride) {
    for (int j = first; j < ny; j += stride)
      for (int i = 0; i < nx; ++i) {
        const double a = g.a_at(i), b = g.b_at(j);
        g.values[static_cast<std::size_t>(j) * nx + i] = (a == 0.0 && b == 0.0) ? 0.0 : mu.density(a, b);
      }
  };
  const int workers = std::clamp(threads, 1, ny);
  if (workers == 1) {
    rows(0, 1);
    return g;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(rows, w, workers);
  for (auto& t : pool) t.join();
  return g;
}

std::string to_csv(const RasterGrid& grid) {
  std::string out = "# x0 x1 y0 y1 nx ny\n# ";
  out += format_value(grid.frame.x0) + "," + format_value(grid.frame.x1) + "," + format_value(grid.frame.y0) + "," +
         format_value(grid.frame.y1) + "," + std::to_string(grid.nx) + "," + std::to_string(grid.ny) + "\n";
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      if (i) out += ',';
      out += format_value(grid.values[static_cast<std::size_t>(j) * grid.nx + i]);
    }
    out += '\n';
  }
  return out;
}

RasterGrid parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> spec;
  RasterGrid g;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      std::replace(body.begin(), body.end(), ' ', ',');
      body.erase(0, body.find_first_not_of(','));
      if (body.empty() || std::isalpha(static_cast<unsigned char>(body[0]))) continue;  // column names
      spec = split_values(body);
      continue;
    }
    if (spec.size() != 6) throw Error(ErrorCode::ParseError, "raster header must give x0 x1 y0 y1 nx ny");
    const auto row = split_values(line);
    g.values.insert(g.values.end(), row.begin(), row.end());
  }
  if (spec.size() != 6) throw Error(ErrorCode::ParseError, "raster header missing");
  g.frame = {spec[0], spec[1], spec[2], spec[3]};
  g.nx = static_cast<int>(spec[4]);
  g.ny = static_cast<int>(spec[5]);
  if (g.nx < 1 || g.ny < 1 || g.values.size() != static_cast<std::size_t>(g.nx) * g.ny)
    throw Error(ErrorCode::ParseError, "raster size does not match its header");
  for (double v : g.values)
    if (!(v >= 0.0)) throw Error(ErrorCode::ParseError, "raster values must be nonnegative");
  return g;
}

double median_positive(const std::vector<double>& values) {
  std::vector<double> pos;
  for (double v : values)
    if (v > 0.0 && std::isfinite(v)) pos.push_back(v);
  if (pos.empty()) return 1.0;
  const auto mid = pos.begin() + static_cast<std::ptrdiff_t>(pos.size() / 2);
  std::nth_element(pos.begin(), mid, pos.end());
  return *mid;
}

std::pair<int, int> pixel_of(const RasterGrid& grid, double a, double b) {
  const auto& f = grid.frame;
  const int i = static_cast<int>(std::floor((a - f.x0) / (f.x1 - f.x0) * grid.nx));
  const int j = static_cast<int>(std::floor((f.y1 - b) / (f.y1 - f.y0) * grid.ny));
  return {std::clamp(i, 0, grid.nx - 1), std::clamp(j, 0, grid.ny - 1)};
}

Image colorize(const RasterGrid& grid, const std::vector<measure::SingularSegment>& segments) {
  Image img{grid.nx, grid.ny, std::vector<std::uint8_t>(3 * static_cast<std::size_t>(grid.nx) * grid.ny)};
  const double q = median_positive(grid.values);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const double d = grid.values[static_cast<std::size_t>(j) * grid.nx + i];
      blend_colormap(std::isinf(d) ? 1.0 : d / (d + q), img.at(i, j));
    }
  const double dx = (grid.frame.x1 - grid.frame.x0) / grid.nx;
  const double dy = (grid.frame.y1 - grid.frame.y0) / grid.ny;
  for (const auto& s : segments) {
    // Quarter-pixel steps visit every pixel the segment passes through.
    const double len = std::max(std::abs(s.alpha) / dx, std::abs(s.beta) / dy);
    const int steps = std::max(1, static_cast<int>(std::ceil(4.0 * len)));
    for (int k = 0; k <= steps; ++k) {
      const double t = static_cast<double>(k) / steps;
      const auto [i, j] = pixel_of(grid, s.alpha * t, s.beta * t);
      std::copy(kSegmentGreen, kSegmentGreen + 3, img.at(i, j));
    }
  }
  return img;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error(ErrorCode::IOError, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IOError, "PNG encoding failed");
  }
  png_set_write_fn(png, &out, png_append, nullptr);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int j = 0; j < image.height; ++j)
    png_write_row(png, const_cast<png_bytep>(image.at(0, j)));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IOError, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IOError, "write failed for " + path);
}

void write_file(const std::string& path, const std::string& text) {
  write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IOError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tracial::raster
