#include "sgsim/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "sgsim/format.hpp"

namespace sgsim {
namespace {

void write_p5(std::ostream& out, std::size_t width, std::size_t height,
              const std::vector<std::uint8_t>& pixels) {
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
}

std::uint8_t grey(double fraction) {
  const double v = std::clamp(fraction, 0.0, 1.0) * 255.0;
  return static_cast<std::uint8_t>(std::lround(v));
}

}  // namespace

void write_report_csv(std::ostream& out, std::span<const ReportRow> rows) {
  out << "scenario_id,gradient,voltage,splitting_m,lorentz_deflection_m,resolved,"
         "exit_splitting_m,standard_error_m,lost\n";
  for (const auto& r : rows) {
    const auto& s = r.report;
    out << r.scenario_id << ',' << format_double(r.gradient) << ',' << format_double(r.voltage)
        << ',' << format_double(s.splitting) << ',' << format_double(s.lorentz_deflection) << ','
        << (s.resolved ? "true" : "false") << ',' << format_double(s.exit_splitting) << ','
        << format_double(s.standard_error) << ',' << s.lost << '\n';
  }
}

void write_hits_csv(std::ostream& out, const ScreenImage& image) {
  out << "index,y,z,spin_sign\n";
  std::size_t i = 0;
  for (const auto& h : image.hits) {
    out << i++ << ',' << format_double(h.y) << ',' << format_double(h.z) << ','
        << static_cast<int>(h.spin) << '\n';
  }
}

void write_screen_pgm(std::ostream& out, const ScreenImage& image) {
  const std::uint64_t peak =
      image.counts.empty() ? 0 : *std::max_element(image.counts.begin(), image.counts.end());
  std::vector<std::uint8_t> px(image.bins_y * image.bins_z, 0);
  for (std::size_t row = 0; row < image.bins_z; ++row) {
    const std::size_t iz = image.bins_z - 1 - row;
    for (std::size_t iy = 0; iy < image.bins_y; ++iy) {
      const double f = peak ? static_cast<double>(image.count(iy, iz)) / static_cast<double>(peak) : 0.0;
      px[row * image.bins_y + iy] = grey(f);
    }
  }
  write_p5(out, image.bins_y, image.bins_z, px);
}

void write_fieldmap_csv(std::ostream& out, const InhomogeneityMap& map) {
  out << "y,z,H,B,dBdz,epsilon\n";
  for (const auto& p : map.points) {
    out << format_double(p.y) << ',' << format_double(p.z) << ',' << format_double(p.h) << ','
        << format_double(p.b) << ',' << format_double(p.dbdz) << ',' << format_double(p.epsilon)
        << '\n';
  }
}

void write_fieldmap_pgm(std::ostream& out, const InhomogeneityMap& map) {
  double lo = 0.0;
  double hi = 0.0;
  if (!map.points.empty()) {
    const auto [mn, mx] = std::minmax_element(
        map.points.begin(), map.points.end(),
        [](const MapPoint& a, const MapPoint& b) { return a.grad_b < b.grad_b; });
    lo = mn->grad_b;
    hi = mx->grad_b;
  }
  std::vector<std::uint8_t> px(map.ny * map.nz, 0);
  for (std::size_t row = 0; row < map.nz; ++row) {
    const std::size_t iz = map.nz - 1 - row;
    for (std::size_t iy = 0; iy < map.ny; ++iy) {
      const double f = hi > lo ? (map.at(iy, iz).grad_b - lo) / (hi - lo) : 0.0;
      px[row * map.ny + iy] = grey(f);
    }
  }
  write_p5(out, map.ny, map.nz, px);
}

}  // namespace sgsim
