#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sgsim/config.hpp"
#include "sgsim/format.hpp"
#include "sgsim/io.hpp"
#include "sgsim/kinematics.hpp"

namespace sgsim {
namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

void finish(std::ofstream& f, const fs::path& path) {
  f.flush();
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

template <class Writer>
void write_file(const fs::path& path, bool binary, Writer&& writer) {
  auto f = open_output(path, binary);
  writer(f);
  finish(f, path);
}

void write_manifest(const fs::path& dir, Command command, const Params& params) {
  write_file(dir / "manifest.txt", false, [&](std::ostream& o) {
    o << "# sgsim run manifest; reproduce with: sgsim " << command_name(command)
      << " --config manifest.txt\n";
    o << "# command: " << command_name(command) << '\n';
    o << render(params);
  });
}

RunOptions run_options(const Params& p) { return {p.screen, p.threads}; }

void cmd_table1(const fs::path& dir, std::ostream& out) {
  const auto rows = table_1();
  write_file(dir / "table1.csv", false, [&](std::ostream& o) { write_table_csv(o, rows); });
  out << "wrote " << (dir / "table1.csv").string() << " (" << rows.size() << " rows)\n";
}

void cmd_fieldmap(const fs::path& dir, const Params& p, std::ostream& out) {
  const auto cfg = make_two_wire(p);
  const double a = cfg.half_separation;
  const GridRange window = radiation_window(a);
  const GridRange y{p.map_y_min.value_or(window.min), p.map_y_max.value_or(window.max)};
  const GridRange z{p.map_z_min.value_or(-0.5 * a), p.map_z_max.value_or(0.5 * a)};
  const auto map = inhomogeneity_map(cfg, y, z, p.map_ny, p.map_nz);
  write_file(dir / "fieldmap.csv", false, [&](std::ostream& o) { write_fieldmap_csv(o, map); });
  write_file(dir / "fieldmap.pgm", true, [&](std::ostream& o) { write_fieldmap_pgm(o, map); });
  const auto plane = constant_inhomogeneity_plane(a);
  out << "two-wire map " << p.map_ny << "x" << p.map_nz << ": z0 = " << format_double(cfg.z_offset)
      << " m, epsilon(0,0) = " << format_double(epsilon_profile(cfg, 0.0, 0.0))
      << " (ideal " << format_double(plane.epsilon) << ")\n";
}

void cmd_scenario(const fs::path& dir, const Params& p, std::ostream& out) {
  const auto model = make_force_model(p);
  const auto integrator = make_integrator(p);
  const auto result = run_scenario(p.beam, p.geometry, model, integrator, run_options(p));
  const double g = std::holds_alternative<IdealGradientField>(model.field)
                       ? std::get<IdealGradientField>(model.field).gradient
                       : 0.0;
  const ReportRow row{"scenario", g, p.beam.voltage, result.report};
  write_file(dir / "report.csv", false, [&](std::ostream& o) { write_report_csv(o, {&row, 1}); });
  write_file(dir / "screen.pgm", true, [&](std::ostream& o) { write_screen_pgm(o, result.image); });
  write_file(dir / "hits.csv", false, [&](std::ostream& o) { write_hits_csv(o, result.image); });
  if (p.trajectory_count > 0) {
    const auto beam = generate_beam(p.beam, p.geometry.gun_exit_x);
    write_file(dir / "trajectories.csv", false, [&](std::ostream& o) {
      o << "electron,t,x,y,z,vx,vy,vz,spin_sign\n";
      for (std::size_t i = 0; i < std::min(p.trajectory_count, beam.size()); ++i) {
        ElectronState entry = beam[i];
        entry.position += entry.velocity *
                          ((p.geometry.magnet_entry_x - entry.position.x) / entry.velocity.x);
        std::ostringstream rows;
        write_trajectory_csv(rows, entry, model, integrator, p.geometry.magnet_exit_x,
                             p.trajectory_stride, false);
        std::istringstream lines(rows.str());
        for (std::string line; std::getline(lines, line);) o << i << ',' << line << '\n';
      }
    });
  }
  const auto& r = result.report;
  out << "splitting " << format_double(r.splitting) << " m at screen, "
      << format_double(r.exit_splitting) << " m at magnet exit; Lorentz deflection "
      << format_double(r.lorentz_deflection) << " m; resolved " << (r.resolved ? "yes" : "no")
      << "; lost " << r.lost << '\n';
}

void cmd_gradient_sweep(const fs::path& dir, const Params& p, std::ostream& out) {
  const auto reports = gradient_sweep(p.beam, p.geometry, make_force_model(p), p.gradients,
                                      make_integrator(p), run_options(p));
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    rows.push_back({"g" + std::to_string(i), p.gradients[i], p.beam.voltage, reports[i]});
  }
  write_file(dir / "report.csv", false, [&](std::ostream& o) { write_report_csv(o, rows); });
  out << "gradient sweep: " << rows.size() << " scenarios\n";
}

void cmd_voltage_sweep(const fs::path& dir, const Params& p, std::ostream& out) {
  const auto model = make_force_model(p);
  const auto reports = voltage_sweep(p.beam, p.voltages, p.geometry, model, make_integrator(p),
                                     run_options(p));
  const double g = std::holds_alternative<IdealGradientField>(model.field)
                       ? std::get<IdealGradientField>(model.field).gradient
                       : 0.0;
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    rows.push_back({"v" + std::to_string(i), g, p.voltages[i], reports[i]});
  }
  write_file(dir / "report.csv", false, [&](std::ostream& o) { write_report_csv(o, rows); });
  out << "voltage sweep: " << rows.size() << " scenarios\n";
}

void cmd_required_gradient(const Params& p, std::ostream& out) {
  const auto k = constants();
  const double speed = accelerate_classical(p.beam.voltage).velocity;
  const double length = p.geometry.interaction_length();
  const double g = required_gradient(p.target_split, length, speed);
  out << "required_gradient_T_per_m = " << format_double(g) << '\n'
      << "target_split_m = " << format_double(p.target_split) << '\n'
      << "interaction_length_m = " << format_double(length) << '\n'
      << "voltage_V = " << format_double(p.beam.voltage) << '\n'
      << "speed_m_per_s = " << format_double(speed) << '\n'
      << "mu_over_m = " << format_double(k.bohr_magneton / k.electron_mass) << '\n'
      << "time_in_field_s = " << format_double(length / speed) << '\n';
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Params params = resolve(config);
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    switch (config.command) {
      case Command::table1: cmd_table1(dir, out); break;
      case Command::fieldmap: cmd_fieldmap(dir, params, out); break;
      case Command::scenario: cmd_scenario(dir, params, out); break;
      case Command::gradient_sweep: cmd_gradient_sweep(dir, params, out); break;
      case Command::voltage_sweep: cmd_voltage_sweep(dir, params, out); break;
      case Command::required_gradient: cmd_required_gradient(params, out); break;
    }
    write_manifest(dir, config.command, params);
    return 0;
  } catch (const std::exception& e) {
    err << "sgsim " << command_name(config.command) << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace sgsim
