#include "hysim/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hysim/errors.hpp"

namespace hysim {

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view data) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  const Dims d = traj.dims;
  out << "t";
  for (int v = 0; v < d.total_coords(); ++v) out << "," << coord_name(d, v);
  out << ",energy,constraint\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << fmt_double(traj.times[k]);
    const std::vector<double> z = traj.points[k].flat();
    for (double c : z) out << "," << fmt_double(c);
    out << "," << fmt_double(traj.energy[k]) << "," << fmt_double(traj.constraint[k]) << "\n";
  }
  return out.str();
}

std::string ensemble_csv(const HybridEnsemble& ens) {
  std::ostringstream out;
  const Dims d = ens.dims;
  out << "weight,component";
  for (int v = 0; v < d.total_coords(); ++v) out << "," << coord_name(d, v);
  out << "\n";
  for (std::size_t i = 0; i < ens.size(); ++i) {
    out << fmt_double(ens.weights[i]) << "," << ens.component[i];
    for (double c : ens.particles[i].flat()) out << "," << fmt_double(c);
    out << "\n";
  }
  return out.str();
}

std::string marginal_csv(const Marginal& m) {
  std::ostringstream out;
  out << "bin_left,bin_right,mass\n";
  for (std::size_t b = 0; b + 1 < m.edges.size(); ++b) {
    out << fmt_double(m.edges[b]) << "," << fmt_double(m.edges[b + 1]) << ","
        << fmt_double(m.masses[b]) << "\n";
  }
  return out.str();
}

OutputWriter::OutputWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
}

void OutputWriter::write(const std::string& filename, const std::string& content) {
  const std::filesystem::path path = dir_ / filename;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
  entries_.push_back({{"file", filename},
                      {"bytes", content.size()},
                      {"fnv1a64", fnv1a64_hex(content)}});
}

void OutputWriter::write_manifest(const nlohmann::json& run_info) {
  nlohmann::json manifest = run_info;
  manifest["outputs"] = entries_;
  const std::string text = manifest.dump(2) + "\n";
  const std::filesystem::path path = dir_ / "run_manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
}

}  // namespace hysim
