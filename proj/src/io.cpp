#include "corot/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "corot/errors.hpp"

namespace corot {

namespace fs = std::filesystem;

std::string format_g15(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

void write_slice(const fs::path& path, const Slice& s) {
  std::ostringstream out;
  out << format_g15(s.t) << ' ' << format_g15(s.alpha) << ' ' << s.k << ' '
      << s.grid.n_points << ' ' << format_g15(s.grid.dr) << '\n';
  for (int i = 0; i < s.grid.n_points; ++i) {
    out << format_g15(s.grid.r(i)) << ' ' << format_g15(s.v[i]) << ' '
        << format_g15(s.pi[i]) << ' ' << format_g15(s.gamma[i]) << ' '
        << format_g15(s.omega[i]) << '\n';
  }
  write_atomic(path, out.str());
}

Slice read_slice(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read slice file " + path.string());
  Slice s;
  int n = 0;
  double dr = 0.0;
  if (!(in >> s.t >> s.alpha >> s.k >> n >> dr))
    throw ConfigError("bad slice header in " + path.string());
  s.grid = RadialGrid::make(n, dr * (n - 1));
  s.grid.dr = dr;  // keep the stored spacing bit-exact
  s.v.resize(n);
  s.pi.resize(n);
  s.gamma.resize(n);
  s.omega.resize(n);
  for (int i = 0; i < n; ++i) {
    double r;
    if (!(in >> r >> s.v[i] >> s.pi[i] >> s.gamma[i] >> s.omega[i]))
      throw ConfigError("bad slice row " + std::to_string(i) + " in " + path.string());
  }
  return s;
}

std::string slice_filename(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "slice_%06d.dat", index);
  return buf;
}

void write_history(const fs::path& dir, const History& h) {
  fs::create_directories(dir);
  for (int i = 0; i < h.size(); ++i) write_slice(dir / slice_filename(i), h.slice(i));
}

History read_history(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.starts_with("slice_") && name.ends_with(".dat")) files.push_back(entry.path());
  }
  if (files.empty()) throw ConfigError("no slice files in " + dir.string());
  std::sort(files.begin(), files.end());
  History h;
  for (const auto& f : files) h.push(read_slice(f));
  return h;
}

}  // namespace corot
