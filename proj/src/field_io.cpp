#include "nslab/field_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace nslab {

namespace {

constexpr char kMagic[8] = {'N', 'S', 'L', 'A', 'B', 'F', '0', '1'};

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("truncated snapshot file");
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const Grid& g = snap.grid;
  out.write(kMagic, 8);
  put<std::int32_t>(out, g.dim);
  put<std::int32_t>(out, static_cast<std::int32_t>(snap.components.size()));
  put<std::int32_t>(out, g.cells[0]);
  put<std::int32_t>(out, g.dim == 2 ? g.cells[1] : 1);
  put<double>(out, g.spacing(0));
  put<double>(out, g.dim == 2 ? g.spacing(1) : 0.0);
  put<double>(out, snap.time);
  for (const auto& c : snap.components) {
    require_same_grid(g, c.grid());
    out.write(reinterpret_cast<const char*>(c.raw().data()), static_cast<std::streamsize>(c.size() * sizeof(double)));
  }
  if (!out) throw Error("failed writing " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw Error(path.string() + " is not a field snapshot");
  int dim = get<std::int32_t>(in);
  int ncomp = get<std::int32_t>(in);
  int nx = get<std::int32_t>(in);
  int ny = get<std::int32_t>(in);
  double hx = get<double>(in);
  double hy = get<double>(in);
  Snapshot snap;
  snap.time = get<double>(in);
  snap.grid = dim == 2 ? Grid::rectangle(nx, ny, hx * nx, hy * ny) : Grid::line(nx, hx * nx);
  if (ncomp < 0) throw Error("negative component count in snapshot");
  for (int c = 0; c < ncomp; ++c) {
    std::vector<double> v(snap.grid.size());
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in) throw Error("truncated snapshot payload");
    snap.components.emplace_back(snap.grid, std::move(v));
  }
  return snap;
}

void write_field_csv(const std::filesystem::path& path, const std::vector<ScalarField>& components,
                     const std::vector<std::string>& names) {
  if (components.empty()) throw Error("no components to write");
  const Grid& g = components.front().grid();
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  std::fputs(g.dim == 2 ? "x,y" : "x", f);
  for (std::size_t c = 0; c < components.size(); ++c)
    std::fprintf(f, ",%s", c < names.size() ? names[c].c_str() : ("c" + std::to_string(c)).c_str());
  std::fputs("\r\n", f);
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto x = g.center_of(k);
    std::fprintf(f, "%.17g", x[0]);
    if (g.dim == 2) std::fprintf(f, ",%.17g", x[1]);
    for (const auto& c : components) std::fprintf(f, ",%.17g", c[k]);
    std::fputs("\r\n", f);
  }
  std::fclose(f);
}

}  // namespace nslab
