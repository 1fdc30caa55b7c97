#include "aeex/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "aeex/error.hpp"

namespace aeex {

namespace {

constexpr char kMagic[8] = {'A', 'E', 'E', 'X', '0', '0', '0', '1'};

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

void put_u64(unsigned char* p, std::uint64_t v) { std::memcpy(p, &v, 8); }
void put_f64(unsigned char* p, double v) { std::memcpy(p, &v, 8); }
std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v;
  std::memcpy(&v, p, 8);
  return v;
}
double get_f64(const unsigned char* p) {
  double v;
  std::memcpy(&v, p, 8);
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const ScalarField& f, double alpha, double time) {
  const MappedGrid& g = *f.grid();
  unsigned char head[snapshot_header_bytes] = {};
  std::memcpy(head, kMagic, 8);
  put_u64(head + 8, g.n_r());
  put_u64(head + 16, g.n_theta());
  put_f64(head + 24, g.r_max());
  put_f64(head + 32, alpha);
  put_f64(head + 40, time);
  put_u64(head + 48, static_cast<std::uint64_t>(f.tag()));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open " + path + " for writing", "IO");
  out.write(reinterpret_cast<const char*>(head), sizeof head);
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.values().size() * sizeof(double)));
  if (!out) throw ValidationError("write failed for " + path, "IO");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path, "IO");
  unsigned char head[snapshot_header_bytes];
  in.read(reinterpret_cast<char*>(head), sizeof head);
  if (!in || std::memcmp(head, kMagic, 8) != 0)
    throw ValidationError(path + " is not a snapshot", "SNAPSHOT_FORMAT");
  Snapshot s;
  s.header.n_r = get_u64(head + 8);
  s.header.n_theta = get_u64(head + 16);
  s.header.r_max = get_f64(head + 24);
  s.header.alpha = get_f64(head + 32);
  s.header.time = get_f64(head + 40);
  const std::uint64_t tag = get_u64(head + 48);
  if (tag > 3) throw ValidationError("unknown quantity tag", "SNAPSHOT_FORMAT");
  s.header.tag = static_cast<QuantityTag>(tag);
  s.values.resize(s.header.n_r * s.header.n_theta);
  in.read(reinterpret_cast<char*>(s.values.data()),
          static_cast<std::streamsize>(s.values.size() * sizeof(double)));
  if (!in) throw ValidationError(path + " is truncated", "SNAPSHOT_FORMAT");
  return s;
}

ScalarField snapshot_field(const Snapshot& snap, const GridPtr& grid) {
  if (snap.header.n_r != grid->n_r() || snap.header.n_theta != grid->n_theta() ||
      snap.header.r_max != grid->r_max())
    throw ValidationError("snapshot does not match the grid", "SNAPSHOT_FORMAT");
  return ScalarField(grid, snap.header.tag, snap.values);
}

}  // namespace aeex
