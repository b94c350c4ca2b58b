#include "bardina/harness/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "bardina/errors.hpp"

namespace bardina::harness {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'B', 'D', 'N', 'A'};

template <class T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

class Cursor {
 public:
  explicit Cursor(const std::string& bytes) : bytes_(bytes) {}

  template <class T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw CorruptSnapshotError("snapshot is truncated");
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(const char* data, std::size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes a uInt length; feed large payloads in pieces.
  while (n > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data), chunk);
    data += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::string encode_snapshot(const Snapshot& snap) {
  std::string out(kMagic, 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint8_t>(out, snap.geometry == GeometryKind::sphere ? 0 : 1);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(snap.truncation));
  put<double>(out, snap.t);
  put<double>(out, snap.nu);
  put<double>(out, snap.alpha);
  put<double>(out, snap.sigma);
  put<std::uint64_t>(out, snap.state.psi.size());
  const std::size_t payload_start = out.size();
  for (double c : snap.state.psi.values) put<double>(out, c);
  if (snap.geometry == GeometryKind::torus) {
    if (snap.state.harmonic.size() != 2) throw ShapeError("torus snapshot needs a harmonic pair");
    for (double h : snap.state.harmonic.values) put<double>(out, h);
  }
  put<std::uint32_t>(out, crc_of(out.data() + payload_start, out.size() - payload_start));
  return out;
}

Snapshot decode_snapshot(const std::string& bytes) {
  Cursor in(bytes);
  char magic[4];
  for (char& c : magic) c = in.get<char>();
  if (std::memcmp(magic, kMagic, 4) != 0) throw CorruptSnapshotError("not a snapshot file (bad magic)");
  const auto version = in.get<std::uint32_t>();
  if (version != kSnapshotVersion)
    throw CorruptSnapshotError("unsupported snapshot version " + std::to_string(version));
  Snapshot s;
  const auto tag = in.get<std::uint8_t>();
  if (tag > 1) throw CorruptSnapshotError("unknown geometry tag " + std::to_string(tag));
  s.geometry = tag == 0 ? GeometryKind::sphere : GeometryKind::torus;
  s.truncation = static_cast<int>(in.get<std::uint32_t>());
  s.t = in.get<double>();
  s.nu = in.get<double>();
  s.alpha = in.get<double>();
  s.sigma = in.get<double>();
  const auto count = in.get<std::uint64_t>();
  const std::size_t harmonic = s.geometry == GeometryKind::torus ? 2 : 0;
  if (count > in.remaining() / sizeof(double) ||
      in.remaining() != (count + harmonic) * sizeof(double) + sizeof(std::uint32_t))
    throw CorruptSnapshotError("snapshot payload length does not match its header");
  const std::size_t payload_start = in.pos();
  s.state.psi.values.resize(count);
  for (auto& c : s.state.psi.values) c = in.get<double>();
  s.state.harmonic.values.resize(harmonic);
  for (auto& h : s.state.harmonic.values) h = in.get<double>();
  const std::size_t payload_end = in.pos();
  const auto stored = in.get<std::uint32_t>();
  if (crc_of(bytes.data() + payload_start, payload_end - payload_start) != stored)
    throw CorruptSnapshotError("snapshot CRC mismatch");
  return s;
}

void save_snapshot(const std::string& path, const Snapshot& snap) {
  const std::string bytes = encode_snapshot(snap);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write snapshot " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing snapshot " + path);
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read snapshot " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_snapshot(ss.str());
}

void check_snapshot(const Snapshot& snap, const BasisPlan& plan) {
  if (snap.geometry != plan.geometry().kind)
    throw SnapshotMismatchError("snapshot geometry differs from the configured geometry");
  if (snap.truncation != plan.truncation())
    throw SnapshotMismatchError("snapshot truncation " + std::to_string(snap.truncation) +
                                " differs from the configured " + std::to_string(plan.truncation()));
  if (snap.state.psi.size() != plan.mode_count())
    throw SnapshotMismatchError("snapshot coefficient count does not match the plan");
}

}  // namespace bardina::harness
