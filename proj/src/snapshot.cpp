#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "glnematic/io.hpp"

namespace glnematic {

namespace {

constexpr char kMagic[] = "ELGL1\n";
constexpr std::size_t kMagicSize = 6;
constexpr const char* kFields = "v1,v2,d1,d2,d3";

void put_le(std::string& out, double x) {
  auto bits = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

double get_le(const char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i)
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return std::bit_cast<double>(bits);
}

std::string next_line(const std::string& bytes, std::size_t& pos) {
  const std::size_t end = bytes.find('\n', pos);
  if (end == std::string::npos)
    throw SnapshotError(SnapshotError::Kind::bad_header, "snapshot header: unterminated line");
  std::string line = bytes.substr(pos, end - pos);
  pos = end + 1;
  return line;
}

std::string expect_key(const std::string& line, const std::string& key) {
  if (line.rfind(key + "=", 0) != 0)
    throw SnapshotError(SnapshotError::Kind::bad_header,
                        "snapshot header: expected '" + key + "=', got '" + line + "'");
  return line.substr(key.size() + 1);
}

double parse_real(const std::string& text, const std::string& key) {
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0' || !std::isfinite(x))
    throw SnapshotError(SnapshotError::Kind::bad_header,
                        "snapshot header: bad value for " + key + ": '" + text + "'");
  return x;
}

}  // namespace

SnapshotError::SnapshotError(Kind k, const std::string& what, std::size_t missing)
    : std::runtime_error(what), kind(k), missing_bytes(missing) {}

std::string encode_snapshot(const SimState& state, double epsilon) {
  Field vh, dh;
  const Field& v = with_both(state.v, vh);
  const Field& d = with_both(state.d, dh);
  const int n = v.n();
  std::string out(kMagic, kMagicSize);
  out += "n=" + std::to_string(n) + "\n";
  out += "eps=" + format_real(epsilon) + "\n";
  out += "t=" + format_real(state.t) + "\n";
  out += std::string("fields=") + kFields + "\n";
  out += "end\n";
  out.reserve(out.size() + 5 * static_cast<std::size_t>(n) * n * 8);
  for (int c = 0; c < 2; ++c)
    for (double x : v.physical(c)) put_le(out, x);
  for (int c = 0; c < 3; ++c)
    for (double x : d.physical(c)) put_le(out, x);
  return out;
}

Snapshot decode_snapshot(const std::string& bytes) {
  if (bytes.size() < kMagicSize || bytes.compare(0, kMagicSize, kMagic) != 0)
    throw SnapshotError(SnapshotError::Kind::bad_magic, "snapshot: bad magic");
  std::size_t pos = kMagicSize;
  const std::string n_text = expect_key(next_line(bytes, pos), "n");
  const double n_real = parse_real(n_text, "n");
  const int n = static_cast<int>(n_real);
  if (n != n_real || n < 8 || n % 2 != 0)
    throw SnapshotError(SnapshotError::Kind::bad_header, "snapshot header: bad grid size " + n_text);
  const double eps = parse_real(expect_key(next_line(bytes, pos), "eps"), "eps");
  const double t = parse_real(expect_key(next_line(bytes, pos), "t"), "t");
  if (expect_key(next_line(bytes, pos), "fields") != kFields)
    throw SnapshotError(SnapshotError::Kind::bad_header, "snapshot header: unexpected field list");
  if (next_line(bytes, pos) != "end")
    throw SnapshotError(SnapshotError::Kind::bad_header, "snapshot header: missing 'end'");

  const std::size_t nodes = static_cast<std::size_t>(n) * n;
  const std::size_t expected = 5 * nodes * 8;
  const std::size_t got = bytes.size() - pos;
  if (got != expected) {
    // A payload that is exactly right for another even grid size is a mismatch,
    // anything else short of the expected size is a truncation.
    const std::size_t per_field = got / 40;
    const auto m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(per_field))));
    const bool other_grid = got % 40 == 0 && m * m == per_field && m >= 8 && m % 2 == 0;
    if (got < expected && !other_grid) {
      const std::size_t missing = expected - got;
      throw SnapshotError(SnapshotError::Kind::truncated,
                          "snapshot: truncated payload, missing " + std::to_string(missing) +
                              " bytes",
                          missing);
    }
    std::ostringstream msg;
    msg << "snapshot: header says n=" << n << " (" << expected << " payload bytes) but payload has "
        << got << " bytes";
    if (other_grid) msg << ", the size of an n=" << m << " grid";
    throw SnapshotError(SnapshotError::Kind::mismatch, msg.str());
  }

  auto grid = make_grid(n);
  Snapshot snap;
  snap.epsilon = eps;
  snap.state = make_state(grid);
  snap.state.t = t;
  snap.state.step = 0;
  const char* p = bytes.data() + pos;
  for (int c = 0; c < 2; ++c)
    for (auto& x : snap.state.v.physical_mut(c)) {
      x = get_le(p);
      p += 8;
    }
  for (int c = 0; c < 3; ++c)
    for (auto& x : snap.state.d.physical_mut(c)) {
      x = get_le(p);
      p += 8;
    }
  snap.state.v.to_spectral();
  snap.state.d.to_spectral();
  return snap;
}

void write_snapshot(const SimState& state, double epsilon, const std::string& path) {
  write_text_file(path, encode_snapshot(state, epsilon));
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError(SnapshotError::Kind::io, "cannot open snapshot '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_snapshot(buf.str());
}

}  // namespace glnematic
