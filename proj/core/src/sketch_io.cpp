#include "slidecard/sketch_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "slidecard/errors.hpp"
#include "slidecard/io_util.hpp"

namespace slidecard {

namespace {

void put_u16(std::ostream& out, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

void put_u32(std::ostream& out, uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 4);
}

void put_u64(std::ostream& out, uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 8);
}

uint16_t get_u16(std::istream& in) {
  unsigned char b[2];
  if (!in.read(reinterpret_cast<char*>(b), 2)) throw FormatError("sketch stream truncated");
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw FormatError("sketch stream truncated");
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}

uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw FormatError("sketch stream truncated");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

void put_counters(std::ostream& out, std::span<const uint16_t> cells) {
  constexpr size_t kChunk = 1 << 14;
  char buf[kChunk * 2];
  size_t i = 0;
  while (i < cells.size()) {
    const size_t n = std::min(kChunk, cells.size() - i);
    for (size_t j = 0; j < n; ++j) {
      buf[2 * j] = static_cast<char>(cells[i + j] & 0xFF);
      buf[2 * j + 1] = static_cast<char>(cells[i + j] >> 8);
    }
    out.write(buf, static_cast<std::streamsize>(n * 2));
    i += n;
  }
}

void get_counters(std::istream& in, std::span<uint16_t> cells) {
  constexpr size_t kChunk = 1 << 14;
  unsigned char buf[kChunk * 2];
  size_t i = 0;
  while (i < cells.size()) {
    const size_t n = std::min(kChunk, cells.size() - i);
    if (!in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(n * 2)))
      throw FormatError("sketch stream truncated in counter block");
    for (size_t j = 0; j < n; ++j)
      cells[i + j] = static_cast<uint16_t>(buf[2 * j] | (buf[2 * j + 1] << 8));
    i += n;
  }
}

void put_header(std::ostream& out, SketchType type) {
  out.write(kSketchMagic, 4);
  put_u16(out, kSketchVersion);
  out.put(static_cast<char>(type));
}

SketchType get_header(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4)) throw FormatError("sketch stream truncated");
  if (!std::equal(magic, magic + 4, kSketchMagic)) throw FormatError("bad sketch magic");
  const uint16_t version = get_u16(in);
  if (version != kSketchVersion)
    throw FormatError("unsupported sketch format version " + std::to_string(version));
  int t = in.get();
  if (t != static_cast<int>(SketchType::rsra) && t != static_cast<int>(SketchType::slea))
    throw FormatError("unknown sketch type tag");
  return static_cast<SketchType>(t);
}

}  // namespace

void serialize_sketch(const Rsra& s, std::ostream& out) {
  const auto& c = s.config();
  put_header(out, SketchType::rsra);
  put_u32(out, c.q);
  put_u32(out, c.r);
  put_u32(out, c.delta);
  put_u32(out, c.eta);
  put_u32(out, c.tau);
  put_u64(out, c.seed_h1);
  put_u64(out, c.seed_h2);
  put_u64(out, c.seed_rhfg0);
  put_u64(out, s.slides());
  put_counters(out, s.cells());
  if (!out) throw FormatError("sketch write failed");
}

void serialize_sketch(const Slea& s, std::ostream& out) {
  const auto& c = s.config();
  put_header(out, SketchType::slea);
  put_u32(out, c.q);
  put_u32(out, c.r);
  put_u32(out, c.delta);
  put_u32(out, c.eta);
  put_u64(out, c.seed_h3);
  for (uint64_t seed : c.seeds_lh) put_u64(out, seed);
  put_u64(out, s.slides());
  put_counters(out, s.cells());
  if (!out) throw FormatError("sketch write failed");
}

uint64_t serialized_size(const Rsra& s) {
  return 4 + 2 + 1 + 5 * 4 + 3 * 8 + 8 + 2 * s.cells().size();
}

uint64_t serialized_size(const Slea& s) {
  return 4 + 2 + 1 + 4 * 4 + (1 + s.config().r) * 8 + 8 + 2 * s.cells().size();
}

void serialize_sketch(const AnySketch& s, std::ostream& out) {
  std::visit([&out](const auto& v) { serialize_sketch(v, out); }, s);
}

AnySketch deserialize_sketch(std::istream& in) {
  const SketchType type = get_header(in);
  if (type == SketchType::rsra) {
    RsraConfig cfg;
    cfg.q = get_u32(in);
    cfg.r = get_u32(in);
    cfg.delta = get_u32(in);
    cfg.eta = get_u32(in);
    cfg.tau = get_u32(in);
    cfg.seed_h1 = get_u64(in);
    cfg.seed_h2 = get_u64(in);
    cfg.seed_rhfg0 = get_u64(in);
    const uint64_t slides = get_u64(in);
    Rsra s(cfg);
    get_counters(in, s.cells_mut());
    s.set_slides(slides);
    return s;
  }
  SleaConfig cfg;
  cfg.q = get_u32(in);
  cfg.r = get_u32(in);
  cfg.delta = get_u32(in);
  cfg.eta = get_u32(in);
  if (cfg.r > 64) throw FormatError("sketch stream declares too many rows");
  cfg.seeds_lh.resize(cfg.r);
  cfg.seed_h3 = get_u64(in);
  for (auto& seed : cfg.seeds_lh) seed = get_u64(in);
  const uint64_t slides = get_u64(in);
  Slea s(cfg);
  get_counters(in, s.cells_mut());
  s.set_slides(slides);
  return s;
}

AnySketch load_sketch_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open sketch file: " + path);
  try {
    return deserialize_sketch(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void save_sketch_file(const AnySketch& s, const std::string& path) {
  write_file_atomic(path, [&s](std::ostream& out) { serialize_sketch(s, out); });
}

}  // namespace slidecard
