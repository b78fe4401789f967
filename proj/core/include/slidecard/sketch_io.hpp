#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>

#include "slidecard/rsra.hpp"
#include "slidecard/slea.hpp"

namespace slidecard {

// Binary sketch stream, little-endian throughout:
//   magic "SRLG" | version u16 | type u8 (1 = rough array, 2 = linear array)
//   | parameter block, u32 each (q,r,delta,eta,tau) or (q',r',delta',eta')
//   | hash seeds, u64 each (h1,h2,rhfg0) or (h3, lh[0..r'-1])
//   | slides applied u64 | counters row-major u16
// Merge nodes must agree on all of it; the headers are compared field by
// field before counters are combined.

inline constexpr char kSketchMagic[4] = {'S', 'R', 'L', 'G'};
inline constexpr uint16_t kSketchVersion = 1;

enum class SketchType : uint8_t { rsra = 1, slea = 2 };

void serialize_sketch(const Rsra& s, std::ostream& out);
void serialize_sketch(const Slea& s, std::ostream& out);

uint64_t serialized_size(const Rsra& s);
uint64_t serialized_size(const Slea& s);

using AnySketch = std::variant<Rsra, Slea>;

void serialize_sketch(const AnySketch& s, std::ostream& out);

// throws FormatError on bad magic/version/type or truncation; nothing partial
// is ever returned
AnySketch deserialize_sketch(std::istream& in);

AnySketch load_sketch_file(const std::string& path);
void save_sketch_file(const AnySketch& s, const std::string& path);  // temp + rename

}  // namespace slidecard
