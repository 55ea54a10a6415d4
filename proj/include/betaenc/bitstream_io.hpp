#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "betaenc/quantizers.hpp"

namespace betaenc {

// Bitstream file: an optional first line "# {json metadata}", then one line
// of '+'/'-' characters per stream.
struct BitstreamFile {
  std::string metadata_json = "{}";
  std::vector<std::vector<Bit>> streams;
};

std::string bits_to_string(const std::vector<Bit>& bits);
// Throws ParameterError on characters other than '+' and '-'.
std::vector<Bit> bits_from_string(const std::string& text);

void write_bitstream_file(std::ostream& out, const BitstreamFile& file);
BitstreamFile read_bitstream_file(std::istream& in);
BitstreamFile load_bitstream_file(const std::string& path);

}  // namespace betaenc
