#include "betaenc/bitstream_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "betaenc/errors.hpp"

namespace betaenc {

std::string bits_to_string(const std::vector<Bit>& bits) {
  std::string out;
  out.reserve(bits.size());
  for (Bit b : bits) out += b.value() > 0 ? '+' : '-';
  return out;
}

std::vector<Bit> bits_from_string(const std::string& text) {
  std::vector<Bit> out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '+') {
      out.push_back(Bit::plus());
    } else if (c == '-') {
      out.push_back(Bit::minus());
    } else {
      throw ParameterError("invalid bit character '" + std::string(1, c) + "' at column " +
                           std::to_string(i + 1));
    }
  }
  return out;
}

void write_bitstream_file(std::ostream& out, const BitstreamFile& file) {
  out << "# " << file.metadata_json << '\n';
  for (const auto& s : file.streams) out << bits_to_string(s) << '\n';
}

BitstreamFile read_bitstream_file(std::istream& in) {
  BitstreamFile file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line_no == 1) file.metadata_json = line.size() > 2 ? line.substr(2) : "{}";
      continue;
    }
    try {
      file.streams.push_back(bits_from_string(line));
    } catch (const ParameterError& e) {
      throw ParameterError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return file;
}

BitstreamFile load_bitstream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open bitstream file '" + path + "'");
  return read_bitstream_file(in);
}

}  // namespace betaenc
