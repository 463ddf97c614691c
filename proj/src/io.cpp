#include "commscape/io.hpp"

#include <zlib.h>

#include <fstream>
#include <iterator>
#include <memory>
#include <stdexcept>

namespace commscape::io {

std::string read_file(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open " + path);
  char magic[2] = {0, 0};
  probe.read(magic, 2);
  const bool gzipped = probe.gcount() == 2 && static_cast<unsigned char>(magic[0]) == 0x1f &&
                       static_cast<unsigned char>(magic[1]) == 0x8b;
  if (!gzipped) {
    probe.clear();
    probe.seekg(0);
    return {std::istreambuf_iterator<char>(probe), std::istreambuf_iterator<char>()};
  }
  probe.close();

  std::unique_ptr<gzFile_s, int (*)(gzFile)> gz(gzopen(path.c_str(), "rb"), gzclose);
  if (!gz) throw std::runtime_error("cannot open " + path);
  std::string out;
  char buf[1 << 16];
  for (;;) {
    const int got = gzread(gz.get(), buf, sizeof buf);
    if (got < 0) {
      int errnum = 0;
      throw std::runtime_error(path + ": " + gzerror(gz.get(), &errnum));
    }
    if (got == 0) break;
    out.append(buf, static_cast<std::size_t>(got));
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace commscape::io
