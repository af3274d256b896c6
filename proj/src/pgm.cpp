#include "nlpr/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "nlpr/error.hpp"

namespace nlpr {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

int header_int(std::istream& in, const char* what) {
  const std::string tok = header_token(in);
  if (tok.empty() ||
      !std::all_of(tok.begin(), tok.end(), [](unsigned char c) {
        return std::isdigit(c);
      })) {
    throw IoError(std::string("PGM: bad ") + what + " '" + tok + "'");
  }
  return std::stoi(tok);
}

}  // namespace

Image read_pgm(std::istream& in) {
  if (header_token(in) != "P5") {
    throw IoError("PGM: expected binary P5 magic number");
  }
  const int width = header_int(in, "width");
  const int height = header_int(in, "height");
  const int maxval = header_int(in, "maxval");
  if (width <= 0 || height <= 0) throw IoError("PGM: empty image");
  if (maxval != 255) {
    throw IoError("PGM: only 8-bit images (maxval 255) are supported, got " +
                  std::to_string(maxval));
  }
  // header_token consumed the single whitespace byte after maxval.
  std::vector<unsigned char> raw(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw IoError("PGM: truncated pixel data");
  }
  std::vector<double> data(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) data[i] = raw[i] / 255.0;
  return Image(width, height, std::move(data));
}

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return read_pgm(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_pgm(std::ostream& out, const Image& img) {
  out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
  std::vector<unsigned char> raw(img.size());
  const auto data = img.data();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double v = std::clamp(data[i], 0.0, 1.0);
    raw[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("PGM: write failed");
}

void write_pgm(const std::filesystem::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_pgm(out, img);
}

}  // namespace nlpr
