#ifndef SOLMARCH_IMAGE_HPP
#define SOLMARCH_IMAGE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace solmarch {

/// 8-bit RGB raster, rows top to bottom.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Image() = default;
  Image(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::uint8_t* pixel(int x, int y) { return rgb.data() + (static_cast<std::size_t>(y) * width + x) * 3; }
  const std::uint8_t* pixel(int x, int y) const {
    return rgb.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
};

/// Binary P6 encoding: "P6\n<w> <h>\n255\n" followed by raw RGB bytes.
std::string encode_ppm(const Image& image);
Image decode_ppm(const std::string& bytes);

void write_ppm(const Image& image, const std::string& path);
Image read_ppm(const std::string& path);

}  // namespace solmarch

#endif  // SOLMARCH_IMAGE_HPP
