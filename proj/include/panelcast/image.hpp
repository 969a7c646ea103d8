#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "panelcast/ephemeris.hpp"
#include "panelcast/geom.hpp"

namespace panelcast {

/// Capture metadata carried alongside an image (sidecar file).
struct ImageMetadata {
  std::optional<GeoTime> capture;
  /// IMU gravity in the camera frame.
  std::optional<Vec3> gravity;
};

/// Linear-radiance RGB float image. Rows are stored top to bottom.
class HdrImage {
 public:
  HdrImage() = default;
  HdrImage(int width, int height, float fill = 0.0f);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  float* pixel(int x, int y) { return &data_[index(x, y)]; }
  const float* pixel(int x, int y) const { return &data_[index(x, y)]; }
  void set(int x, int y, float r, float g, float b);

  /// Rec. 709 luminance of a pixel.
  double luminance(int x, int y) const;

  const std::vector<float>& data() const { return data_; }
  std::vector<float>& data() { return data_; }

  ImageMetadata metadata;

  /// Throws format_error on negative or non-finite values.
  void validate() const;

 private:
  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3;
  }
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

/// Per-channel log(x + 1).
HdrImage log_compress(const HdrImage& image);
/// Inverse of log_compress: exp(y) - 1.
HdrImage log_expand(const HdrImage& image);

/// Binary 8-bit mask, one byte per pixel (0 or 1), rows top to bottom.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  Mask() = default;
  Mask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

  std::uint8_t& at(int x, int y) { return bits[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x]; }
  std::size_t count() const;
};

// File formats. All readers throw format_error/io_error; writers replace the
// destination atomically (write to a temporary, then rename).

/// PFM: "PF" header, "W H", negative scale for little-endian, then rows
/// bottom-to-top of 3 x float32. "Pf" grayscale files are read as gray RGB.
HdrImage read_pfm(const std::filesystem::path& path);
void write_pfm(const std::filesystem::path& path, const HdrImage& image);

/// Radiance RGBE (.hdr/.pic), flat or new-style run-length scanlines.
HdrImage read_radiance_hdr(const std::filesystem::path& path);
void write_radiance_hdr(const std::filesystem::path& path, const HdrImage& image);

/// Dispatches on the extension (.pfm, .hdr, .pic) and loads the optional
/// `<image>.meta` sidecar.
HdrImage read_hdr_image(const std::filesystem::path& path);

/// 8-bit masks: PGM "P5" (255 = sky, 0 = not sky; any value >= 128 reads as
/// sky) or 8-bit grayscale PNG with the same convention.
Mask read_mask(const std::filesystem::path& path);
void write_pgm_mask(const std::filesystem::path& path, const Mask& mask);

/// Key-value sidecar: latitude, longitude, instant, gravity_x/y/z.
ImageMetadata read_metadata(const std::filesystem::path& path);
void write_metadata(const std::filesystem::path& path, const ImageMetadata& meta);

/// Sidecar path for an image: `<image path>.meta`.
std::filesystem::path metadata_path_for(const std::filesystem::path& image_path);

}  // namespace panelcast
