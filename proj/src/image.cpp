#include "panelcast/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>

#include "panelcast/error.hpp"
#include "panelcast/fileio.hpp"

namespace panelcast {

HdrImage::HdrImage(int width, int height, float fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) fail(ErrorKind::format, "image dimensions must be positive");
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3, fill);
}

void HdrImage::set(int x, int y, float r, float g, float b) {
  float* p = pixel(x, y);
  p[0] = r;
  p[1] = g;
  p[2] = b;
}

double HdrImage::luminance(int x, int y) const {
  const float* p = pixel(x, y);
  return 0.2126 * p[0] + 0.7152 * p[1] + 0.0722 * p[2];
}

void HdrImage::validate() const {
  for (const float v : data_) {
    if (!std::isfinite(v) || v < 0.0f) {
      fail(ErrorKind::format, "image contains negative or non-finite pixel values");
    }
  }
}

HdrImage log_compress(const HdrImage& image) {
  HdrImage out = image;
  for (float& v : out.data()) v = static_cast<float>(std::log1p(static_cast<double>(v)));
  return out;
}

HdrImage log_expand(const HdrImage& image) {
  HdrImage out = image;
  for (float& v : out.data()) v = static_cast<float>(std::expm1(static_cast<double>(v)));
  return out;
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

namespace {

/// Reads whitespace-separated header tokens from a binary netpbm-style file.
class HeaderReader {
 public:
  explicit HeaderReader(const std::string& bytes) : bytes_(bytes) {}

  std::string token() {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) fail(ErrorKind::format, "truncated image header");
    return bytes_.substr(start, pos_ - start);
  }

  /// Consumes exactly one whitespace byte after the last header token.
  std::size_t data_offset() {
    if (pos_ >= bytes_.size()) fail(ErrorKind::format, "missing image data");
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

float load_float(const char* p, bool little_endian) {
  std::uint32_t bits = 0;
  std::memcpy(&bits, p, 4);
  if (little_endian != (std::endian::native == std::endian::little)) {
    bits = ((bits & 0xffu) << 24) | ((bits & 0xff00u) << 8) | ((bits >> 8) & 0xff00u) |
           (bits >> 24);
  }
  float v = 0.0f;
  std::memcpy(&v, &bits, 4);
  return v;
}

}  // namespace

HdrImage read_pfm(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  HeaderReader header(bytes);
  const std::string magic = header.token();
  if (magic != "PF" && magic != "Pf") fail(ErrorKind::format, path.string() + ": not a PFM file");
  const int channels = magic == "PF" ? 3 : 1;
  const int w = parse_int(header.token(), "PFM width");
  const int h = parse_int(header.token(), "PFM height");
  const double scale = parse_double(header.token(), "PFM scale");
  if (w <= 0 || h <= 0 || scale == 0.0) fail(ErrorKind::format, path.string() + ": bad PFM header");
  const bool little = scale < 0.0;
  const std::size_t offset = header.data_offset();
  const std::size_t need = static_cast<std::size_t>(w) * h * channels * 4;
  if (bytes.size() < offset + need) fail(ErrorKind::format, path.string() + ": truncated PFM data");

  HdrImage img(w, h);
  const char* p = bytes.data() + offset;
  for (int row = 0; row < h; ++row) {
    const int y = h - 1 - row;  // stored bottom-to-top
    for (int x = 0; x < w; ++x) {
      float rgb[3];
      for (int c = 0; c < channels; ++c, p += 4) rgb[c] = load_float(p, little);
      if (channels == 1) rgb[1] = rgb[2] = rgb[0];
      img.set(x, y, rgb[0], rgb[1], rgb[2]);
    }
  }
  img.validate();
  return img;
}

void write_pfm(const std::filesystem::path& path, const HdrImage& image) {
  std::string out = "PF\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) +
                    "\n-1.0\n";
  const std::size_t header = out.size();
  out.resize(header + static_cast<std::size_t>(image.width()) * image.height() * 12);
  char* p = out.data() + header;
  for (int row = 0; row < image.height(); ++row) {
    const int y = image.height() - 1 - row;
    for (int x = 0; x < image.width(); ++x) {
      const float* px = image.pixel(x, y);
      for (int c = 0; c < 3; ++c, p += 4) {
        std::uint32_t bits = 0;
        std::memcpy(&bits, &px[c], 4);
        if constexpr (std::endian::native == std::endian::big) {
          bits = ((bits & 0xffu) << 24) | ((bits & 0xff00u) << 8) | ((bits >> 8) & 0xff00u) |
                 (bits >> 24);
        }
        std::memcpy(p, &bits, 4);
      }
    }
  }
  write_file_atomic(path, out);
}

namespace {

void rgbe_to_float(const unsigned char* rgbe, float* out) {
  if (rgbe[3] == 0) {
    out[0] = out[1] = out[2] = 0.0f;
    return;
  }
  const float f = std::ldexp(1.0f, static_cast<int>(rgbe[3]) - (128 + 8));
  for (int c = 0; c < 3; ++c) out[c] = (static_cast<float>(rgbe[c]) + 0.5f) * f;
}

void float_to_rgbe(const float* in, unsigned char* rgbe) {
  const float v = std::max({in[0], in[1], in[2]});
  if (v < 1e-32f) {
    rgbe[0] = rgbe[1] = rgbe[2] = rgbe[3] = 0;
    return;
  }
  int e = 0;
  const float m = std::frexp(v, &e) * 256.0f / v;
  for (int c = 0; c < 3; ++c) rgbe[c] = static_cast<unsigned char>(in[c] * m);
  rgbe[3] = static_cast<unsigned char>(e + 128);
}

}  // namespace

HdrImage read_radiance_hdr(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  std::size_t pos = 0;
  auto next_line = [&]() {
    const std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string::npos) fail(ErrorKind::format, path.string() + ": truncated header");
    std::string line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    return line;
  };
  const std::string first = next_line();
  if (first.rfind("#?", 0) != 0) fail(ErrorKind::format, path.string() + ": not a Radiance file");
  while (true) {
    const std::string line = next_line();
    if (line.empty()) break;
    if (line.rfind("FORMAT=", 0) == 0 && line != "FORMAT=32-bit_rle_rgbe") {
      fail(ErrorKind::format, path.string() + ": unsupported " + line);
    }
  }
  const auto res = split_whitespace(next_line());
  if (res.size() != 4 || res[0] != "-Y" || res[2] != "+X") {
    fail(ErrorKind::format, path.string() + ": only -Y H +X W orientation is supported");
  }
  const int h = parse_int(res[1], "HDR height");
  const int w = parse_int(res[3], "HDR width");
  HdrImage img(w, h);
  std::vector<unsigned char> scan(static_cast<std::size_t>(w) * 4);
  auto byte = [&]() -> unsigned char {
    if (pos >= bytes.size()) fail(ErrorKind::format, path.string() + ": truncated pixel data");
    return static_cast<unsigned char>(bytes[pos++]);
  };
  for (int y = 0; y < h; ++y) {
    const bool rle = w >= 8 && w < 32768 && pos + 4 <= bytes.size() &&
                     static_cast<unsigned char>(bytes[pos]) == 2 &&
                     static_cast<unsigned char>(bytes[pos + 1]) == 2 &&
                     (static_cast<unsigned char>(bytes[pos + 2]) & 0x80) == 0;
    if (rle) {
      pos += 2;
      const int len = (byte() << 8) | byte();
      if (len != w) fail(ErrorKind::format, path.string() + ": scanline length mismatch");
      for (int c = 0; c < 4; ++c) {
        int x = 0;
        while (x < w) {
          int count = byte();
          if (count > 128) {
            count -= 128;
            const unsigned char v = byte();
            if (x + count > w) fail(ErrorKind::format, path.string() + ": bad run length");
            for (int i = 0; i < count; ++i) scan[static_cast<std::size_t>(x++) * 4 + c] = v;
          } else {
            if (count == 0 || x + count > w) fail(ErrorKind::format, path.string() + ": bad run");
            for (int i = 0; i < count; ++i) scan[static_cast<std::size_t>(x++) * 4 + c] = byte();
          }
        }
      }
    } else {
      for (int x = 0; x < w; ++x)
        for (int c = 0; c < 4; ++c) scan[static_cast<std::size_t>(x) * 4 + c] = byte();
    }
    for (int x = 0; x < w; ++x) rgbe_to_float(&scan[static_cast<std::size_t>(x) * 4], img.pixel(x, y));
  }
  return img;
}

void write_radiance_hdr(const std::filesystem::path& path, const HdrImage& image) {
  std::string out = "#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y " + std::to_string(image.height()) +
                    " +X " + std::to_string(image.width()) + "\n";
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      unsigned char rgbe[4];
      float_to_rgbe(image.pixel(x, y), rgbe);
      out.append(reinterpret_cast<const char*>(rgbe), 4);
    }
  }
  write_file_atomic(path, out);
}

std::filesystem::path metadata_path_for(const std::filesystem::path& image_path) {
  std::filesystem::path p = image_path;
  p += ".meta";
  return p;
}

HdrImage read_hdr_image(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  HdrImage img;
  if (ext == ".pfm") {
    img = read_pfm(path);
  } else if (ext == ".hdr" || ext == ".pic") {
    img = read_radiance_hdr(path);
  } else {
    fail(ErrorKind::format, path.string() + ": unsupported HDR extension (use .pfm or .hdr)");
  }
  const auto meta = metadata_path_for(path);
  if (std::filesystem::exists(meta)) img.metadata = read_metadata(meta);
  return img;
}

namespace {

Mask read_pgm(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  HeaderReader header(bytes);
  if (header.token() != "P5") fail(ErrorKind::format, path.string() + ": not a binary PGM (P5)");
  const int w = parse_int(header.token(), "PGM width");
  const int h = parse_int(header.token(), "PGM height");
  const int maxval = parse_int(header.token(), "PGM maxval");
  if (w <= 0 || h <= 0 || maxval != 255) {
    fail(ErrorKind::format, path.string() + ": masks must be 8-bit PGM with maxval 255");
  }
  const std::size_t offset = header.data_offset();
  if (bytes.size() < offset + static_cast<std::size_t>(w) * h) {
    fail(ErrorKind::format, path.string() + ": truncated PGM data");
  }
  Mask m(w, h);
  for (std::size_t i = 0; i < m.bits.size(); ++i) {
    m.bits[i] = static_cast<unsigned char>(bytes[offset + i]) >= 128 ? 1 : 0;
  }
  return m;
}

Mask read_png_mask(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    fail(ErrorKind::format, path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    fail(ErrorKind::format, path.string() + ": " + msg);
  }
  Mask m(static_cast<int>(image.width), static_cast<int>(image.height));
  for (std::size_t i = 0; i < m.bits.size(); ++i) m.bits[i] = buffer[i] >= 128 ? 1 : 0;
  return m;
}

}  // namespace

Mask read_mask(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".png") return read_png_mask(path);
  return read_pgm(path);
}

void write_pgm_mask(const std::filesystem::path& path, const Mask& mask) {
  std::string out = "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) +
                    "\n255\n";
  out.reserve(out.size() + mask.bits.size());
  for (const auto b : mask.bits) out.push_back(static_cast<char>(b ? 255 : 0));
  write_file_atomic(path, out);
}

ImageMetadata read_metadata(const std::filesystem::path& path) {
  const auto kv = parse_key_values(read_file(path), path.string());
  ImageMetadata meta;
  if (kv.count("latitude") || kv.count("longitude") || kv.count("instant")) {
    if (!kv.count("latitude") || !kv.count("longitude") || !kv.count("instant")) {
      fail(ErrorKind::parse, path.string() + ": latitude, longitude and instant go together");
    }
    GeoTime g;
    g.latitude_deg = parse_double(kv.at("latitude"), "latitude");
    g.longitude_deg = parse_double(kv.at("longitude"), "longitude");
    g.instant = parse_instant(kv.at("instant"));
    meta.capture = g;
  }
  if (kv.count("gravity_x") || kv.count("gravity_y") || kv.count("gravity_z")) {
    if (!kv.count("gravity_x") || !kv.count("gravity_y") || !kv.count("gravity_z")) {
      fail(ErrorKind::parse, path.string() + ": gravity needs gravity_x, gravity_y and gravity_z");
    }
    meta.gravity = Vec3(parse_double(kv.at("gravity_x"), "gravity_x"),
                        parse_double(kv.at("gravity_y"), "gravity_y"),
                        parse_double(kv.at("gravity_z"), "gravity_z"));
  }
  return meta;
}

void write_metadata(const std::filesystem::path& path, const ImageMetadata& meta) {
  std::ostringstream out;
  out.precision(17);
  if (meta.capture) {
    out << "latitude = " << meta.capture->latitude_deg << "\n";
    out << "longitude = " << meta.capture->longitude_deg << "\n";
    out << "instant = " << format_instant(meta.capture->instant) << "\n";
  }
  if (meta.gravity) {
    out << "gravity_x = " << meta.gravity->x() << "\n";
    out << "gravity_y = " << meta.gravity->y() << "\n";
    out << "gravity_z = " << meta.gravity->z() << "\n";
  }
  write_file_atomic(path, out.str());
}

}  // namespace panelcast
