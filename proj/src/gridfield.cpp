#include "jws/gridfield.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <thread>

namespace jws {

namespace {

constexpr std::array<char, 4> kMagic{'J', 'W', 'S', 'G'};
constexpr std::uint8_t kVersion = 1;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void put(std::uint64_t v, int n) {
    for (int k = 0; k < n; ++k) out_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}

  std::uint8_t u8(const char* field) { return static_cast<std::uint8_t>(get(1, field)); }
  std::uint16_t u16(const char* field) { return static_cast<std::uint16_t>(get(2, field)); }
  std::uint32_t u32(const char* field) { return static_cast<std::uint32_t>(get(4, field)); }
  double f64(const char* field) { return std::bit_cast<double>(get(8, field)); }
  const std::uint8_t* take(std::size_t n, const char* field) {
    require(n, field);
    const auto* p = in_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void require(std::size_t n, const char* field) const {
    if (in_.size() - pos_ < n) throw GridFormatError(std::string("truncated grid file: missing ") + field);
  }
  std::uint64_t get(int n, const char* field) {
    require(static_cast<std::size_t>(n), field);
    std::uint64_t v = 0;
    for (int k = 0; k < n; ++k) v |= static_cast<std::uint64_t>(in_[pos_ + k]) << (8 * k);
    pos_ += n;
    return v;
  }
  const std::vector<std::uint8_t>& in_;
  std::size_t pos_ = 0;
};

std::uint8_t majority(std::span<const std::uint8_t> votes, std::uint8_t fallback) {
  std::uint8_t best = fallback;
  int best_count = 0;
  for (std::uint8_t v : votes) {
    const int n = static_cast<int>(std::count(votes.begin(), votes.end(), v));
    if (n > best_count || (n == best_count && v == fallback)) {
      best = v;
      best_count = n;
    }
  }
  return best;
}

}  // namespace

void Region::validate() const {
  if (!(x_min < x_max) || !(y_min < y_max) || !std::isfinite(x_min) || !std::isfinite(x_max) ||
      !std::isfinite(y_min) || !std::isfinite(y_max))
    throw DomainError("region must satisfy x_min < x_max and y_min < y_max");
}

GridField::GridField(Region region, std::uint32_t width, std::uint32_t height, std::vector<std::uint8_t> codes,
                     GridMeta meta)
    : region_(region), width_(width), height_(height), codes_(std::move(codes)), meta_(std::move(meta)) {
  region_.validate();
  if (codes_.size() != static_cast<std::size_t>(width_) * height_)
    throw Error("grid: label count does not match width x height");
}

CellIndex GridField::cell_of(Complex z) const {
  const int i = static_cast<int>(std::floor((z.real() - region_.x_min) / dx()));
  const int j = static_cast<int>(std::floor((region_.y_max - z.imag()) / dy()));
  return {std::clamp(i, 0, static_cast<int>(width_) - 1), std::clamp(j, 0, static_cast<int>(height_) - 1)};
}

GridField render(const Dynamics& dynamics, const Region& region, std::uint32_t width, std::uint32_t height,
                 const RenderParams& params) {
  region.validate();
  if (width < 16 || height < 16) throw DomainError("render: width and height must be at least 16");
  const Classifier classify = dynamics.classifier();
  std::vector<std::uint8_t> codes(static_cast<std::size_t>(width) * height);
  const double dx = (region.x_max - region.x_min) / width;
  const double dy = (region.y_max - region.y_min) / height;

  auto do_rows = [&](unsigned first, unsigned stride) {
    for (std::uint32_t j = first; j < height; j += stride) {
      for (std::uint32_t i = 0; i < width; ++i) {
        const Complex centre{region.x_min + (i + 0.5) * dx, region.y_max - (j + 0.5) * dy};
        std::uint8_t code = classify(centre).code();
        if (params.supersample) {
          std::array<std::uint8_t, 4> votes{};
          int k = 0;
          for (double oy : {-0.25, 0.25})
            for (double ox : {-0.25, 0.25})
              votes[k++] = classify(centre + Complex{ox * dx, oy * dy}).code();
          code = majority(votes, code);
        }
        codes[static_cast<std::size_t>(j) * width + i] = code;
      }
    }
  };

  unsigned workers = params.threads ? params.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, height);
  if (workers <= 1) {
    do_rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(do_rows, t, workers);
  }

  GridMeta meta{dynamics.spec.name(), dynamics.spec.parameters(),
                static_cast<std::uint32_t>(dynamics.table.depth()),
                static_cast<std::uint32_t>(dynamics.params.max_iter), dynamics.table.radius};
  return GridField(region, width, height, std::move(codes), std::move(meta));
}

std::vector<std::uint8_t> encode_grid(const GridField& grid) {
  const GridMeta& meta = grid.meta();
  if (meta.spec_name.size() > 0xFFFF) throw GridFormatError("spec name longer than 65535 bytes");
  if (meta.parameters.size() > 0xFF) throw GridFormatError("more than 255 parameters");
  Writer w;
  w.bytes(kMagic.data(), kMagic.size());
  w.u8(kVersion);
  w.u32(grid.width());
  w.u32(grid.height());
  w.f64(grid.region().x_min);
  w.f64(grid.region().x_max);
  w.f64(grid.region().y_min);
  w.f64(grid.region().y_max);
  w.u32(meta.horizon);
  w.u32(meta.max_iter);
  w.f64(meta.radius);
  w.u16(static_cast<std::uint16_t>(meta.spec_name.size()));
  w.bytes(meta.spec_name.data(), meta.spec_name.size());
  w.u8(static_cast<std::uint8_t>(meta.parameters.size()));
  for (const Complex& p : meta.parameters) {
    w.f64(p.real());
    w.f64(p.imag());
  }
  w.bytes(grid.codes().data(), grid.codes().size());
  return w.take();
}

GridField decode_grid(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  const auto* magic = r.take(4, "magic");
  if (!std::equal(kMagic.begin(), kMagic.end(), magic))
    throw GridFormatError("bad magic: expected \"JWSG\"");
  const std::uint8_t version = r.u8("version");
  if (version != kVersion)
    throw GridFormatError("unsupported version " + std::to_string(version) + " (expected 1)");
  const std::uint32_t width = r.u32("width");
  const std::uint32_t height = r.u32("height");
  Region region;
  region.x_min = r.f64("region.x_min");
  region.x_max = r.f64("region.x_max");
  region.y_min = r.f64("region.y_min");
  region.y_max = r.f64("region.y_max");
  try {
    region.validate();
  } catch (const DomainError&) {
    throw GridFormatError("invalid region bounds");
  }
  GridMeta meta;
  meta.horizon = r.u32("horizon");
  meta.max_iter = r.u32("max_iter");
  meta.radius = r.f64("R");
  const std::uint16_t name_len = r.u16("spec name length");
  const auto* name = r.take(name_len, "spec name");
  meta.spec_name.assign(reinterpret_cast<const char*>(name), name_len);
  const std::uint8_t n_params = r.u8("parameter count");
  for (std::uint8_t k = 0; k < n_params; ++k) {
    const double re = r.f64("parameter value");
    const double im = r.f64("parameter value");
    meta.parameters.emplace_back(re, im);
  }
  const std::size_t n_cells = static_cast<std::size_t>(width) * height;
  if (width == 0 || height == 0) throw GridFormatError("width and height must be nonzero");
  if (r.remaining() < n_cells)
    throw GridFormatError("truncated grid file: label data has " + std::to_string(r.remaining()) +
                          " of " + std::to_string(n_cells) + " bytes");
  if (r.remaining() > n_cells) throw GridFormatError("label data length exceeds width x height");
  const auto* labels = r.take(n_cells, "label data");
  return GridField(region, width, height, std::vector<std::uint8_t>(labels, labels + n_cells), std::move(meta));
}

void save_grid(const GridField& grid, const std::filesystem::path& path) {
  const auto bytes = encode_grid(grid);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

GridField load_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_grid(bytes);
}

Rgb palette(std::uint8_t code) {
  switch (code) {
    case 0:
      return {255, 255, 255};
    case 1:
      return {200, 200, 200};
    case 2:
      return {0, 0, 0};
    default:
      break;
  }
  static constexpr std::array<Rgb, 8> basins{{{31, 119, 180},
                                              {255, 127, 14},
                                              {44, 160, 44},
                                              {148, 103, 189},
                                              {140, 86, 75},
                                              {227, 119, 194},
                                              {188, 189, 34},
                                              {23, 190, 207}}};
  return basins[(code - 3) % basins.size()];
}

void write_ppm(const GridField& grid, const std::filesystem::path& path, const std::vector<CellIndex>& overlay,
               Rgb overlay_colour) {
  std::vector<Rgb> pixels(grid.size());
  for (std::size_t k = 0; k < pixels.size(); ++k) pixels[k] = palette(grid.codes()[k]);
  for (const CellIndex& c : overlay) pixels[grid.index(c.i, c.j)] = overlay_colour;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "P6\n" << grid.width() << ' ' << grid.height() << "\n255\n";
  for (const Rgb& p : pixels) {
    const char rgb[3] = {static_cast<char>(p.r), static_cast<char>(p.g), static_cast<char>(p.b)};
    out.write(rgb, 3);
  }
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace jws
