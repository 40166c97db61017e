#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "jws/complex_core.hpp"
#include "jws/orbits.hpp"

namespace jws {

struct Region {
  double x_min = -20.0, x_max = 20.0, y_min = -20.0, y_max = 20.0;

  /// Throws DomainError unless x_min < x_max and y_min < y_max.
  void validate() const;
  bool contains(Complex z) const {
    return z.real() >= x_min && z.real() <= x_max && z.imag() >= y_min && z.imag() <= y_max;
  }
  bool operator==(const Region&) const = default;
};

struct GridMeta {
  std::string spec_name;
  std::vector<Complex> parameters;
  std::uint32_t horizon = 0;
  std::uint32_t max_iter = 0;
  double radius = 0.0;  // escape radius R used for the A_R levels

  bool operator==(const GridMeta&) const = default;
};

struct CellIndex {
  int i = 0;  // column, x increases with i
  int j = 0;  // row, y decreases with j (row 0 is the top edge y_max)

  bool operator==(const CellIndex&) const = default;
};

/// Immutable raster of labels. Cell (i, j) has centre
/// (x_min + (i + 1/2) dx, y_max - (j + 1/2) dy).
class GridField {
 public:
  GridField(Region region, std::uint32_t width, std::uint32_t height, std::vector<std::uint8_t> codes,
            GridMeta meta);

  const Region& region() const { return region_; }
  std::uint32_t width() const { return width_; }
  std::uint32_t height() const { return height_; }
  const GridMeta& meta() const { return meta_; }
  const std::vector<std::uint8_t>& codes() const { return codes_; }

  std::size_t size() const { return codes_.size(); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * width_ + i; }
  std::uint8_t code(int i, int j) const { return codes_[index(i, j)]; }
  Label label(int i, int j) const { return Label::from_code(code(i, j)); }

  double dx() const { return (region_.x_max - region_.x_min) / width_; }
  double dy() const { return (region_.y_max - region_.y_min) / height_; }
  Complex cell_center(int i, int j) const {
    return {region_.x_min + (i + 0.5) * dx(), region_.y_max - (j + 0.5) * dy()};
  }
  /// Cell containing z, clamped to the grid.
  CellIndex cell_of(Complex z) const;

  bool operator==(const GridField&) const = default;

 private:
  Region region_;
  std::uint32_t width_ = 0, height_ = 0;
  std::vector<std::uint8_t> codes_;
  GridMeta meta_;
};

struct RenderParams {
  unsigned threads = 0;      // 0 = hardware concurrency
  bool supersample = false;  // 2x2 majority vote per cell
};

/// Classifies every cell centre. Rows are split across worker threads; the
/// output does not depend on the thread count.
GridField render(const Dynamics& dynamics, const Region& region, std::uint32_t width, std::uint32_t height,
                 const RenderParams& params = {});

/// Grid file ("JWSG", version 1, little-endian).
void save_grid(const GridField& grid, const std::filesystem::path& path);
GridField load_grid(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_grid(const GridField& grid);
GridField decode_grid(const std::vector<std::uint8_t>& bytes);

class GridFormatError : public Error {
 public:
  using Error::Error;
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Fixed palette: FastEscaping white, Escaping light gray, Undetermined black,
/// basins coloured by cycle id.
Rgb palette(std::uint8_t code);

/// Binary PPM (P6). Overlay cells are drawn in the overlay colour.
void write_ppm(const GridField& grid, const std::filesystem::path& path,
               const std::vector<CellIndex>& overlay = {}, Rgb overlay_colour = {255, 0, 0});

}  // namespace jws
