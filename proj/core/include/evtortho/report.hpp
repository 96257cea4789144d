#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace evt {

/// Number of grid points every density curve is evaluated on.
inline constexpr std::size_t kKdeGridSize = 256;

/// Gaussian kernel density estimate on the fixed grid over [-1, 1].
struct DensityCurve {
  std::array<double, kKdeGridSize> grid;     ///< equally spaced on [-1, 1]
  std::array<double, kKdeGridSize> density;  ///< kernel density values
  double bandwidth = 0.0;
};

/// Silverman-rule Gaussian KDE: bandwidth 0.9*min(sd, IQR/1.34)*m^(-1/5)
/// (sd alone when the IQR is zero). Requires at least 2 distinct values
/// (std::invalid_argument otherwise).
DensityCurve kde(const std::vector<double>& values);

/// One violin: a labeled sample with a headline number printed above it.
struct ViolinGroup {
  std::string label;
  std::vector<double> values;
  double header_annotation = 0.0;
};

struct ViolinSpec {
  std::vector<ViolinGroup> groups;
  std::array<double, 2> y_range = {-1.0, 1.0};
  std::string title;
  std::string y_label;
};

/// Render mirrored-KDE violins (truncated to each group's data range, no
/// inner box) as a standalone SVG document. Pure function of the spec:
/// byte-stable, timestamp-free. Values outside y_range are an error, never
/// silently clamped.
std::string render_violins_svg(const ViolinSpec& spec);

/// render_violins_svg written to `path`; throws std::runtime_error on I/O
/// failure.
void render_violins(const ViolinSpec& spec, const std::string& path);

}  // namespace evt
