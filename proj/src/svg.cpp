#include "topics/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "topics/errors.hpp"

namespace topics::svg {

namespace {

std::string fmt(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string rgb(int r, int g, int b) {
  char buffer[8];
  std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", r, g, b);
  return buffer;
}

constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 48.0;

struct Range {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  void include(double value) {
    min = std::min(min, value);
    max = std::max(max, value);
  }
  void pad_if_flat() {
    if (!(max > min)) {
      min -= 0.5;
      max += 0.5;
    }
  }
};

}  // namespace

Canvas::Canvas(double width, double height) : width_(width), height_(height) {}

void Canvas::line(double x1, double y1, double x2, double y2,
                  std::string_view color, double stroke_width) {
  body_ += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" +
           fmt(x2) + "\" y2=\"" + fmt(y2) + "\" stroke=\"" +
           std::string(color) + "\" stroke-width=\"" + fmt(stroke_width) +
           "\"/>\n";
}

void Canvas::rect(double x, double y, double w, double h,
                  std::string_view fill, std::string_view stroke) {
  body_ += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" +
           fmt(w) + "\" height=\"" + fmt(h) + "\" fill=\"" +
           std::string(fill) + "\" stroke=\"" + std::string(stroke) + "\"/>\n";
}

void Canvas::circle(double cx, double cy, double r, std::string_view fill) {
  body_ += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" +
           fmt(r) + "\" fill=\"" + std::string(fill) + "\"/>\n";
}

void Canvas::polyline(const std::vector<std::pair<double, double>>& points,
                      std::string_view color, double stroke_width) {
  body_ += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"" + fmt(stroke_width) + "\" points=\"";
  for (const auto& [x, y] : points) {
    body_ += fmt(x) + "," + fmt(y) + " ";
  }
  body_ += "\"/>\n";
}

void Canvas::text(double x, double y, std::string_view content, double size,
                  std::string_view anchor, std::string_view color) {
  body_ += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) +
           "\" font-family=\"sans-serif\" font-size=\"" + fmt(size) +
           "\" text-anchor=\"" + std::string(anchor) + "\" fill=\"" +
           std::string(color) + "\">" + escape(content) + "</text>\n";
}

std::string Canvas::finish() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width_) +
         "\" height=\"" + fmt(height_) + "\" viewBox=\"0 0 " + fmt(width_) +
         " " + fmt(height_) + "\">\n<rect width=\"100%\" height=\"100%\" " +
         "fill=\"white\"/>\n" + body_ + "</svg>\n";
}

void Canvas::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InputError("cannot write SVG file: " + path.string());
  }
  out << finish();
}

std::string series_color(int index) {
  static const char* kPalette[] = {
      "#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860",
      "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd", "#1f77b4", "#ff7f0e",
      "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
      "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39"};
  constexpr int kCount = static_cast<int>(std::size(kPalette));
  return kPalette[((index % kCount) + kCount) % kCount];
}

std::string heat_color(double unit_value) {
  // compact viridis approximation over a few anchors
  static constexpr double kAnchors[][3] = {
      {68, 1, 84},    {59, 82, 139},   {33, 145, 140},
      {94, 201, 98},  {253, 231, 37}};
  const double clamped = std::clamp(unit_value, 0.0, 1.0);
  const double position = clamped * (std::size(kAnchors) - 1);
  const int low = static_cast<int>(position);
  const int high = std::min<int>(low + 1, std::size(kAnchors) - 1);
  const double f = position - low;
  auto channel = [&](int c) {
    return static_cast<int>(std::lround(kAnchors[low][c] +
                                        (kAnchors[high][c] - kAnchors[low][c]) *
                                            f));
  };
  return rgb(channel(0), channel(1), channel(2));
}

LinearScale::LinearScale(double domain_min, double domain_max, double range_min,
                         double range_max)
    : domain_min_(domain_min),
      domain_max_(domain_max),
      range_min_(range_min),
      range_max_(range_max) {}

double LinearScale::operator()(double value) const {
  const double span = domain_max_ - domain_min_;
  const double fraction = span != 0.0 ? (value - domain_min_) / span : 0.5;
  return range_min_ + fraction * (range_max_ - range_min_);
}

namespace {

void draw_axes(Canvas& canvas, double width, double height, const Range& x,
               const Range& y, std::string_view title,
               std::string_view x_label, std::string_view y_label) {
  const double x0 = kMarginLeft;
  const double x1 = width - kMarginRight;
  const double y0 = height - kMarginBottom;
  const double y1 = kMarginTop;
  canvas.line(x0, y0, x1, y0, "#222");
  canvas.line(x0, y0, x0, y1, "#222");
  canvas.text(width / 2, 18, title, 13, "middle");
  canvas.text(width / 2, height - 10, x_label, 11, "middle");
  canvas.text(14, height / 2, y_label, 11, "middle");
  canvas.text(x0, y0 + 16, fmt(x.min), 9, "start", "#555");
  canvas.text(x1, y0 + 16, fmt(x.max), 9, "end", "#555");
  canvas.text(x0 - 6, y0, fmt(y.min), 9, "end", "#555");
  canvas.text(x0 - 6, y1 + 4, fmt(y.max), 9, "end", "#555");
}

}  // namespace

void write_curve(const std::filesystem::path& path,
                 const std::vector<Series>& series, std::string_view title,
                 std::string_view x_label, std::string_view y_label,
                 bool log_log) {
  const double width = 560;
  const double height = 400;
  Canvas canvas(width, height);

  auto transform = [&](double v) { return log_log ? std::log10(v) : v; };
  Range x_range;
  Range y_range;
  for (const Series& s : series) {
    for (double v : s.xs) {
      x_range.include(transform(v));
    }
    for (double v : s.ys) {
      y_range.include(transform(v));
    }
  }
  x_range.pad_if_flat();
  y_range.pad_if_flat();

  LinearScale sx(x_range.min, x_range.max, kMarginLeft, width - kMarginRight);
  LinearScale sy(y_range.min, y_range.max, height - kMarginBottom, kMarginTop);

  draw_axes(canvas, width, height, x_range, y_range, title, x_label, y_label);
  int index = 0;
  for (const Series& s : series) {
    const std::string color = series_color(index);
    std::vector<std::pair<double, double>> pixels;
    pixels.reserve(s.xs.size());
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      pixels.emplace_back(sx(transform(s.xs[i])), sy(transform(s.ys[i])));
    }
    canvas.polyline(pixels, color);
    for (const auto& [px, py] : pixels) {
      canvas.circle(px, py, 2.2, color);
    }
    if (series.size() > 1) {
      canvas.text(width - kMarginRight, kMarginTop + 14 * (index + 1), s.label,
                  10, "end", color);
    }
    ++index;
  }
  canvas.save(path);
}

void write_histogram(const std::filesystem::path& path,
                     const std::vector<std::int64_t>& bins, int bin_width,
                     std::string_view title, std::string_view x_label) {
  const double width = 560;
  const double height = 400;
  Canvas canvas(width, height);

  Range x_range;
  x_range.include(0);
  x_range.include(static_cast<double>(bins.size() * bin_width));
  Range y_range;
  y_range.include(0);
  for (std::int64_t count : bins) {
    y_range.include(static_cast<double>(count));
  }
  x_range.pad_if_flat();
  y_range.pad_if_flat();

  LinearScale sx(x_range.min, x_range.max, kMarginLeft, width - kMarginRight);
  LinearScale sy(y_range.min, y_range.max, height - kMarginBottom, kMarginTop);
  draw_axes(canvas, width, height, x_range, y_range, title, x_label,
            "documents");
  for (std::size_t bin = 0; bin < bins.size(); ++bin) {
    const double left = sx(static_cast<double>(bin * bin_width));
    const double right = sx(static_cast<double>((bin + 1) * bin_width));
    const double top = sy(static_cast<double>(bins[bin]));
    const double bottom = sy(0);
    canvas.rect(left, top, std::max(right - left - 0.5, 0.5), bottom - top,
                "#4c72b0");
  }
  canvas.save(path);
}

void write_stacked_bars(const std::filesystem::path& path,
                        const std::vector<std::string>& column_labels,
                        const std::vector<std::string>& series_labels,
                        const Eigen::MatrixXd& values,
                        std::string_view title) {
  const double legend_width = 190;
  const double width = 620 + legend_width;
  const double height = 420;
  Canvas canvas(width, height);

  double max_total = 0;
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    max_total = std::max(max_total, values.col(c).sum());
  }
  if (max_total <= 0) {
    max_total = 1;
  }

  const double plot_left = kMarginLeft;
  const double plot_right = width - legend_width - kMarginRight;
  const double plot_bottom = height - kMarginBottom;
  const double plot_top = kMarginTop;
  const double columns = static_cast<double>(values.cols());
  const double slot = (plot_right - plot_left) / std::max(columns, 1.0);
  const double bar = slot * 0.85;

  canvas.text(width / 2 - legend_width / 2, 18, title, 13, "middle");
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    double y = plot_bottom;
    for (Eigen::Index s = 0; s < values.rows(); ++s) {
      const double fraction = values(s, c) / max_total;
      const double segment = fraction * (plot_bottom - plot_top);
      y -= segment;
      canvas.rect(plot_left + c * slot + (slot - bar) / 2, y, bar, segment,
                  series_color(static_cast<int>(s)));
    }
    if (values.cols() <= 40 || c % 5 == 0) {
      canvas.text(plot_left + c * slot + slot / 2, plot_bottom + 14,
                  column_labels[static_cast<std::size_t>(c)], 8, "middle",
                  "#555");
    }
  }
  canvas.line(plot_left, plot_bottom, plot_right, plot_bottom, "#222");
  for (std::size_t s = 0; s < series_labels.size(); ++s) {
    const double y = plot_top + 13 * (static_cast<double>(s) + 1);
    canvas.rect(width - legend_width, y - 8, 9, 9,
                series_color(static_cast<int>(s)));
    canvas.text(width - legend_width + 13, y, series_labels[s], 9);
  }
  canvas.save(path);
}

void write_heatmap(const std::filesystem::path& path,
                   const Eigen::MatrixXd& values,
                   const std::vector<std::string>& row_labels,
                   const std::vector<std::string>& column_labels,
                   std::string_view title) {
  const double label_width = 150;
  const double cell = std::clamp(
      560.0 / std::max<double>(static_cast<double>(values.cols()), 1.0), 9.0,
      26.0);
  const double width =
      label_width + cell * static_cast<double>(values.cols()) + 40;
  const double height =
      kMarginTop + cell * static_cast<double>(values.rows()) + 90;
  Canvas canvas(width, height);
  canvas.text(width / 2, 18, title, 13, "middle");

  double low = std::numeric_limits<double>::infinity();
  double high = -low;
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (!std::isnan(values(r, c))) {
        low = std::min(low, values(r, c));
        high = std::max(high, values(r, c));
      }
    }
  }
  if (!(high > low)) {
    low = 0;
    high = 1;
  }

  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      const double value = values(r, c);
      const std::string fill =
          std::isnan(value) ? "#000000"
                            : heat_color((value - low) / (high - low));
      canvas.rect(label_width + cell * static_cast<double>(c),
                  kMarginTop + cell * static_cast<double>(r), cell, cell, fill);
    }
    canvas.text(label_width - 6,
                kMarginTop + cell * static_cast<double>(r) + cell * 0.7,
                row_labels[static_cast<std::size_t>(r)], 9, "end");
  }
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    canvas.text(label_width + cell * static_cast<double>(c) + cell / 2,
                kMarginTop + cell * static_cast<double>(values.rows()) + 12,
                column_labels[static_cast<std::size_t>(c)], 8, "middle");
  }
  canvas.text(label_width, height - 40,
              "scale: " + fmt(low) + " (dark) to " + fmt(high) + " (bright)", 9);
  canvas.save(path);
}

void write_scatter(const std::filesystem::path& path,
                   const std::vector<LabeledPoint>& points,
                   std::string_view title) {
  const double width = 560;
  const double height = 480;
  Canvas canvas(width, height);

  Range x_range;
  Range y_range;
  for (const LabeledPoint& p : points) {
    x_range.include(p.x);
    y_range.include(p.y);
  }
  x_range.pad_if_flat();
  y_range.pad_if_flat();

  LinearScale sx(x_range.min, x_range.max, kMarginLeft, width - kMarginRight);
  LinearScale sy(y_range.min, y_range.max, height - kMarginBottom, kMarginTop);
  draw_axes(canvas, width, height, x_range, y_range, title, "dimension 1",
            "dimension 2");
  for (const LabeledPoint& p : points) {
    canvas.circle(sx(p.x), sy(p.y), 3.5, "#4c72b0");
    canvas.text(sx(p.x) + 5, sy(p.y) - 4, p.label, 9);
  }
  canvas.save(path);
}

void write_trajectory_path(const std::filesystem::path& path,
                           const std::vector<int>& years,
                           const std::vector<double>& xs,
                           const std::vector<double>& ys,
                           std::string_view x_label, std::string_view y_label,
                           std::string_view title) {
  const double width = 560;
  const double height = 480;
  Canvas canvas(width, height);

  Range x_range;
  Range y_range;
  for (double v : xs) {
    x_range.include(v);
  }
  for (double v : ys) {
    y_range.include(v);
  }
  x_range.pad_if_flat();
  y_range.pad_if_flat();

  LinearScale sx(x_range.min, x_range.max, kMarginLeft, width - kMarginRight);
  LinearScale sy(y_range.min, y_range.max, height - kMarginBottom, kMarginTop);
  draw_axes(canvas, width, height, x_range, y_range, title, x_label, y_label);

  std::vector<std::pair<double, double>> pixels;
  pixels.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    pixels.emplace_back(sx(xs[i]), sy(ys[i]));
  }
  canvas.polyline(pixels, "#4c72b0");
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    canvas.circle(pixels[i].first, pixels[i].second, 2.6, "#4c72b0");
  }
  if (!years.empty()) {
    canvas.text(pixels.front().first + 5, pixels.front().second - 5,
                std::to_string(years.front()), 10, "start", "#c44e52");
    canvas.text(pixels.back().first + 5, pixels.back().second - 5,
                std::to_string(years.back()), 10, "start", "#c44e52");
  }
  canvas.save(path);
}

void write_density_map(const std::filesystem::path& path,
                       const Eigen::VectorXd& grid_x,
                       const Eigen::VectorXd& grid_y,
                       const Eigen::MatrixXd& density,
                       const std::vector<std::pair<double, double>>& samples,
                       std::string_view title) {
  const double width = 560;
  const double height = 520;
  Canvas canvas(width, height);

  const double x_min = grid_x(0);
  const double x_max = grid_x(grid_x.size() - 1);
  const double y_min = grid_y(0);
  const double y_max = grid_y(grid_y.size() - 1);
  LinearScale sx(x_min, x_max, kMarginLeft, width - kMarginRight);
  LinearScale sy(y_min, y_max, height - kMarginBottom, kMarginTop);

  const double peak = std::max(density.maxCoeff(), 1e-300);
  const double cell_w = (sx(x_max) - sx(x_min)) /
                        std::max<double>(static_cast<double>(grid_x.size()) - 1,
                                         1.0);
  const double cell_h = (sy(y_min) - sy(y_max)) /
                        std::max<double>(static_cast<double>(grid_y.size()) - 1,
                                         1.0);
  for (Eigen::Index iy = 0; iy < grid_y.size(); ++iy) {
    for (Eigen::Index ix = 0; ix < grid_x.size(); ++ix) {
      canvas.rect(sx(grid_x(ix)) - cell_w / 2, sy(grid_y(iy)) - cell_h / 2,
                  cell_w + 0.5, cell_h + 0.5,
                  heat_color(density(iy, ix) / peak));
    }
  }
  for (const auto& [x, y] : samples) {
    canvas.circle(sx(x), sy(y), 1.4, "#ffffff");
  }
  Range x_range;
  x_range.include(x_min);
  x_range.include(x_max);
  Range y_range;
  y_range.include(y_min);
  y_range.include(y_max);
  draw_axes(canvas, width, height, x_range, y_range, title, "dimension 1",
            "dimension 2");
  canvas.save(path);
}

void write_table(const std::filesystem::path& path,
                 const std::vector<std::string>& headers,
                 const std::vector<std::vector<std::string>>& rows,
                 std::string_view title) {
  const double cell_w = 130;
  const double cell_h = 16;
  const double width =
      40 + cell_w * static_cast<double>(std::max<std::size_t>(headers.size(), 1));
  const double height = 60 + cell_h * static_cast<double>(rows.size() + 1);
  Canvas canvas(width, height);
  canvas.text(width / 2, 18, title, 13, "middle");
  for (std::size_t c = 0; c < headers.size(); ++c) {
    canvas.text(20 + cell_w * static_cast<double>(c), 44, headers[c], 10,
                "start", "#000");
  }
  canvas.line(20, 50, width - 20, 50, "#222");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size() && c < headers.size(); ++c) {
      canvas.text(20 + cell_w * static_cast<double>(c),
                  44 + cell_h * static_cast<double>(r + 1), rows[r][c], 9);
    }
  }
  canvas.save(path);
}

}  // namespace topics::svg
