#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace topics::svg {

// Minimal SVG writer; all coordinates are formatted with fixed precision so
// repeated runs emit identical bytes.
class Canvas {
 public:
  Canvas(double width, double height);

  void line(double x1, double y1, double x2, double y2, std::string_view color,
            double stroke_width = 1.0);
  void rect(double x, double y, double w, double h, std::string_view fill,
            std::string_view stroke = "none");
  void circle(double cx, double cy, double r, std::string_view fill);
  void polyline(const std::vector<std::pair<double, double>>& points,
                std::string_view color, double stroke_width = 1.5);
  void text(double x, double y, std::string_view content, double size = 11.0,
            std::string_view anchor = "start", std::string_view color = "#222");

  std::string finish() const;
  void save(const std::filesystem::path& path) const;

 private:
  double width_;
  double height_;
  std::string body_;
};

// Categorical color for topic/series index.
std::string series_color(int index);

// Sequential colormap for heat values in [0, 1] (dark blue to yellow).
std::string heat_color(double unit_value);

// Maps data space linearly onto a pixel range.
class LinearScale {
 public:
  LinearScale(double domain_min, double domain_max, double range_min,
              double range_max);
  double operator()(double value) const;

 private:
  double domain_min_, domain_max_, range_min_, range_max_;
};

struct Series {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

void write_curve(const std::filesystem::path& path,
                 const std::vector<Series>& series, std::string_view title,
                 std::string_view x_label, std::string_view y_label,
                 bool log_log = false);

void write_histogram(const std::filesystem::path& path,
                     const std::vector<std::int64_t>& bins, int bin_width,
                     std::string_view title, std::string_view x_label);

// One column per label, segments stacked bottom-up in series order.
void write_stacked_bars(const std::filesystem::path& path,
                        const std::vector<std::string>& column_labels,
                        const std::vector<std::string>& series_labels,
                        const Eigen::MatrixXd& values,  // series x columns
                        std::string_view title);

// Missing cells (NaN) are drawn black.
void write_heatmap(const std::filesystem::path& path,
                   const Eigen::MatrixXd& values,
                   const std::vector<std::string>& row_labels,
                   const std::vector<std::string>& column_labels,
                   std::string_view title);

struct LabeledPoint {
  std::string label;
  double x = 0.0;
  double y = 0.0;
};

void write_scatter(const std::filesystem::path& path,
                   const std::vector<LabeledPoint>& points,
                   std::string_view title);

// Year-ordered polyline with endpoint year labels.
void write_trajectory_path(const std::filesystem::path& path,
                           const std::vector<int>& years,
                           const std::vector<double>& xs,
                           const std::vector<double>& ys,
                           std::string_view x_label, std::string_view y_label,
                           std::string_view title);

void write_density_map(const std::filesystem::path& path,
                       const Eigen::VectorXd& grid_x,
                       const Eigen::VectorXd& grid_y,
                       const Eigen::MatrixXd& density,  // (iy, ix)
                       const std::vector<std::pair<double, double>>& samples,
                       std::string_view title);

void write_table(const std::filesystem::path& path,
                 const std::vector<std::string>& headers,
                 const std::vector<std::vector<std::string>>& rows,
                 std::string_view title);

}  // namespace topics::svg
