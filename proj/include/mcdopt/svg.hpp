#pragma once

// Minimal SVG line chart: linear x axis, log10 y axis, one polyline per
// series. Output depends only on the data, so identical input gives
// byte-identical files.

#include <string>
#include <utility>
#include <vector>

namespace mcdopt::svg {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x, y), y > 0
};

class LogLineChart {
 public:
  LogLineChart(std::string title, std::string x_label, std::string y_label)
      : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

  void add_series(Series s) { series_.push_back(std::move(s)); }
  std::string render() const;

  static constexpr int kWidth = 640;
  static constexpr int kHeight = 420;

 private:
  std::string title_;
  std::string x_label_;
  std::string y_label_;
  std::vector<Series> series_;
};

std::string escape_xml(const std::string& s);

}  // namespace mcdopt::svg
