#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace cid::testing {

struct SvgElement {
  std::string tag;
  std::map<std::string, std::string> attrs;
  std::string panel;  // id of the enclosing <g class="panel">, if any

  bool HasClass(const std::string& cls) const;
  double Number(const std::string& key) const;
};

// Inverse of the pixel mapping a panel declares in its data-* attributes.
struct PanelAxes {
  double x_d0, x_d1, x_r0, x_r1;
  double y_d0, y_d1, y_r0, y_r1;

  double DataX(double px) const { return x_d0 + (px - x_r0) / (x_r1 - x_r0) * (x_d1 - x_d0); }
  double DataY(double py) const { return y_d0 + (py - y_r0) / (y_r1 - y_r0) * (y_d1 - y_d0); }
  // Data units per pixel.
  double XPerPx() const { return std::abs((x_d1 - x_d0) / (x_r1 - x_r0)); }
  double YPerPx() const { return std::abs((y_d1 - y_d0) / (y_r1 - y_r0)); }
};

class SvgReader {
 public:
  explicit SvgReader(const std::string& text);

  std::vector<SvgElement> WithClass(const std::string& cls) const;
  std::vector<SvgElement> WithTag(const std::string& tag) const;
  const SvgElement& Panel(const std::string& id) const;
  PanelAxes Axes(const std::string& panel_id) const;

  const std::vector<SvgElement>& elements() const { return elements_; }

 private:
  std::vector<SvgElement> elements_;
};

// "x1,y1 x2,y2 ..." from a polyline.
std::vector<std::pair<double, double>> PolylinePoints(const std::string& points);

}  // namespace cid::testing
