#include "cid/render.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>

#include <fmt/format.h>

#include "cid/errors.hpp"

namespace cid {
namespace {

constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 30.0;
constexpr double kMarginTop = 50.0;
constexpr double kMarginBottom = 50.0;
constexpr double kPanelGap = 60.0;

struct Axis {
  double d0, d1;  // data domain
  double r0, r1;  // pixel range

  double Map(double v) const { return r0 + (v - d0) / (d1 - d0) * (r1 - r0); }
};

struct Panel {
  Axis x;
  Axis y;
  double left() const { return x.r0; }
  double right() const { return x.r1; }
  double bottom() const { return y.r0; }
  double top() const { return y.r1; }
};

std::string Px(double v) { return fmt::format("{:.2f}", v); }

std::string Escape(std::string_view text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round step in {1, 2, 5} x 10^k giving roughly `target` intervals.
double NiceStep(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double nice = norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

std::vector<double> Ticks(double lo, double hi, int target = 6) {
  const double step = NiceStep(hi - lo, target);
  std::vector<double> ticks;
  const double first = std::ceil(lo / step - 1e-9) * step;
  for (double v = first; v <= hi + step * 1e-9; v += step) {
    ticks.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
  }
  return ticks;
}

std::pair<double, double> KnobDomain(const CidCurve& curve) {
  double lo = curve.points.front().t;
  double hi = curve.points.back().t;
  if (hi - lo <= 0.0) {
    lo -= 1.0;
    hi += 1.0;
  }
  return {lo, hi};
}

class SvgDocument {
 public:
  SvgDocument(int width, int height) {
    body_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    body_ += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"11\">\n",
        width, height);
    body_ += fmt::format(
        "<rect class=\"background\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" "
        "fill=\"white\"/>\n",
        width, height);
  }

  void Raw(std::string_view s) { body_ += s; }

  void Line(std::string_view cls, double x1, double y1, double x2, double y2,
            std::string_view stroke, double width = 1.0, std::string_view extra = {}) {
    body_ += fmt::format(
        "<line class=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" "
        "stroke-width=\"{}\"{}/>\n",
        cls, Px(x1), Px(y1), Px(x2), Px(y2), stroke, width, extra);
  }

  void Rect(std::string_view cls, double x, double y, double w, double h,
            std::string_view fill, std::string_view extra = {}) {
    body_ += fmt::format(
        "<rect class=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"{}/>\n",
        cls, Px(x), Px(y), Px(w), Px(h), fill, extra);
  }

  void Text(std::string_view cls, double x, double y, std::string_view anchor,
            std::string_view text, std::string_view extra = {}) {
    body_ += fmt::format("<text class=\"{}\" x=\"{}\" y=\"{}\" text-anchor=\"{}\"{}>{}</text>\n",
                         cls, Px(x), Px(y), anchor, extra, Escape(text));
  }

  void OpenPanel(std::string_view id, const Panel& p, std::string_view extra = {}) {
    body_ += fmt::format(
        "<g class=\"panel\" id=\"{}\" data-x-domain=\"{:.17g} {:.17g}\" "
        "data-x-range=\"{:.17g} {:.17g}\" data-y-domain=\"{:.17g} {:.17g}\" "
        "data-y-range=\"{:.17g} {:.17g}\"{}>\n",
        id, p.x.d0, p.x.d1, p.x.r0, p.x.r1, p.y.d0, p.y.d1, p.y.r0, p.y.r1, extra);
  }

  void Close() { body_ += "</g>\n"; }

  std::string Finish() {
    body_ += "</svg>\n";
    return std::move(body_);
  }

 private:
  std::string body_;
};

void DrawAxes(SvgDocument& svg, const Panel& p, std::string_view x_label,
              std::string_view y_label, int x_ticks = 8, int y_ticks = 5) {
  svg.Line("axis", p.left(), p.bottom(), p.right(), p.bottom(), "black");
  svg.Line("axis", p.left(), p.bottom(), p.left(), p.top(), "black");
  for (const double v : Ticks(p.x.d0, p.x.d1, x_ticks)) {
    const double x = p.x.Map(v);
    svg.Line("tick", x, p.bottom(), x, p.bottom() + 4.0, "black");
    svg.Text("tick-label", x, p.bottom() + 16.0, "middle", fmt::format("{:g}", v));
  }
  for (const double v : Ticks(p.y.d0, p.y.d1, y_ticks)) {
    const double y = p.y.Map(v);
    svg.Line("tick", p.left() - 4.0, y, p.left(), y, "black");
    svg.Text("tick-label", p.left() - 7.0, y + 4.0, "end", fmt::format("{:g}", v));
  }
  if (!x_label.empty()) {
    svg.Text("axis-label", 0.5 * (p.left() + p.right()), p.bottom() + 32.0, "middle",
             x_label);
  }
  if (!y_label.empty()) {
    const double cx = p.left() - 45.0;
    const double cy = 0.5 * (p.top() + p.bottom());
    svg.Text("axis-label", cx, cy, "middle", y_label,
             fmt::format(" transform=\"rotate(-90 {} {})\"", Px(cx), Px(cy)));
  }
}

void DrawCidPanel(SvgDocument& svg, const CidCurve& curve, const Panel& p,
                  const FigureSpec& spec, std::span<const double> snapshot_ts = {}) {
  svg.OpenPanel("cid-panel", p);
  DrawAxes(svg, p, "t", "CID(t)");

  if (curve.points.size() == 1) {
    const auto& pt = curve.points.front();
    svg.Raw(fmt::format(
        "<circle class=\"cid-marker\" cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n",
        Px(p.x.Map(pt.t)), Px(p.y.Map(pt.cid)), spec.colors.curve));
  } else {
    std::string coords;
    for (const auto& pt : curve.points) {
      if (!coords.empty()) coords += ' ';
      coords += Px(p.x.Map(pt.t)) + "," + Px(p.y.Map(pt.cid));
    }
    svg.Raw(fmt::format(
        "<polyline class=\"cid-curve\" points=\"{}\" fill=\"none\" stroke=\"{}\" "
        "stroke-width=\"1.5\"/>\n",
        coords, spec.colors.curve));
  }

  for (const double t : snapshot_ts) {
    const double x = p.x.Map(t);
    svg.Line("snapshot-line", x, p.bottom(), x, p.top(), "gray", 1.0,
             " stroke-dasharray=\"2,3\"");
  }
  if (spec.region_lines) {
    for (const double t : {spec.region_lines->first, spec.region_lines->second}) {
      const double x = p.x.Map(t);
      svg.Line("region-line", x, p.bottom(), x, p.top(), spec.colors.region, 1.5);
    }
  }
  if (spec.reference_line) {
    const double x = p.x.Map(*spec.reference_line);
    svg.Line("reference-line", x, p.bottom(), x, p.top(), spec.colors.reference, 1.5);
  }
  svg.Close();
}

void DrawIntervalPanel(SvgDocument& svg, const CidCurve& curve, const Panel& p,
                       const FigureSpec& spec, double boundary) {
  svg.OpenPanel("interval-panel", p);
  DrawAxes(svg, p, "t", "vote share (%)");
  if (boundary >= p.y.d0 && boundary <= p.y.d1) {
    const double y = p.y.Map(boundary);
    svg.Line("boundary-line", p.left(), y, p.right(), y, spec.colors.boundary, 1.0,
             " stroke-dasharray=\"4,3\"");
  }
  const std::size_t ref = curve.grid.ReferenceIndex();
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    if (i == ref) continue;
    const auto& pt = curve.points[i];
    const double x = p.x.Map(pt.t);
    svg.Line("interval-bar", x, p.y.Map(pt.interval->lower), x,
             p.y.Map(pt.interval->upper), spec.colors.interval, 1.0);
  }
  // Reference bar last so it sits on top.
  const auto& rp = curve.points[ref];
  const double x = p.x.Map(rp.t);
  svg.Line("interval-bar reference-interval", x, p.y.Map(rp.interval->lower), x,
           p.y.Map(rp.interval->upper), spec.colors.reference_interval, 2.5);
  svg.Close();
}

void RequireNonempty(const CidCurve& curve, const FigureSpec& spec) {
  if (curve.points.empty()) throw Error(Errc::kEmptyCurve, "cannot render an empty curve");
  if (spec.panels.empty() || spec.width_px <= 0 || spec.height_px <= 0) {
    throw Error(Errc::kUsage, "figure needs at least one panel and positive size");
  }
}

}  // namespace

FigureSpec ElectionFigureSpec(const CidCurve& curve,
                              std::optional<PlausibleRegion> region) {
  FigureSpec spec;
  spec.panels = {PanelKind::kCidCurve, PanelKind::kIntervalBars};
  spec.reference_line = curve.grid.t0();
  if (region) spec.region_lines = std::make_pair(region->lower, region->upper);
  spec.title = "Confidence in decision under additive measurement error";
  return spec;
}

FigureSpec LeadFigureSpec(const CidCurve& curve, const std::string& mechanism_name) {
  FigureSpec spec;
  spec.height_px = 600;
  spec.panels = {PanelKind::kCidCurve, PanelKind::kDistributionBars};
  spec.reference_line = curve.grid.t0();
  spec.title = fmt::format("Confidence in decision under MNAR tilt ({})", mechanism_name);
  return spec;
}

std::string RenderElectionFigure(const CidCurve& curve, const FigureSpec& spec) {
  RequireNonempty(curve, spec);
  for (const auto& pt : curve.points) {
    if (!pt.interval || !pt.j_t) {
      throw Error(Errc::kUsage, "election figure needs intervals and overlaps on every point");
    }
  }

  const auto [t_lo, t_hi] = KnobDomain(curve);
  const double w = spec.width_px;
  const double h = spec.height_px;
  const auto n_panels = static_cast<double>(spec.panels.size());
  const double panel_h =
      (h - kMarginTop - kMarginBottom - (n_panels - 1.0) * kPanelGap) / n_panels;

  double iv_lo = curve.points.front().interval->lower;
  double iv_hi = curve.points.front().interval->upper;
  for (const auto& pt : curve.points) {
    iv_lo = std::min(iv_lo, pt.interval->lower);
    iv_hi = std::max(iv_hi, pt.interval->upper);
  }
  if (iv_hi - iv_lo <= 0.0) {
    iv_lo -= 1.0;
    iv_hi += 1.0;
  }
  const double iv_step = NiceStep(iv_hi - iv_lo, 5);
  iv_lo = std::floor(iv_lo / iv_step) * iv_step;
  iv_hi = std::ceil(iv_hi / iv_step) * iv_step;

  SvgDocument svg(spec.width_px, spec.height_px);
  svg.Text("title", w / 2.0, 25.0, "middle", spec.title, " font-size=\"14\"");
  for (std::size_t i = 0; i < spec.panels.size(); ++i) {
    const double top = kMarginTop + static_cast<double>(i) * (panel_h + kPanelGap);
    const Axis x{t_lo, t_hi, kMarginLeft, w - kMarginRight};
    switch (spec.panels[i]) {
      case PanelKind::kCidCurve:
        DrawCidPanel(svg, curve, Panel{x, Axis{0.0, 2.0, top + panel_h, top}}, spec);
        break;
      case PanelKind::kIntervalBars:
        DrawIntervalPanel(svg, curve, Panel{x, Axis{iv_lo, iv_hi, top + panel_h, top}},
                          spec, 50.0);
        break;
      case PanelKind::kDistributionBars:
        throw Error(Errc::kUsage, "election figure has no distribution panel");
    }
  }
  return svg.Finish();
}

std::vector<Snapshot> SnapshotsAt(const CidCurve& curve, std::span<const double> ts) {
  std::vector<Snapshot> out;
  for (const double t : ts) {
    const auto idx = curve.NearestIndex(t);
    if (!idx) {
      throw Error(Errc::kSnapshotOffGrid,
                  fmt::format("snapshot off grid: t = {} is not a grid point", t));
    }
    const auto& pt = curve.points[*idx];
    if (pt.completed_freqs.empty()) {
      throw Error(Errc::kUsage, "curve carries no completed-data frequencies");
    }
    out.push_back({pt.t, CategoricalDistribution::FromWeights(pt.completed_freqs)});
  }
  return out;
}

std::string RenderLeadFigure(const CidCurve& curve, std::span<const Snapshot> snapshots,
                             const FigureSpec& spec) {
  if (snapshots.empty()) throw Error(Errc::kUsage, "lead figure needs at least one snapshot");
  RequireNonempty(curve, spec);
  std::vector<double> snapshot_ts;
  for (const auto& s : snapshots) {
    const auto idx = curve.NearestIndex(s.t);
    if (!idx) {
      throw Error(Errc::kSnapshotOffGrid,
                  fmt::format("snapshot off grid: t = {} is not a grid point", s.t));
    }
    snapshot_ts.push_back(curve.points[*idx].t);
  }

  const auto [t_lo, t_hi] = KnobDomain(curve);
  const double w = spec.width_px;
  const double h = spec.height_px;
  const double usable = h - kMarginTop - kMarginBottom - kPanelGap;
  const double cid_h = 0.55 * usable;
  const double bars_h = usable - cid_h;

  double freq_max = 0.0;
  for (const auto& s : snapshots) {
    for (const double f : s.freqs.probs()) freq_max = std::max(freq_max, f);
  }
  const double freq_step = NiceStep(std::max(freq_max, 1e-3), 4);
  const double freq_top = std::ceil(freq_max / freq_step) * freq_step;

  SvgDocument svg(spec.width_px, spec.height_px);
  svg.Text("title", w / 2.0, 25.0, "middle", spec.title, " font-size=\"14\"");

  double top = kMarginTop;
  for (const auto kind : spec.panels) {
    if (kind == PanelKind::kCidCurve) {
      const Axis x{t_lo, t_hi, kMarginLeft, w - kMarginRight};
      DrawCidPanel(svg, curve, Panel{x, Axis{0.0, 1.0, top + cid_h, top}}, spec,
                   snapshot_ts);
      top += cid_h + kPanelGap;
    } else if (kind == PanelKind::kDistributionBars) {
      const auto count = static_cast<double>(snapshots.size());
      constexpr double kInsetGap = 20.0;
      const double inset_w =
          (w - kMarginLeft - kMarginRight - (count - 1.0) * kInsetGap) / count;
      for (std::size_t s = 0; s < snapshots.size(); ++s) {
        const auto& snap = snapshots[s];
        const double left = kMarginLeft + static_cast<double>(s) * (inset_w + kInsetGap);
        const auto levels = static_cast<double>(snap.freqs.size());
        const Panel p{Axis{0.5, levels + 0.5, left, left + inset_w},
                      Axis{0.0, freq_top, top + bars_h, top}};
        svg.OpenPanel(fmt::format("snapshot-{}", s), p,
                      fmt::format(" data-t=\"{:.17g}\"", snapshot_ts[s]));
        svg.Line("axis", p.left(), p.bottom(), p.right(), p.bottom(), "black");
        svg.Line("axis", p.left(), p.bottom(), p.left(), p.top(), "black");
        for (const double v : Ticks(0.0, freq_top, 4)) {
          const double y = p.y.Map(v);
          svg.Line("tick", p.left() - 3.0, y, p.left(), y, "black");
          if (s == 0) svg.Text("tick-label", p.left() - 5.0, y + 4.0, "end", fmt::format("{:g}", v));
        }
        const double bar_w = 0.8 * (p.x.Map(1.5) - p.x.Map(0.5));
        for (std::size_t k = 0; k < snap.freqs.size(); ++k) {
          const double level = static_cast<double>(k + 1);
          const double y = p.y.Map(snap.freqs[k]);
          svg.Rect("freq-bar", p.x.Map(level) - bar_w / 2.0, y, bar_w, p.bottom() - y,
                   spec.colors.bars,
                   fmt::format(" data-level=\"{}\" data-value=\"{:.17g}\"", k + 1,
                               snap.freqs[k]));
        }
        svg.Text("tick-label", p.x.Map(1.0), p.bottom() + 14.0, "middle", "1");
        svg.Text("tick-label", p.x.Map(levels), p.bottom() + 14.0, "middle",
                 fmt::format("{}", snap.freqs.size()));
        svg.Text("axis-label", 0.5 * (p.left() + p.right()), p.top() - 6.0, "middle",
                 fmt::format("t = {:g}", snapshot_ts[s]));
        svg.Close();
      }
      top += bars_h + kPanelGap;
    } else {
      throw Error(Errc::kUsage, "lead figure has no interval panel");
    }
  }
  return svg.Finish();
}

}  // namespace cid
