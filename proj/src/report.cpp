#include "circfilt/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "circfilt/errors.hpp"

namespace circfilt {
namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                              "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void put_header(std::ostream& out, std::span<const std::string> header) {
  for (const auto& line : header) out << "# " << line << '\n';
}

void finish(std::ostream& out, const char* what) {
  if (!out) throw IoError(std::string(what) + ": write failed");
}

struct Curve {
  std::string name;
  std::vector<double> x, y;
  bool dashed = false;
  const char* color = kPalette[0];
};

// Minimal fixed-layout SVG line chart.
void line_chart(std::ostream& out, const std::string& title, const std::string& xlabel, const std::string& ylabel,
                const std::vector<Curve>& curves, bool log_x) {
  constexpr double W = 720, H = 440, L = 70, R = 190, T = 40, B = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto tx = [&](double x) { return log_x ? std::log10(x) : x; };
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      if (!std::isfinite(c.y[i])) continue;
      x0 = std::min(x0, tx(c.x[i]));
      x1 = std::max(x1, tx(c.x[i]));
      y0 = std::min(y0, c.y[i]);
      y1 = std::max(y1, c.y[i]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return L + (tx(x) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  char buf[64];
  for (int i = 0; i <= 4; ++i) {
    const double yv = y0 + (y1 - y0) * i / 4.0;
    std::snprintf(buf, sizeof buf, "%.3g", yv);
    out << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << buf << "</text>\n";
    const double xv = x0 + (x1 - x0) * i / 4.0;
    std::snprintf(buf, sizeof buf, "%.3g", log_x ? std::pow(10.0, xv) : xv);
    const double xp = L + (xv - x0) / (x1 - x0) * (W - L - R);
    out << "<text x=\"" << xp << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << buf << "</text>\n";
  }
  out << "<text x=\"" << (W - R + L) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << xlabel
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << (H - B + T) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (H - B + T) / 2 << ")\">" << ylabel << "</text>\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& cv = curves[c];
    out << "<polyline fill=\"none\" stroke=\"" << cv.color << "\" stroke-width=\"1.5\""
        << (cv.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
    for (std::size_t i = 0; i < cv.x.size(); ++i) {
      if (!std::isfinite(cv.y[i])) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(cv.x[i]), py(cv.y[i]));
      out << buf;
    }
    out << "\"/>\n";
    const double ly = T + 14 + 18.0 * static_cast<double>(c);
    out << "<line x1=\"" << W - R + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 40 << "\" y2=\"" << ly
        << "\" stroke=\"" << cv.color << "\" stroke-width=\"1.5\"" << (cv.dashed ? " stroke-dasharray=\"5,3\"" : "")
        << "/>\n";
    out << "<text x=\"" << W - R + 46 << "\" y=\"" << ly + 4 << "\">" << cv.name << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace

void write_summary_csv(std::ostream& out, std::span<const std::string> header, const RunSummary& s) {
  put_header(out, header);
  const bool circular = s.model == ModelKind::kCircular;
  out << (circular ? "t,filter,r_mean,r_hat,n_runs\n" : "t,filter,sigma2_mean,mse,n_runs\n");
  for (std::size_t j = 0; j < s.t.size(); ++j) {
    for (const auto& f : s.filters) {
      const auto& a = circular ? f.r_mean : f.sigma2_mean;
      const auto& b = circular ? f.r_hat : f.mse;
      if (a.empty()) continue;
      out << num(s.t[j]) << ',' << f.label << ',' << num(a[j]) << ',' << num(b[j]) << ',' << s.runs_completed << '\n';
    }
  }
  finish(out, "summary");
}

void write_sweep_csv(std::ostream& out, std::span<const std::string> header, const SweepResult& sw) {
  put_header(out, header);
  out << "parameter,value,filter,r_mean,r_hat,n_runs\n";
  for (std::size_t i = 0; i < sw.values.size(); ++i) {
    const auto& s = sw.summaries[i];
    for (const auto& f : s.filters) {
      if (f.r_mean.empty()) continue;
      out << to_string(sw.parameter) << ',' << num(sw.values[i]) << ',' << f.label << ',' << num(f.r_mean.back())
          << ',' << num(f.r_hat.back()) << ',' << s.runs_completed << '\n';
    }
  }
  finish(out, "sweep");
}

void write_timing_csv(std::ostream& out, std::span<const std::string> header, const TimingReport& timing) {
  put_header(out, header);
  if (timing.circkf_to_pf) out << "# pf/circkf median ratio = " << num(*timing.circkf_to_pf) << '\n';
  out << "filter,median_seconds,samples\n";
  for (const auto& e : timing.entries) {
    out << e.label << ',' << num(e.median) << ',';
    for (std::size_t i = 0; i < e.samples.size(); ++i) out << (i ? ";" : "") << num(e.samples[i]);
    out << '\n';
  }
  finish(out, "timing");
}

void write_trace_csv(std::ostream& out, std::span<const std::string> header, const RunSummary& s,
                     const RunTrace& trace) {
  put_header(out, header);
  const char* spread = s.model == ModelKind::kCircular ? "_r" : "_sigma2";
  out << "t," << (s.model == ModelKind::kCircular ? "phi" : "x");
  for (const auto& f : s.filters) out << ',' << f.label << "_mu," << f.label << spread;
  out << '\n';
  for (std::size_t j = 0; j < s.t.size(); ++j) {
    out << num(s.t[j]) << ',' << num(trace.phi[j]);
    for (std::size_t f = 0; f < trace.mu.size(); ++f) out << ',' << num(trace.mu[f][j]) << ',' << num(trace.spread[f][j]);
    out << '\n';
  }
  finish(out, "trace");
}

void write_summary_svg(std::ostream& out, const RunSummary& s, const std::string& title) {
  const bool circular = s.model == ModelKind::kCircular;
  std::vector<Curve> curves;
  for (std::size_t f = 0; f < s.filters.size(); ++f) {
    const auto& fs = s.filters[f];
    const char* color = kPalette[f % kPalette.size()];
    curves.push_back({fs.label + (circular ? " r" : " σ²"), s.t, circular ? fs.r_mean : fs.sigma2_mean, false, color});
    curves.push_back({fs.label + (circular ? " r̂" : " mse"), s.t, circular ? fs.r_hat : fs.mse, true, color});
  }
  line_chart(out, title, "t", circular ? "precision" : "variance", curves, false);
  finish(out, "plot");
}

void write_sweep_svg(std::ostream& out, const SweepResult& sw, const std::string& title) {
  const bool log_x = std::all_of(sw.values.begin(), sw.values.end(), [](double v) { return v > 0.0; });
  std::vector<Curve> curves;
  if (!sw.summaries.empty()) {
    for (std::size_t f = 0; f < sw.summaries.front().filters.size(); ++f) {
      Curve r{sw.summaries.front().filters[f].label + " r", {}, {}, false, kPalette[f % kPalette.size()]};
      Curve rh{sw.summaries.front().filters[f].label + " r̂", {}, {}, true, r.color};
      for (std::size_t i = 0; i < sw.values.size(); ++i) {
        const auto& fs = sw.summaries[i].filters[f];
        if (fs.r_mean.empty()) continue;
        r.x.push_back(sw.values[i]);
        r.y.push_back(fs.r_mean.back());
        rh.x.push_back(sw.values[i]);
        rh.y.push_back(fs.r_hat.back());
      }
      curves.push_back(std::move(r));
      curves.push_back(std::move(rh));
    }
  }
  line_chart(out, title, std::string(to_string(sw.parameter)), "precision at T", curves, log_x);
  finish(out, "plot");
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace circfilt
