#pragma once
//
// Text formats: comma-separated vector parsing, sample files (one vector per
// line), and region-sweep writers for CSV, JSON and SVG 1.1.  Every writer
// starts with a header line carrying the library version, p and the
// tolerance, so outputs are self-describing.

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "capra/format.hpp"
#include "capra/norms.hpp"
#include "capra/subdiff.hpp"
#include "capra/version.hpp"

namespace capra {

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

// "1,0" or "-0.5, 2e3" -> Vec; throws invalid_argument on anything else
inline Vec parse_vec(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string tok(text.substr(pos, comma - pos));
    // trim surrounding blanks
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    if (b == std::string::npos)
      throw std::invalid_argument("vector: empty component in '" +
                                  std::string(text) + "'");
    tok = tok.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("vector: unparseable component '" + tok +
                                  "'");
    }
    if (used != tok.size())
      throw std::invalid_argument("vector: unparseable component '" + tok +
                                  "'");
    out.push_back(v);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return Vec(std::move(out));  // rejects empty / non-finite
}

// One comma-separated vector per line; blank lines and lines starting with
// '#' are skipped.
inline std::vector<Vec> read_samples(std::istream& in) {
  std::vector<Vec> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    out.push_back(parse_vec(std::string_view(line).substr(b)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// region writers
// ---------------------------------------------------------------------------

// Metadata echoed into every region file.
struct RegionHeader {
  PExponent p;
  double tol;
  std::string origin;  // e.g. "x=1,0" or "classes directions=180"
};

namespace detail {

inline std::string region_header_line(const RegionGrid& g,
                                      const RegionHeader& h) {
  return std::string("capra-region v") + kVersion + " p=" + fmt_p(h.p) +
         " tol=" + fmt_g12(h.tol) + " " + h.origin + " window=[" +
         fmt_g12(g.coord(0)) + "," + fmt_g12(g.coord(g.n - 1)) +
         "] step=" + fmt_g12(g.step);
}

}  // namespace detail

// Rows ascending in y1 (outer) then y2; the classes sweep appends a bitmask
// column (bit l set when support class l admits the cell).
inline std::string region_to_csv(const RegionGrid& g, const RegionHeader& h) {
  const bool cls = !g.classes.empty();
  std::string s = "# " + detail::region_header_line(g, h) + "\n";
  s += cls ? "y1,y2,member,classes\n" : "y1,y2,member\n";
  for (std::size_t i1 = 0; i1 < g.n; ++i1) {
    const std::string c1 = fmt_g12(g.coord(i1));
    for (std::size_t i2 = 0; i2 < g.n; ++i2) {
      s += c1;
      s += ',';
      s += fmt_g12(g.coord(i2));
      s += ',';
      s += char('0' + g.member[g.index(i1, i2)]);
      if (cls) {
        s += ',';
        s += std::to_string(static_cast<int>(g.classes[g.index(i1, i2)]));
      }
      s += '\n';
    }
  }
  return s;
}

inline std::string region_to_json(const RegionGrid& g,
                                  const RegionHeader& h) {
  const bool cls = !g.classes.empty();
  std::string s = "{\"format\":\"capra-region\",\"version\":\"";
  s += kVersion;
  s += "\",\"p\":\"" + fmt_p(h.p) + "\",\"tol\":" + fmt_g12(h.tol) +
       ",\"origin\":\"" + h.origin + "\",\"window\":[" +
       fmt_g12(g.coord(0)) + "," + fmt_g12(g.coord(g.n - 1)) +
       "],\"step\":" + fmt_g12(g.step) + ",\"n\":" + std::to_string(g.n) +
       ",\"order\":\"y1-major\",\n";
  s += " \"member\":[";
  for (std::size_t i = 0; i < g.member.size(); ++i) {
    if (i) s += ',';
    s += char('0' + g.member[i]);
  }
  s += "]";
  if (cls) {
    s += ",\n \"classes\":[";
    for (std::size_t i = 0; i < g.classes.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(static_cast<int>(g.classes[i]));
    }
    s += "]";
  }
  s += "}\n";
  return s;
}

namespace detail {

// vertical run-merged cells for one flag extractor
template <typename Flag>
inline void svg_runs(std::string& s, const RegionGrid& g, Flag&& flag) {
  const double half = 0.5 * g.step;
  for (std::size_t i1 = 0; i1 < g.n; ++i1) {
    std::size_t i2 = 0;
    while (i2 < g.n) {
      if (!flag(g.index(i1, i2))) {
        ++i2;
        continue;
      }
      std::size_t j = i2;
      while (j + 1 < g.n && flag(g.index(i1, j + 1))) ++j;
      // math coordinates flip to SVG's downward y axis
      s += "<rect x=\"" + fmt_g12(g.coord(i1) - half) + "\" y=\"" +
           fmt_g12(-(g.coord(j) + half)) + "\" width=\"" + fmt_g12(g.step) +
           "\" height=\"" +
           fmt_g12(static_cast<double>(j - i2 + 1) * g.step) + "\"/>\n";
      i2 = j + 1;
    }
  }
}

}  // namespace detail

inline std::string region_to_svg(const RegionGrid& g, const RegionHeader& h) {
  const bool cls = !g.classes.empty();
  const double half = 0.5 * g.step;
  const double x0 = g.coord(0) - half;
  const double wd = static_cast<double>(g.n) * g.step;
  const double ysvg0 = -(g.coord(g.n - 1) + half);
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<!-- " + detail::region_header_line(g, h) + " -->\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" height=\"640\" viewBox=\"" +
       fmt_g12(x0) + " " + fmt_g12(ysvg0) + " " + fmt_g12(wd) + " " +
       fmt_g12(wd) + "\">\n";
  s += "<rect x=\"" + fmt_g12(x0) + "\" y=\"" + fmt_g12(ysvg0) +
       "\" width=\"" + fmt_g12(wd) + "\" height=\"" + fmt_g12(wd) +
       "\" fill=\"#ffffff\"/>\n";
  if (cls) {
    static const char* fills[3] = {"#4daf4a", "#e41a1c", "#377eb8"};
    for (int bit = 0; bit < 3; ++bit) {
      s += std::string("<g fill=\"") + fills[bit] +
           "\" fill-opacity=\"0.45\">\n";
      detail::svg_runs(s, g, [&](std::size_t i) {
        return (g.classes[i] >> bit) & 1;
      });
      s += "</g>\n";
    }
  } else {
    s += "<g fill=\"#d62728\">\n";
    detail::svg_runs(s, g, [&](std::size_t i) { return g.member[i] != 0; });
    s += "</g>\n";
  }
  // axes, when inside the window
  const double stroke = 0.2 * g.step;
  if (g.coord(0) <= 0.0 && g.coord(g.n - 1) >= 0.0) {
    s += "<line x1=\"" + fmt_g12(x0) + "\" y1=\"0\" x2=\"" +
         fmt_g12(x0 + wd) + "\" y2=\"0\" stroke=\"#888888\" stroke-width=\"" +
         fmt_g12(stroke) + "\"/>\n";
    s += "<line x1=\"0\" y1=\"" + fmt_g12(ysvg0) + "\" x2=\"0\" y2=\"" +
         fmt_g12(ysvg0 + wd) + "\" stroke=\"#888888\" stroke-width=\"" +
         fmt_g12(stroke) + "\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace capra
