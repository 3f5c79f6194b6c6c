#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "rsc/error.hpp"
#include "rsc/stats.hpp"

namespace rsc {

namespace {

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::vector<std::size_t> rank_order(const std::vector<double>& mean_ranks) {
  std::vector<std::size_t> order(mean_ranks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mean_ranks[a] < mean_ranks[b]; });
  return order;
}

}  // namespace

std::string render_cd_svg(const RankSummary& s, double cd) {
  const auto k = s.classifiers.size();
  const auto order = rank_order(s.mean_ranks);
  const auto cliques = cd_cliques(s.mean_ranks, cd);
  const std::size_t left_count = (k + 1) / 2;

  const double width = 640.0;
  const double margin = 160.0;
  const double axis_y = 70.0;
  const double row_h = 22.0;
  const double clique_y0 = axis_y + 18.0;
  const double labels_y0 = clique_y0 + 12.0 * static_cast<double>(cliques.size()) + 16.0;
  const double height = labels_y0 + row_h * static_cast<double>(std::max(left_count, k - left_count)) + 20.0;
  auto x_of = [&](double rank) {
    return margin + (rank - 1.0) / std::max<double>(1.0, static_cast<double>(k) - 1.0) * (width - 2.0 * margin);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed(width, 0)
      << "\" height=\"" << fixed(height, 0) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // CD bar above the axis.
  svg << "<line x1=\"" << fixed(x_of(1.0)) << "\" y1=\"20.00\" x2=\"" << fixed(x_of(1.0 + cd))
      << "\" y2=\"20.00\" stroke=\"black\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << fixed((x_of(1.0) + x_of(1.0 + cd)) / 2.0)
      << "\" y=\"14.00\" text-anchor=\"middle\">CD = " << fixed(cd, 4) << "</text>\n";

  // Rank axis with integer ticks.
  svg << "<line x1=\"" << fixed(x_of(1.0)) << "\" y1=\"" << fixed(axis_y) << "\" x2=\""
      << fixed(x_of(static_cast<double>(k))) << "\" y2=\"" << fixed(axis_y) << "\" stroke=\"black\"/>\n";
  for (std::size_t t = 1; t <= k; ++t) {
    const double x = x_of(static_cast<double>(t));
    svg << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(axis_y - 6.0) << "\" x2=\"" << fixed(x)
        << "\" y2=\"" << fixed(axis_y) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(axis_y - 10.0) << "\" text-anchor=\"middle\">" << t
        << "</text>\n";
  }

  // Clique bars.
  for (std::size_t c = 0; c < cliques.size(); ++c) {
    const double y = clique_y0 + 12.0 * static_cast<double>(c);
    const double x1 = x_of(s.mean_ranks[cliques[c].front()]) - 4.0;
    const double x2 = x_of(s.mean_ranks[cliques[c].back()]) + 4.0;
    svg << "<line class=\"clique\" x1=\"" << fixed(x1) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(x2)
        << "\" y2=\"" << fixed(y) << "\" stroke=\"black\" stroke-width=\"4\"/>\n";
  }

  // Classifier labels: best half on the left, the rest on the right.
  for (std::size_t p = 0; p < k; ++p) {
    const auto j = order[p];
    const double x = x_of(s.mean_ranks[j]);
    const bool left = p < left_count;
    const std::size_t row = left ? p : k - 1 - p;
    const double y = labels_y0 + row_h * static_cast<double>(row);
    const double text_x = left ? margin - 10.0 : width - margin + 10.0;
    svg << "<polyline fill=\"none\" stroke=\"black\" points=\"" << fixed(x) << ',' << fixed(axis_y) << ' '
        << fixed(x) << ',' << fixed(y) << ' ' << fixed(left ? margin - 5.0 : width - margin + 5.0) << ','
        << fixed(y) << "\"/>\n"
        << "<text x=\"" << fixed(text_x) << "\" y=\"" << fixed(y + 4.0) << "\" text-anchor=\""
        << (left ? "end" : "start") << "\">" << xml_escape(s.classifiers[j]) << " ("
        << fixed(s.mean_ranks[j]) << ")</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_cd_text(const RankSummary& s, double cd) {
  const auto k = s.classifiers.size();
  const std::size_t width = 61;
  auto col_of = [&](double rank) {
    const double t = (rank - 1.0) / std::max<double>(1.0, static_cast<double>(k) - 1.0);
    return static_cast<std::size_t>(std::lround(t * static_cast<double>(width - 1)));
  };
  std::ostringstream out;
  out << "CD = " << fixed(cd, 4) << '\n';

  std::string ticks(width, '-');
  std::string numbers(width + 4, ' ');
  for (std::size_t t = 1; t <= k; ++t) {
    const auto c = col_of(static_cast<double>(t));
    ticks[c] = '|';
    const auto label = std::to_string(t);
    for (std::size_t i = 0; i < label.size() && c + i < numbers.size(); ++i) numbers[c + i] = label[i];
  }
  while (!numbers.empty() && numbers.back() == ' ') numbers.pop_back();
  out << numbers << '\n' << ticks << '\n';

  for (const auto& clique : cd_cliques(s.mean_ranks, cd)) {
    std::string bar(width, ' ');
    const auto a = col_of(s.mean_ranks[clique.front()]);
    const auto b = col_of(s.mean_ranks[clique.back()]);
    for (auto c = a; c <= b; ++c) bar[c] = '=';
    while (!bar.empty() && bar.back() == ' ') bar.pop_back();
    out << bar << '\n';
  }
  for (auto j : rank_order(s.mean_ranks)) {
    std::string line(col_of(s.mean_ranks[j]), ' ');
    line += "^ " + s.classifiers[j] + " (" + fixed(s.mean_ranks[j]) + ")";
    out << line << '\n';
  }
  return out.str();
}

void render_cd_diagram(const RankSummary& summary, double cd, const std::filesystem::path& path) {
  {
    std::ofstream svg(path, std::ios::binary);
    if (!svg) throw IoError("cannot write '" + path.string() + "'");
    svg << render_cd_svg(summary, cd);
    if (!svg) throw IoError("write failed for '" + path.string() + "'");
  }
  auto text_path = path;
  text_path.replace_extension(".txt");
  std::ofstream txt(text_path, std::ios::binary);
  if (!txt) throw IoError("cannot write '" + text_path.string() + "'");
  txt << render_cd_text(summary, cd);
  if (!txt) throw IoError("write failed for '" + text_path.string() + "'");
}

}  // namespace rsc
