#include "qcw/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"

namespace qcw {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt6(double x) {
  char buf[64];
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::snprintf(buf, sizeof buf, "%.6f", round6(x));
  return buf;
}

// round6 value, or null for non-finite (JSON has no inf)
ordered_json jreal(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round6(x);
}

ordered_json meta_block(const ArtifactMeta& meta) {
  ordered_json j;
  j["version"] = qcw_version();
  j["seed"] = meta.seed;
  j["config_hash"] = meta.config_hash;
  j["geometry"] = meta.geometry_name;
  j["geometry_hash"] = meta.geometry_hash;
  return j;
}

ordered_json rational_block(const Rational& r) {
  ordered_json j;
  j["num"] = r.num;
  j["den"] = r.den;
  j["value"] = round6(r.value());
  return j;
}

}  // namespace

const char* qcw_version() { return "0.1.0"; }

const char* reference_values_json() {
  return R"qcw({
  "note": "reference - hardware results, not reproducible offline",
  "chi": [
    {"geometry": "square", "L": 6, "d": 1, "nchv_bound": 4, "chi_sim": 6.0, "chi_sim_noisy": 5.1340, "chi_nisq": 5.3076},
    {"geometry": "doily", "L": 15, "d": 3, "nchv_bound": 9, "chi_sim": 15.0, "chi_sim_noisy": 12.9230, "chi_nisq": 13.0092},
    {"geometry": "elliptic", "L": 45, "d": 9, "nchv_bound": 27, "chi_sim": 45.0, "chi_sim_noisy": 38.532, "chi_nisq": 38.136},
    {"geometry": "hyperbolic", "L": 105, "d": 21, "nchv_bound": 63, "chi_sim": 105.0, "chi_sim_noisy": 90.102, "chi_nisq": 89.099},
    {"geometry": "W(5,2)", "L": 315, "d": 63, "nchv_bound": 189, "chi_sim": 315.0, "chi_sim_noisy": 269.5128, "chi_nisq": 264.2206}
  ],
  "games": [
    {"game": "pl", "geometry": "square", "backend": "ibm_marrakesh", "sigma_sim": 1.0, "sigma_sim_noisy": 0.95628, "sigma_nisq": 0.96527, "omega_num": 17, "omega_den": 18},
    {"game": "pl", "geometry": "doily", "backend": "ibm_marrakesh", "sigma_sim": 1.0, "sigma_sim_noisy": 0.96160, "sigma_nisq": 0.95945, "omega_num": 14, "omega_den": 15},
    {"game": "ll", "geometry": "square", "backend": "ibm_marrakesh", "sigma_sim": 1.0, "sigma_sim_noisy": 0.91722, "sigma_nisq": 0.93498, "omega_num": 8, "omega_den": 9},
    {"game": "ll", "geometry": "doily", "backend": "ibm_marrakesh", "sigma_sim": 1.0, "sigma_sim_noisy": 0.92168, "sigma_nisq": 0.92856, "omega_num": 13, "omega_den": 15},
    {"game": "ll", "geometry": "elliptic", "backend": "ibm_marrakesh", "sigma_sim": 1.0, "sigma_sim_noisy": 0.91988, "sigma_nisq": 0.92067, "omega_num": 13, "omega_den": 15},
    {"game": "llll", "geometry": "elliptic", "backend": "ibm_aachen", "sigma_sim": 1.0, "sigma_sim_noisy": 0.78606, "sigma_nisq": 0.84867, "omega_num": 11, "omega_den": 15}
  ]
}
)qcw";
}

std::string geometry_hash(const IncidenceGeometry& g) {
  return hex_u64(fnv1a64(geometry_to_json(g)));
}

std::string format_chi_report(const ChiReport& report,
                              const std::vector<HistogramData>& extractions,
                              const ArtifactMeta& meta) {
  ordered_json j;
  j["artifact"] = "chi_report";
  j["meta"] = meta_block(meta);
  j["chi"] = round6(report.chi);
  j["chi_std_error"] = round6(report.chi_std_error);
  j["L"] = report.L;
  j["d"] = report.d;
  j["d_source"] = report.d_source;
  j["nchv_bound"] = round6(report.nchv_bound);
  j["qm_bound"] = round6(report.qm_bound);
  j["verdict"] = to_string(report.verdict);
  j["sigma"] = jreal(report.sigma);
  if (!extractions.empty()) {
    auto& arr = j["extractions"] = ordered_json::array();
    for (const auto& h : extractions) {
      ordered_json e;
      e["family"] = h.family;
      e["members"] = h.chi_values.size();
      e["L"] = h.L;
      e["d"] = h.d;
      e["d_source"] = h.d_source;
      e["nchv_bound"] = round6(h.nchv_bound);
      e["min_chi"] = round6(h.min_chi);
      e["max_chi"] = round6(h.max_chi);
      e["mean_chi"] = round6(h.mean_chi);
      e["violation_fraction"] = round6(h.violation_fraction);
      arr.push_back(std::move(e));
    }
  }
  return j.dump(2) + "\n";
}

std::string format_context_csv(const IncidenceGeometry& g,
                               const std::vector<ContextEstimate>& est) {
  std::ostringstream out;
  out << "line_id,op0,op1,op2,sign,mean,std_error\n";
  for (const auto& e : est) {
    if (e.line_id >= g.line_count())
      throw internal_error("context estimate references a bad line");
    const auto& ln = g.lines[e.line_id];
    out << e.line_id << ',' << to_string(g.points[ln.points[0]]) << ','
        << to_string(g.points[ln.points[1]]) << ','
        << to_string(g.points[ln.points[2]]) << ','
        << static_cast<int>(ln.sign) << ',' << fmt6(e.mean_product) << ','
        << fmt6(e.std_error) << '\n';
  }
  return out.str();
}

std::string format_histogram_csv(const HistogramData& h) {
  std::ostringstream out;
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b + 1 < h.bin_edges.size(); ++b)
    out << fmt6(h.bin_edges[b]) << ',' << fmt6(h.bin_edges[b + 1]) << ','
        << h.counts[b] << '\n';
  return out.str();
}

std::string format_histogram_svg(const HistogramData& h) {
  constexpr double width = 640.0, height = 400.0;
  constexpr double ml = 60.0, mr = 20.0, mt = 30.0, mb = 50.0;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;
  const double lo = h.bin_edges.front();
  const double hi = h.bin_edges.back();
  std::uint64_t max_count = 1;
  for (const std::uint64_t c : h.counts) max_count = std::max(max_count, c);

  auto x_of = [&](double v) { return ml + (v - lo) / (hi - lo) * plot_w; };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"400\" viewBox=\"0 0 640 400\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt6(width / 2) << "\" y=\"20\" font-family=\"monospace\" "
         "font-size=\"14\" text-anchor=\"middle\">chi distribution: "
      << h.family << " (" << h.chi_values.size() << " members)</text>\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    if (h.counts[b] == 0) continue;
    const double x0 = x_of(h.bin_edges[b]);
    const double x1 = x_of(h.bin_edges[b + 1]);
    const double bar_h =
        plot_h * static_cast<double>(h.counts[b]) / static_cast<double>(max_count);
    out << "<rect x=\"" << fmt6(x0) << "\" y=\"" << fmt6(mt + plot_h - bar_h)
        << "\" width=\"" << fmt6(x1 - x0) << "\" height=\"" << fmt6(bar_h)
        << "\" fill=\"#4477aa\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
  }
  // NCHV bound as a red vertical rule
  const double xb = x_of(h.nchv_bound);
  out << "<line x1=\"" << fmt6(xb) << "\" y1=\"" << fmt6(mt) << "\" x2=\""
      << fmt6(xb) << "\" y2=\"" << fmt6(mt + plot_h)
      << "\" stroke=\"red\" stroke-width=\"1.5\"/>\n";
  out << "<text x=\"" << fmt6(xb + 4) << "\" y=\"" << fmt6(mt + 12)
      << "\" font-family=\"monospace\" font-size=\"12\" fill=\"red\">NCHV bound "
      << fmt6(h.nchv_bound) << "</text>\n";
  out << "<text x=\"" << fmt6(ml) << "\" y=\"" << fmt6(height - 15)
      << "\" font-family=\"monospace\" font-size=\"12\">" << fmt6(lo)
      << "</text>\n";
  out << "<text x=\"" << fmt6(width - mr) << "\" y=\"" << fmt6(height - 15)
      << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">"
      << fmt6(hi) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string format_game_result(const GameResult& result,
                               const OptimalClassicalResult* optimal,
                               const ArtifactMeta& meta) {
  ordered_json j;
  j["artifact"] = "game_result";
  j["meta"] = meta_block(meta);
  j["kind"] = to_string(result.kind);
  j["strategy"] = result.strategy;
  j["rounds"] = result.rounds;
  j["wins"] = result.wins;
  j["rate"] = rational_block(result.rate);
  j["invalid_rounds"] = result.invalid_rounds;
  j["invalid_rate"] = round6(static_cast<double>(result.invalid_rounds) /
                             static_cast<double>(result.rounds));
  j["exhaustive"] = result.exhaustive;
  if (optimal) {
    ordered_json o;
    o["value"] = rational_block(optimal->value);
    o["exact"] = optimal->exact;
    if (!optimal->note.empty()) o["note"] = optimal->note;
    j["optimal_classical"] = std::move(o);
  }
  return j.dump(2) + "\n";
}

std::string format_transcript_csv(const IncidenceGeometry& g, GameKind kind,
                                  const std::vector<Question>& questions,
                                  const std::vector<TranscriptRow>& rows) {
  std::ostringstream out;
  out << "round,question,answers,valid,win\n";
  auto sign_char = [](int v) { return v > 0 ? '+' : '-'; };
  for (const auto& row : rows) {
    const Question& q = questions.at(row.question);
    out << row.round << ",P:" << to_string(g.points[q.point]) << "|L:";
    for (int i = 0; i < q.n_lines; ++i) {
      // ll pairs print in dealt order, which may be the stored pair reversed
      const int slot = (row.swapped && q.n_lines == 2) ? 1 - i : i;
      out << (i ? "+" : "") << q.lines[slot];
    }
    out << ',';
    const int players = player_count(kind);
    for (int t = 0; t < players; ++t) {
      if (t) out << '|';
      if (kind == GameKind::pl && t == 0) {
        out << sign_char(row.answers[0][0]);
        continue;
      }
      for (int j = 0; j < 3; ++j) out << sign_char(row.answers[t][j]);
    }
    out << ',' << (row.valid ? 1 : 0) << ',' << (row.win ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string format_degree_result(const IncidenceGeometry& g,
                                 const DegreeResult& result,
                                 const HexagonReport* hexagon,
                                 const ArtifactMeta& meta) {
  ordered_json j;
  j["artifact"] = "degree_result";
  j["meta"] = meta_block(meta);
  j["n_points"] = g.point_count();
  j["n_lines"] = g.line_count();
  j["method"] = to_string(result.method);
  j["degree"] = result.degree;
  j["exact"] = result.exact;
  j["witness_hex"] = result.witness.to_hex();
  j["unsatisfied_lines"] = result.unsatisfied;
  if (hexagon) {
    ordered_json hx;
    hx["n_lines"] = hexagon->n_lines;
    hx["line_count_ok"] = hexagon->line_count_ok;
    hx["covers_all_points"] = hexagon->covers_all_points;
    hx["three_regular"] = hexagon->three_regular;
    hx["pass"] = hexagon->pass();
    j["hexagon_check"] = std::move(hx);
  }
  return j.dump(2) + "\n";
}

namespace {

struct ChiRow {
  std::string geometry, d_source, verdict;
  double chi = 0, nchv = 0, sigma = 0;
  int L = 0, d = 0;
  std::uint64_t seed = 0;
};

struct GameRow {
  std::string kind, geometry, strategy;
  std::uint64_t rounds = 0;
  double rate = 0, invalid = 0;
  bool has_optimal = false;
  double optimal = 0;
};

struct DegreeRow {
  std::string geometry, method;
  int degree = 0;
  bool exact = false;
};

}  // namespace

ReportBundle build_report(const std::vector<std::string>& artifact_texts) {
  ReportBundle bundle;
  std::vector<ChiRow> chis;
  std::vector<GameRow> games;
  std::vector<DegreeRow> degrees;
  std::map<std::string, std::string> geom_hashes;

  for (std::size_t i = 0; i < artifact_texts.size(); ++i) {
    const std::string tag = "input " + std::to_string(i);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(artifact_texts[i]);
    } catch (const nlohmann::json::exception&) {
      bundle.warnings.push_back(tag + ": not valid JSON, skipped");
      continue;
    }
    const std::string kind = j.value("artifact", "");
    if (kind != "chi_report" && kind != "game_result" &&
        kind != "degree_result") {
      bundle.warnings.push_back(tag + ": unknown artifact type, skipped");
      continue;
    }
    std::string geom, ghash;
    std::uint64_t seed = 0;
    try {
      geom = j.at("meta").at("geometry").get<std::string>();
      ghash = j.at("meta").at("geometry_hash").get<std::string>();
      seed = j.at("meta").value("seed", std::uint64_t{0});
    } catch (const nlohmann::json::exception&) {
      bundle.warnings.push_back(tag + ": missing provenance, skipped");
      continue;
    }
    const auto [it, inserted] = geom_hashes.emplace(geom, ghash);
    if (!inserted && it->second != ghash)
      throw config_error("artifacts disagree on geometry '" + geom +
                         "' (hash " + it->second + " vs " + ghash + ")");
    try {
      if (kind == "chi_report") {
        ChiRow r;
        r.geometry = geom;
        r.seed = seed;
        r.chi = j.at("chi").get<double>();
        r.L = j.at("L").get<int>();
        r.d = j.at("d").get<int>();
        r.d_source = j.at("d_source").get<std::string>();
        r.nchv = j.at("nchv_bound").get<double>();
        r.verdict = j.at("verdict").get<std::string>();
        r.sigma = j.at("sigma").is_null()
                      ? std::numeric_limits<double>::infinity()
                      : j.at("sigma").get<double>();
        chis.push_back(std::move(r));
      } else if (kind == "game_result") {
        GameRow r;
        r.kind = j.at("kind").get<std::string>();
        r.geometry = geom;
        r.strategy = j.at("strategy").get<std::string>();
        r.rounds = j.at("rounds").get<std::uint64_t>();
        r.rate = j.at("rate").at("value").get<double>();
        r.invalid = j.value("invalid_rate", 0.0);
        if (j.contains("optimal_classical")) {
          r.has_optimal = true;
          r.optimal =
              j.at("optimal_classical").at("value").at("value").get<double>();
        }
        games.push_back(std::move(r));
      } else {
        DegreeRow r;
        r.geometry = geom;
        r.method = j.at("method").get<std::string>();
        r.degree = j.at("degree").get<int>();
        r.exact = j.at("exact").get<bool>();
        degrees.push_back(std::move(r));
      }
    } catch (const nlohmann::json::exception& e) {
      bundle.warnings.push_back(tag + ": missing columns (" +
                                std::string(e.what()) + "), partial skip");
    }
  }

  const nlohmann::json ref = nlohmann::json::parse(reference_values_json());
  // Builder names -> reference table rows (quadrics by class, not by center).
  auto ref_class = [](const std::string& geom) -> std::string {
    if (geom == "mermin_square") return "square";
    if (geom.rfind("E_", 0) == 0) return "elliptic";
    if (geom.rfind("H_", 0) == 0) return "hyperbolic";
    return geom;
  };
  auto ref_chi = [&](const std::string& geom) -> const nlohmann::json* {
    const std::string cls = ref_class(geom);
    for (const auto& row : ref.at("chi"))
      if (row.at("geometry") == cls) return &row;
    return nullptr;
  };
  auto ref_game = [&](const std::string& kind,
                      const std::string& geom) -> const nlohmann::json* {
    const std::string cls = ref_class(geom);
    for (const auto& row : ref.at("games"))
      if (row.at("game") == kind && row.at("geometry") == cls) return &row;
    return nullptr;
  };

  ordered_json out;
  out["artifact"] = "report";
  out["version"] = qcw_version();
  out["reference_note"] =
      "reference columns are hardware results from the shipped data file, "
      "not reproduced by this tool";

  std::ostringstream text;
  text << "contextuality workbench report (v" << qcw_version() << ")\n";

  auto& jchi = out["chi"] = ordered_json::array();
  if (!chis.empty()) {
    text << "\nchi reports\n";
    text << "  geometry              L     d  src        chi        nchv   "
            "verdict          ref_chi_sim  ref_chi_nisq\n";
  }
  for (const auto& r : chis) {
    ordered_json row;
    row["geometry"] = r.geometry;
    row["L"] = r.L;
    row["d"] = r.d;
    row["d_source"] = r.d_source;
    row["chi"] = round6(r.chi);
    row["nchv_bound"] = round6(r.nchv);
    row["verdict"] = r.verdict;
    row["sigma"] = jreal(r.sigma);
    const nlohmann::json* ref_row = ref_chi(r.geometry);
    if (ref_row) {
      row["reference"] = {{"chi_sim", (*ref_row)["chi_sim"].get<double>()},
                          {"chi_sim_noisy",
                           (*ref_row)["chi_sim_noisy"].get<double>()},
                          {"chi_nisq", (*ref_row)["chi_nisq"].get<double>()}};
    }
    char line[256];
    std::snprintf(line, sizeof line,
                  "  %-20s %4d %5d  %-9s %-10s %-7s %-16s %-12s %s\n",
                  r.geometry.c_str(), r.L, r.d, r.d_source.c_str(),
                  fmt6(r.chi).c_str(), fmt6(r.nchv).c_str(), r.verdict.c_str(),
                  ref_row ? fmt6((*ref_row)["chi_sim"].get<double>()).c_str()
                          : "-",
                  ref_row ? fmt6((*ref_row)["chi_nisq"].get<double>()).c_str()
                          : "-");
    text << line;
    jchi.push_back(std::move(row));
  }

  auto& jgames = out["games"] = ordered_json::array();
  if (!games.empty()) {
    text << "\ngames\n";
    text << "  kind  geometry              strategy           rounds     "
            "rate       ref_omega  ref_sigma_nisq\n";
  }
  for (const auto& r : games) {
    ordered_json row;
    row["kind"] = r.kind;
    row["geometry"] = r.geometry;
    row["strategy"] = r.strategy;
    row["rounds"] = r.rounds;
    row["rate"] = round6(r.rate);
    row["invalid_rate"] = round6(r.invalid);
    if (r.has_optimal) row["optimal_classical"] = round6(r.optimal);
    const nlohmann::json* ref_row = ref_game(r.kind, r.geometry);
    std::string omega = "-", nisq = "-";
    if (ref_row) {
      row["reference"] = {
          {"omega_num", (*ref_row)["omega_num"].get<int>()},
          {"omega_den", (*ref_row)["omega_den"].get<int>()},
          {"sigma_sim_noisy", (*ref_row)["sigma_sim_noisy"].get<double>()},
          {"sigma_nisq", (*ref_row)["sigma_nisq"].get<double>()},
          {"backend", (*ref_row)["backend"].get<std::string>()}};
      omega = std::to_string((*ref_row)["omega_num"].get<int>()) + "/" +
              std::to_string((*ref_row)["omega_den"].get<int>());
      nisq = fmt6((*ref_row)["sigma_nisq"].get<double>());
    }
    char line[256];
    std::snprintf(line, sizeof line,
                  "  %-5s %-21s %-18s %-10llu %-10s %-10s %s\n",
                  r.kind.c_str(), r.geometry.c_str(), r.strategy.c_str(),
                  static_cast<unsigned long long>(r.rounds),
                  fmt6(r.rate).c_str(), omega.c_str(), nisq.c_str());
    text << line;
    jgames.push_back(std::move(row));
  }

  auto& jdeg = out["degrees"] = ordered_json::array();
  if (!degrees.empty()) {
    text << "\ndegrees\n  geometry              method        degree  exact\n";
  }
  for (const auto& r : degrees) {
    ordered_json row;
    row["geometry"] = r.geometry;
    row["method"] = r.method;
    row["degree"] = r.degree;
    row["exact"] = r.exact;
    char line[256];
    std::snprintf(line, sizeof line, "  %-20s  %-12s  %6d  %s\n",
                  r.geometry.c_str(), r.method.c_str(), r.degree,
                  r.exact ? "yes" : "no");
    text << line;
    jdeg.push_back(std::move(row));
  }

  out["warnings"] = bundle.warnings;
  bundle.json = out.dump(2) + "\n";
  bundle.text = text.str();
  return bundle;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write " + path);
  out << content;
  if (!out) throw config_error("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qcw
