// qcw: finite-geometry contextuality workbench CLI.
//
// Subcommands: geometry, degree, rio-negro, game, report. Structured results
// land as JSON/CSV/SVG files in --out (default $QCW_OUT_DIR or the current
// directory); a short human summary goes to stdout. Exit codes: 0 ok,
// 1 configuration error, 2 internal invariant violation.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcw/artifacts.hpp"
#include "qcw/degree.hpp"
#include "qcw/experiments.hpp"
#include "qcw/games.hpp"
#include "qcw/geometry.hpp"
#include "qcw/kernels.hpp"
#include "qcw/statevector.hpp"

namespace {

using namespace qcw;

std::string default_out_dir() {
  const char* env = std::getenv("QCW_OUT_DIR");
  return env && *env ? env : ".";
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (const char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
               ? c
               : '_';
  return out;
}

struct ResolvedGeometry {
  IncidenceGeometry g;
  std::string tag;  // sanitized selector, used in artifact file names
};

// square | doily | w52 | elliptic:<center> | hyperbolic:<center> | JSON path.
ResolvedGeometry resolve_geometry(const std::string& selector) {
  if (selector == "square") return {build_mermin_square(), "square"};
  if (selector == "doily") return {build_doily(), "doily"};
  if (selector == "w52") return {build_symplectic_space(3), "w52"};
  const auto colon = selector.find(':');
  if (colon != std::string::npos) {
    const std::string kind = selector.substr(0, colon);
    const std::string center_str = selector.substr(colon + 1);
    if (kind != "elliptic" && kind != "hyperbolic")
      throw config_error("unknown geometry selector \"" + selector + "\"");
    const PauliOperator center = pauli_from_string(center_str);
    const QuadricSpec spec{center};
    const bool want_hyperbolic = (kind == "hyperbolic");
    if ((spec.kind() == QuadricKind::hyperbolic) != want_hyperbolic)
      throw config_error("center " + center_str + " has " +
                         std::to_string(y_count(center)) +
                         " Y letters, which makes the quadric " +
                         (want_hyperbolic ? "elliptic" : "hyperbolic") +
                         ", not " + kind);
    const IncidenceGeometry ambient = build_symplectic_space(center.n_qubits);
    return {build_quadric(spec, ambient), sanitize(selector)};
  }
  if (std::filesystem::exists(selector)) {
    IncidenceGeometry g = load_geometry_json(selector);
    std::string tag = sanitize(g.name);
    return {std::move(g), std::move(tag)};
  }
  throw config_error("geometry selector \"" + selector +
                     "\" is not a builtin name and no such file exists");
}

NoiseParams parse_noise(const std::string& text) {
  NoiseParams noise;
  if (text.empty()) return noise;
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw config_error("--noise expects p_dep,p_ro, got \"" + text + "\"");
  try {
    std::size_t used = 0;
    noise.p_depolarize = std::stod(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("trailing");
    const std::string ro = text.substr(comma + 1);
    noise.p_readout = std::stod(ro, &used);
    if (used != ro.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw config_error("--noise expects p_dep,p_ro, got \"" + text + "\"");
  }
  noise.validate();
  return noise;
}

std::filesystem::path prepare_out_dir(const std::string& out) {
  std::filesystem::path dir(out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw config_error("cannot create output directory " + out);
  return dir;
}

void emit(const std::filesystem::path& dir, const std::string& name,
          const std::string& content) {
  write_text_file((dir / name).string(), content);
  std::cout << "wrote " << (dir / name).string() << "\n";
}

std::string config_hash_of(const std::string& canonical) {
  return hex_u64(fnv1a64(canonical));
}

// Witness for assignment-derived play: exact when the incidence rank keeps
// the coset search small, heuristic otherwise.
Assignment best_known_assignment(const IncidenceGeometry& g,
                                 std::uint64_t seed) {
  SolverConfig cfg;
  cfg.seed = seed;
  if (incidence_rank(g) <= 24) {
    cfg.method = DegreeMethod::rank_reduced;
    return rank_reduced_degree(g, cfg).witness;
  }
  cfg.method = DegreeMethod::heuristic;
  return heuristic_degree(g, cfg).witness;
}

int cmd_geometry(const std::string& selector, const std::string& out) {
  const auto [g, tag] = resolve_geometry(selector);
  const auto dir = prepare_out_dir(out);
  std::cout << g.name << ": " << g.point_count() << " points, "
            << g.line_count() << " lines, " << g.negative_line_count()
            << " negative\n";
  emit(dir, "geometry_" + tag + ".json", geometry_to_json(g));
  return 0;
}

int cmd_degree(const std::string& selector, const std::string& method_str,
               std::uint64_t budget, std::uint64_t seed, bool long_running,
               const std::string& out) {
  const auto [g, tag] = resolve_geometry(selector);
  SolverConfig cfg;
  cfg.method = degree_method_from_string(method_str);
  cfg.budget = budget;
  cfg.seed = seed;
  cfg.long_running = long_running;

  const DegreeResult result = compute_degree(g, cfg);

  HexagonReport hexagon;
  const bool check_hexagon = result.method == DegreeMethod::heuristic &&
                             g.point_count() == 63 && g.line_count() == 315 &&
                             result.degree == 63;
  if (check_hexagon) hexagon = verify_hexagon_shape(g, result.unsatisfied);

  std::ostringstream canon;
  canon << "degree|geometry=" << g.name << "|method=" << to_string(cfg.method)
        << "|budget=" << cfg.budget << "|seed=" << cfg.seed
        << "|long_running=" << (cfg.long_running ? 1 : 0);
  const ArtifactMeta meta{config_hash_of(canon.str()), g.name,
                          geometry_hash(g), seed};

  std::cout << g.name << ": degree " << result.degree
            << (result.exact ? " (exact, " : " (upper bound, ")
            << to_string(result.method) << ")\n";
  if (check_hexagon)
    std::cout << "witness shape: " << (hexagon.pass() ? "hexagon profile ok"
                                                      : "hexagon check FAILED")
              << "\n";

  const auto dir = prepare_out_dir(out);
  emit(dir, "degree_" + tag + ".json",
       format_degree_result(g, result, check_hexagon ? &hexagon : nullptr,
                            meta));
  return 0;
}

int cmd_rio_negro(const std::string& selector, std::uint64_t shots,
                  const std::string& noise_str, const std::string& state_str,
                  std::uint64_t seed, const std::vector<std::string>& extract,
                  const std::string& out) {
  const auto [g, tag] = resolve_geometry(selector);
  const NoiseParams noise = parse_noise(noise_str);
  const InitialState state = initial_state_from_string(state_str);

  const RioRun run = rio_negro_run(g, shots, noise, state, seed);

  std::vector<HistogramData> extractions;
  for (const auto& family : extract) {
    const SubgeometryFamily fam = collect_family(g, family);
    extractions.push_back(extract_subgeometry_chi(g, run.estimates, fam));
  }

  std::ostringstream canon;
  canon << "rio-negro|geometry=" << g.name << "|shots=" << shots << "|noise="
        << round6(noise.p_depolarize) << ',' << round6(noise.p_readout)
        << "|state=" << state_str << "|seed=" << seed << "|extract=";
  for (std::size_t i = 0; i < extract.size(); ++i)
    canon << (i ? "," : "") << extract[i];
  const ArtifactMeta meta{config_hash_of(canon.str()), g.name,
                          geometry_hash(g), seed};

  const ChiReport& rep = run.report;
  std::printf("%s: chi = %.6f +- %.6f  (L = %d, d = %d [%s], NCHV bound %.1f)\n",
              g.name.c_str(), rep.chi, rep.chi_std_error, rep.L, rep.d,
              rep.d_source.c_str(), rep.nchv_bound);
  std::cout << "verdict: " << to_string(rep.verdict) << "\n";

  const auto dir = prepare_out_dir(out);
  emit(dir, "chi_" + tag + ".json",
       format_chi_report(rep, extractions, meta));
  emit(dir, "contexts_" + tag + ".csv", format_context_csv(g, run.estimates));
  for (const auto& h : extractions) {
    emit(dir, "hist_" + h.family + "_" + tag + ".csv",
         format_histogram_csv(h));
    emit(dir, "hist_" + h.family + "_" + tag + ".svg",
         format_histogram_svg(h));
  }
  return 0;
}

int cmd_game(const std::string& selector, const std::string& kind_str,
             const std::string& strategy, std::uint64_t rounds,
             const std::string& noise_str, std::uint64_t seed, bool exhaustive,
             bool long_running, const std::string& out) {
  const auto [g, tag] = resolve_geometry(selector);
  GameConfig cfg;
  cfg.kind = game_kind_from_string(kind_str);
  cfg.rounds = rounds;
  cfg.exhaustive = exhaustive;
  cfg.seed = seed;
  cfg.noise = parse_noise(noise_str);

  std::vector<TranscriptRow> transcript;
  GameResult result;
  OptimalClassicalResult optimal;
  bool have_optimal = false;

  if (strategy == "quantum") {
    result = play_quantum(g, cfg, &transcript);
  } else if (strategy == "classical-optimal") {
    optimal = optimal_classical(g, cfg.kind, long_running);
    have_optimal = true;
    if (!optimal.exact)
      throw config_error(
          "no exact optimal strategy is tractable for this game (" +
          optimal.note + "); use --long-running or classical-assignment");
    result = play_classical(g, cfg, optimal.strategies, &transcript);
  } else if (strategy == "classical-assignment") {
    const StrategyTable table =
        classical_from_assignment(g, best_known_assignment(g, seed));
    result = play_classical(g, cfg, {table}, &transcript);
  } else {
    throw config_error("--strategy must be quantum, classical-optimal or "
                       "classical-assignment, got \"" + strategy + "\"");
  }
  result.strategy = strategy;

  if (!have_optimal) {
    try {
      optimal = optimal_classical(g, cfg.kind, long_running);
      have_optimal = true;
    } catch (const config_error&) {
      // no tractable optimum and no reference value for this combination;
      // the artifact simply omits the block
    }
  }

  std::ostringstream canon;
  canon << "game|geometry=" << g.name << "|kind=" << kind_str
        << "|strategy=" << strategy << "|rounds=" << cfg.rounds
        << "|noise=" << round6(cfg.noise.p_depolarize) << ','
        << round6(cfg.noise.p_readout) << "|seed=" << seed
        << "|exhaustive=" << (exhaustive ? 1 : 0);
  const ArtifactMeta meta{config_hash_of(canon.str()), g.name,
                          geometry_hash(g), seed};

  std::cout << to_string(cfg.kind) << " on " << g.name << " (" << strategy
            << "): won " << result.wins << "/" << result.rounds << " = "
            << result.rate.num << "/" << result.rate.den;
  if (have_optimal)
    std::cout << "  [classical optimum " << optimal.value.num << "/"
              << optimal.value.den << (optimal.exact ? "" : ", reference")
              << "]";
  std::cout << "\n";

  const auto dir = prepare_out_dir(out);
  const std::string stem = to_string(cfg.kind) + "_" + tag;
  emit(dir, "game_" + stem + ".json",
       format_game_result(result, have_optimal ? &optimal : nullptr, meta));
  emit(dir, "transcript_" + stem + ".csv",
       format_transcript_csv(g, cfg.kind, enumerate_questions(g, cfg.kind),
                             transcript));
  return 0;
}

int cmd_report(const std::vector<std::string>& paths, const std::string& out) {
  std::vector<std::string> texts;
  texts.reserve(paths.size());
  for (const auto& p : paths) texts.push_back(read_text_file(p));
  const ReportBundle bundle = build_report(texts);
  for (const auto& w : bundle.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << bundle.text;
  const auto dir = prepare_out_dir(out);
  emit(dir, "report.json", bundle.json);
  emit(dir, "report.txt", bundle.text);
  return 0;
}

std::string version_string() {
  std::ostringstream s;
  s << "qcw " << qcw_version() << " (kernels:";
  for (const auto& k : kern::available()) s << ' ' << k;
  s << "; active: " << kern::active().name << ")";
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-geometry contextuality workbench"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  std::string selector, out = default_out_dir();
  std::string method = "exhaustive", noise_str = "0,0", state_str = "zeros";
  std::string kind_str = "ll", strategy = "quantum";
  std::uint64_t seed = 1, budget = 100000, shots = 10000, rounds = 10000;
  bool long_running = false, exhaustive = false;
  std::vector<std::string> extract, report_paths;

  auto add_geometry = [&](CLI::App* sub) {
    sub->add_option("--geometry", selector,
                    "square | doily | w52 | elliptic:<center> | "
                    "hyperbolic:<center> | path to a geometry JSON")
        ->required();
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", out, "output directory (default $QCW_OUT_DIR)");
  };

  CLI::App* sc_geometry = app.add_subcommand(
      "geometry", "build a geometry, print counts, dump JSON");
  add_geometry(sc_geometry);
  add_out(sc_geometry);

  CLI::App* sc_degree =
      app.add_subcommand("degree", "compute the contextuality degree");
  add_geometry(sc_degree);
  sc_degree->add_option("--method", method,
                        "exhaustive | rank_reduced | heuristic");
  sc_degree->add_option("--budget", budget, "heuristic flip budget");
  sc_degree->add_option("--seed", seed, "RNG seed");
  sc_degree->add_flag("--long-running", long_running,
                      "allow searches past the default size cap");
  add_out(sc_degree);

  CLI::App* sc_rio = app.add_subcommand(
      "rio-negro", "estimate every context and test the inequality");
  add_geometry(sc_rio);
  sc_rio->add_option("--shots", shots, "shots per context");
  sc_rio->add_option("--noise", noise_str, "p_depolarize,p_readout");
  sc_rio->add_option("--state", state_str, "zeros | random");
  sc_rio->add_option("--seed", seed, "RNG seed");
  sc_rio->add_option("--extract", extract,
                     "subgeometry families to histogram "
                     "(squares, doilies, elliptic, hyperbolic)")
      ->delimiter(',');
  add_out(sc_rio);

  CLI::App* sc_game = app.add_subcommand("game", "play a pseudotelepathy game");
  add_geometry(sc_game);
  sc_game->add_option("--kind", kind_str, "pl | ll | llll");
  sc_game->add_option("--strategy", strategy,
                      "quantum | classical-optimal | classical-assignment");
  sc_game->add_option("--rounds", rounds, "sampled rounds");
  sc_game->add_option("--noise", noise_str, "p_depolarize,p_readout");
  sc_game->add_option("--seed", seed, "RNG seed");
  sc_game->add_flag("--exhaustive", exhaustive,
                    "play every question once instead of sampling");
  sc_game->add_flag("--long-running", long_running,
                    "allow larger exact strategy enumerations");
  add_out(sc_game);

  CLI::App* sc_report =
      app.add_subcommand("report", "merge artifacts into a summary table");
  sc_report->add_option("inputs", report_paths, "artifact JSON files");
  add_out(sc_report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sc_geometry->parsed()) return cmd_geometry(selector, out);
    if (sc_degree->parsed())
      return cmd_degree(selector, method, budget, seed, long_running, out);
    if (sc_rio->parsed())
      return cmd_rio_negro(selector, shots, noise_str, state_str, seed,
                           extract, out);
    if (sc_game->parsed())
      return cmd_game(selector, kind_str, strategy, rounds, noise_str, seed,
                      exhaustive, long_running, out);
    if (sc_report->parsed()) return cmd_report(report_paths, out);
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const dimension_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const not_a_line_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
