#include "qcw/geometry.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qcw {
namespace {

LineRecord make_line(std::uint16_t i, std::uint16_t j, std::uint16_t k,
                     int sign) {
  std::array<std::uint16_t, 3> pts{i, j, k};
  std::sort(pts.begin(), pts.end());
  return LineRecord{pts, static_cast<std::int8_t>(sign)};
}

PauliOperator xor_op(const PauliOperator& a, const PauliOperator& b) {
  PauliOperator r;
  r.n_qubits = a.n_qubits;
  r.x_bits = a.x_bits ^ b.x_bits;
  r.z_bits = a.z_bits ^ b.z_bits;
  return r;
}

}  // namespace

int IncidenceGeometry::index_of(PointId id) const {
  int lo = 0, hi = static_cast<int>(points.size()) - 1;
  while (lo <= hi) {
    const int mid = lo + (hi - lo) / 2;
    const PointId m = point_id(points[mid]);
    if (m == id) return mid;
    if (m < id)
      lo = mid + 1;
    else
      hi = mid - 1;
  }
  return -1;
}

int IncidenceGeometry::negative_line_count() const {
  int c = 0;
  for (const auto& l : lines) c += l.sign < 0;
  return c;
}

std::vector<std::vector<std::uint16_t>> IncidenceGeometry::lines_through_points()
    const {
  std::vector<std::vector<std::uint16_t>> through(points.size());
  for (std::size_t l = 0; l < lines.size(); ++l)
    for (const std::uint16_t p : lines[l].points)
      through[p].push_back(static_cast<std::uint16_t>(l));
  return through;
}

void IncidenceGeometry::validate() const {
  if (n_qubits < 1 || n_qubits > PauliOperator::max_qubits)
    throw internal_error("geometry '" + name + "': bad qubit count");
  if (points.empty()) throw internal_error("geometry '" + name + "': no points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].n_qubits != n_qubits)
      throw internal_error("geometry '" + name + "': point size mismatch");
    if (points[i].is_identity())
      throw internal_error("geometry '" + name + "': identity point");
    if (i > 0 && point_id(points[i - 1]) >= point_id(points[i]))
      throw internal_error("geometry '" + name + "': points not sorted by id");
  }
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const auto& ln = lines[l];
    if (ln.points[0] >= ln.points[1] || ln.points[1] >= ln.points[2])
      throw internal_error("geometry '" + name + "': line indices not ascending");
    if (ln.points[2] >= points.size())
      throw internal_error("geometry '" + name + "': line index out of range");
    if (ln.sign != 1 && ln.sign != -1)
      throw internal_error("geometry '" + name + "': bad line sign");
    const int s = line_sign(points[ln.points[0]], points[ln.points[1]],
                            points[ln.points[2]]);  // throws if not a line
    if (s != ln.sign)
      throw internal_error("geometry '" + name + "': stored sign wrong");
    if (l > 0 && !(lines[l - 1].points < ln.points))
      throw internal_error("geometry '" + name + "': lines not sorted/unique");
  }
}

IncidenceGeometry build_symplectic_space(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 4)
    throw config_error("symplectic space supports 1..4 qubits, got " +
                       std::to_string(n_qubits));
  IncidenceGeometry g;
  g.name = "W(" + std::to_string(2 * n_qubits - 1) + ",2)";
  g.n_qubits = n_qubits;
  const PointId n_pts = (1u << (2 * n_qubits)) - 1;
  g.points.reserve(n_pts);
  for (PointId id = 1; id <= n_pts; ++id)
    g.points.push_back(pauli_from_point_id(id, n_qubits));
  for (std::uint16_t i = 0; i < n_pts; ++i) {
    for (std::uint16_t j = i + 1; j < n_pts; ++j) {
      if (!commutes(g.points[i], g.points[j])) continue;
      const int k = g.index_of(point_id(xor_op(g.points[i], g.points[j])));
      if (k <= j) continue;  // each line recorded once, from its lowest pair
      const int s = line_sign(g.points[i], g.points[j], g.points[k]);
      g.lines.push_back(make_line(i, j, static_cast<std::uint16_t>(k), s));
    }
  }
  std::sort(g.lines.begin(), g.lines.end(),
            [](const LineRecord& a, const LineRecord& b) { return a.points < b.points; });
  return g;
}

IncidenceGeometry build_doily() {
  IncidenceGeometry g = build_symplectic_space(2);
  g.name = "doily";
  return g;
}

IncidenceGeometry build_mermin_square() {
  static const char* grid[3][3] = {
      {"XI", "IX", "XX"},
      {"IY", "ZI", "ZY"},
      {"XY", "ZX", "YZ"},
  };
  IncidenceGeometry g;
  g.name = "mermin_square";
  g.n_qubits = 2;
  for (auto& row : grid)
    for (const char* s : row) g.points.push_back(pauli_from_string(s));
  std::sort(g.points.begin(), g.points.end(),
            [](const PauliOperator& a, const PauliOperator& b) {
              return point_id(a) < point_id(b);
            });
  auto idx = [&](int r, int c) {
    const int i = g.index_of(point_id(pauli_from_string(grid[r][c])));
    if (i < 0) throw internal_error("mermin square: lost grid point");
    return static_cast<std::uint16_t>(i);
  };
  for (int r = 0; r < 3; ++r) {
    const auto a = idx(r, 0), b = idx(r, 1), c = idx(r, 2);
    g.lines.push_back(
        make_line(a, b, c, line_sign(g.points[a], g.points[b], g.points[c])));
  }
  for (int c = 0; c < 3; ++c) {
    const auto a = idx(0, c), b = idx(1, c), d = idx(2, c);
    g.lines.push_back(
        make_line(a, b, d, line_sign(g.points[a], g.points[b], g.points[d])));
  }
  std::sort(g.lines.begin(), g.lines.end(),
            [](const LineRecord& a, const LineRecord& b) { return a.points < b.points; });
  if (g.negative_line_count() != 1)
    throw internal_error("mermin square: expected exactly one negative line");
  return g;
}

IncidenceGeometry build_quadric(const QuadricSpec& spec,
                                const IncidenceGeometry& ambient) {
  if (spec.center.n_qubits != ambient.n_qubits)
    throw dimension_error("quadric center size does not match ambient space");
  IncidenceGeometry q;
  q.name = (spec.kind() == QuadricKind::hyperbolic ? "H_" : "E_") +
           to_string(spec.center);
  q.n_qubits = ambient.n_qubits;
  std::vector<int> remap(ambient.points.size(), -1);
  for (std::size_t i = 0; i < ambient.points.size(); ++i) {
    const PauliOperator& p = ambient.points[i];
    if (commutes(p, spec.center) == is_symmetric(p)) {
      remap[i] = static_cast<int>(q.points.size());
      q.points.push_back(p);
    }
  }
  for (const auto& ln : ambient.lines) {
    const int a = remap[ln.points[0]], b = remap[ln.points[1]],
              c = remap[ln.points[2]];
    if (a < 0 || b < 0 || c < 0) continue;
    q.lines.push_back(make_line(static_cast<std::uint16_t>(a),
                                static_cast<std::uint16_t>(b),
                                static_cast<std::uint16_t>(c), ln.sign));
  }
  return q;
}

std::vector<IncidenceGeometry> enumerate_quadrics(
    const IncidenceGeometry& ambient) {
  const std::size_t full = (1u << (2 * ambient.n_qubits)) - 1;
  if (ambient.points.size() != full)
    throw config_error("quadric enumeration needs the full symplectic space");
  std::vector<IncidenceGeometry> out;
  std::set<std::vector<PointId>> seen;
  auto add = [&](const PauliOperator& center) {
    IncidenceGeometry q = build_quadric(QuadricSpec{center}, ambient);
    std::vector<PointId> key;
    key.reserve(q.points.size());
    for (const auto& p : q.points) key.push_back(point_id(p));
    if (!seen.insert(std::move(key)).second)
      throw internal_error("duplicate quadric point set");
    out.push_back(std::move(q));
  };
  PauliOperator identity;
  identity.n_qubits = static_cast<std::uint8_t>(ambient.n_qubits);
  add(identity);
  for (const auto& p : ambient.points) add(p);
  return out;
}

std::vector<std::uint32_t> induced_line_ids(
    const IncidenceGeometry& ambient, const std::vector<std::uint16_t>& subset) {
  std::vector<char> in(ambient.points.size(), 0);
  for (const std::uint16_t p : subset) {
    if (p >= ambient.points.size())
      throw config_error("subset point index out of range");
    in[p] = 1;
  }
  std::vector<std::uint32_t> ids;
  for (std::size_t l = 0; l < ambient.lines.size(); ++l) {
    const auto& ln = ambient.lines[l];
    if (in[ln.points[0]] && in[ln.points[1]] && in[ln.points[2]])
      ids.push_back(static_cast<std::uint32_t>(l));
  }
  return ids;
}

namespace {

// DFS state for subgeometry search. Model points are placed in a fixed
// schedule: a point whose image is forced by an already-placed line pair is
// filled by closure, anything else branches over all unused ambient points.
struct CopySearch {
  const IncidenceGeometry& ambient;
  const IncidenceGeometry& model;
  int pa, pm;
  std::vector<std::int16_t> third;           // pa*pa pair -> third index or -1
  std::vector<std::vector<int>> model_adj;   // model point -> collinear points
  struct Step {
    int point;
    int gen_a = -1, gen_b = -1;  // forced from these placed model points
  };
  std::vector<Step> schedule;
  std::vector<int> img;
  std::vector<char> used;
  std::set<std::vector<std::uint16_t>> found;

  CopySearch(const IncidenceGeometry& a, const IncidenceGeometry& m)
      : ambient(a),
        model(m),
        pa(static_cast<int>(a.points.size())),
        pm(static_cast<int>(m.points.size())),
        third(static_cast<std::size_t>(pa) * pa, -1),
        model_adj(pm),
        img(pm, -1),
        used(pa, 0) {
    for (const auto& ln : a.lines) {
      const int p[3] = {ln.points[0], ln.points[1], ln.points[2]};
      for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v)
          if (u != v)
            third[static_cast<std::size_t>(p[u]) * pa + p[v]] =
                static_cast<std::int16_t>(p[3 - u - v]);
    }
    for (const auto& ln : m.lines)
      for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v)
          if (u != v) model_adj[ln.points[u]].push_back(ln.points[v]);
    for (auto& adj : model_adj) {
      std::sort(adj.begin(), adj.end());
      adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    build_schedule();
  }

  void build_schedule() {
    std::vector<char> placed(pm, 0);
    auto forced_by = [&](int mp, int& ga, int& gb) {
      for (const auto& ln : model.lines) {
        int hit = -1, a = -1, b = -1;
        for (const int q : ln.points) {
          if (q == mp)
            hit = q;
          else if (a < 0)
            a = q;
          else
            b = q;
        }
        if (hit == mp && placed[a] && placed[b]) {
          ga = a;
          gb = b;
          return true;
        }
      }
      return false;
    };
    for (int step = 0; step < pm; ++step) {
      int pick = -1, ga = -1, gb = -1;
      for (int mp = 0; mp < pm; ++mp)
        if (!placed[mp] && forced_by(mp, ga, gb)) {
          pick = mp;
          break;
        }
      if (pick < 0) {
        for (int mp = 0; mp < pm; ++mp)
          if (!placed[mp]) {
            pick = mp;
            ga = gb = -1;
            break;
          }
      }
      placed[pick] = 1;
      schedule.push_back({pick, ga, gb});
    }
  }

  bool compatible(int mp, int cand) const {
    if (used[cand]) return false;
    for (const int mn : model_adj[mp]) {
      const int other = img[mn];
      if (other < 0) continue;
      if (third[static_cast<std::size_t>(cand) * pa + other] < 0) return false;
    }
    return true;
  }

  void place(std::size_t depth) {
    if (depth == schedule.size()) {
      std::vector<std::uint16_t> set;
      set.reserve(pm);
      for (const int i : img) set.push_back(static_cast<std::uint16_t>(i));
      std::sort(set.begin(), set.end());
      found.insert(std::move(set));
      return;
    }
    const Step& st = schedule[depth];
    if (st.gen_a >= 0) {
      const int a = img[st.gen_a], b = img[st.gen_b];
      const int cand = third[static_cast<std::size_t>(a) * pa + b];
      if (cand < 0 || !compatible(st.point, cand)) return;
      img[st.point] = cand;
      used[cand] = 1;
      place(depth + 1);
      used[cand] = 0;
      img[st.point] = -1;
      return;
    }
    for (int cand = 0; cand < pa; ++cand) {
      if (!compatible(st.point, cand)) continue;
      img[st.point] = cand;
      used[cand] = 1;
      place(depth + 1);
      used[cand] = 0;
      img[st.point] = -1;
    }
  }
};

}  // namespace

std::vector<std::vector<std::uint16_t>> enumerate_subgeometries(
    const IncidenceGeometry& ambient, const IncidenceGeometry& model) {
  if (model.n_qubits > ambient.n_qubits)
    throw dimension_error("model uses more qubits than the ambient space");
  if (model.points.size() > ambient.points.size() ||
      model.points.size() > 64)
    throw config_error("model too large for subgeometry search");
  CopySearch search(ambient, model);
  search.place(0);
  std::vector<std::vector<std::uint16_t>> out;
  out.reserve(search.found.size());
  for (const auto& set : search.found)
    if (induced_line_ids(ambient, set).size() == model.lines.size())
      out.push_back(set);
  return out;
}

std::string geometry_to_json(const IncidenceGeometry& g) {
  nlohmann::ordered_json j;
  j["name"] = g.name;
  j["n_qubits"] = g.n_qubits;
  auto& pts = j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : g.points) pts.push_back(to_string(p));
  auto& lns = j["lines"] = nlohmann::ordered_json::array();
  for (const auto& ln : g.lines) {
    nlohmann::ordered_json rec;
    rec["points"] = {ln.points[0], ln.points[1], ln.points[2]};
    rec["sign"] = static_cast<int>(ln.sign);
    lns.push_back(std::move(rec));
  }
  return j.dump(2) + "\n";
}

IncidenceGeometry geometry_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("bad geometry JSON: ") + e.what());
  }
  IncidenceGeometry g;
  try {
    g.name = j.at("name").get<std::string>();
    g.n_qubits = j.at("n_qubits").get<int>();
    if (g.n_qubits < 1 || g.n_qubits > PauliOperator::max_qubits)
      throw config_error("bad geometry JSON: n_qubits out of range");
    for (const auto& s : j.at("points")) {
      const PauliOperator p = pauli_from_string(s.get<std::string>());
      if (p.n_qubits != g.n_qubits)
        throw config_error("bad geometry JSON: point size != n_qubits");
      if (p.is_identity())
        throw config_error("bad geometry JSON: identity listed as a point");
      g.points.push_back(p);
    }
    if (g.points.empty()) throw config_error("bad geometry JSON: no points");
    for (std::size_t i = 1; i < g.points.size(); ++i)
      if (point_id(g.points[i - 1]) >= point_id(g.points[i]))
        throw config_error("bad geometry JSON: points must be strictly "
                           "ascending by point id");
    for (const auto& rec : j.at("lines")) {
      const auto& pts = rec.at("points");
      if (pts.size() != 3)
        throw config_error("bad geometry JSON: line needs 3 point indices");
      LineRecord ln;
      for (int t = 0; t < 3; ++t) {
        const int v = pts[t].get<int>();
        if (v < 0 || v >= static_cast<int>(g.points.size()))
          throw config_error("bad geometry JSON: line index out of range");
        ln.points[t] = static_cast<std::uint16_t>(v);
      }
      const int sign = rec.at("sign").get<int>();
      if (sign != 1 && sign != -1)
        throw config_error("bad geometry JSON: line sign must be +/-1");
      ln.sign = static_cast<std::int8_t>(sign);
      g.lines.push_back(ln);
    }
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("bad geometry JSON: ") + e.what());
  }
  for (const auto& ln : g.lines) {
    if (ln.points[0] >= ln.points[1] || ln.points[1] >= ln.points[2])
      throw config_error("bad geometry JSON: line indices must be ascending");
    int s;
    try {
      s = line_sign(g.points[ln.points[0]], g.points[ln.points[1]],
                    g.points[ln.points[2]]);
    } catch (const not_a_line_error& e) {
      throw config_error(std::string("bad geometry JSON: ") + e.what());
    }
    if (s != ln.sign)
      throw config_error("bad geometry JSON: stored line sign disagrees with "
                         "the operators");
  }
  for (std::size_t l = 1; l < g.lines.size(); ++l)
    if (!(g.lines[l - 1].points < g.lines[l].points))
      throw config_error("bad geometry JSON: lines must be sorted and unique");
  return g;
}

void write_geometry_json(const IncidenceGeometry& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write " + path);
  out << geometry_to_json(g);
}

IncidenceGeometry load_geometry_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return geometry_from_json(ss.str());
}

}  // namespace qcw
