#include "qgraph/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "qgraph/errors.hpp"

namespace qgraph {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Drops whitespace adjacent to the separators so "a = 1 : 2" reads as "a=1:2".
std::string squeeze_separators(const std::string& line) {
  std::string out;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == ' ' || c == '\t') {
      std::size_t j = i;
      while (j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
      const bool before_sep = j < line.size() && (line[j] == '=' || line[j] == ',' || line[j] == ':');
      const bool after_sep = !out.empty() && (out.back() == '=' || out.back() == ',' || out.back() == ':');
      if (!before_sep && !after_sep && !out.empty() && j < line.size()) out.push_back(' ');
      i = j - 1;
      continue;
    }
    out.push_back(c);
  }
  return out;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

double to_double(std::string_view s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(s), &used);
    if (used != s.size()) fail(line_no, "trailing characters in number '" + std::string(s) + "'");
    return v;
  } catch (const std::invalid_argument&) {
    fail(line_no, "expected a number, got '" + std::string(s) + "'");
  } catch (const std::out_of_range&) {
    fail(line_no, "number out of range '" + std::string(s) + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::map<std::string, std::string> fields(const std::string& line, std::size_t line_no) {
  std::map<std::string, std::string> out;
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) fail(line_no, "expected key=value, got '" + token + "'");
    if (!out.emplace(token.substr(0, eq), token.substr(eq + 1)).second)
      fail(line_no, "repeated key '" + token.substr(0, eq) + "'");
  }
  return out;
}

const std::string& need(const std::map<std::string, std::string>& f, const std::string& key,
                        std::size_t line_no) {
  const auto it = f.find(key);
  if (it == f.end()) fail(line_no, "missing field '" + key + "'");
  return it->second;
}

}  // namespace

GraphFile parse_graph(std::string_view text) {
  enum class Section { None, Vertices, Edges, Cuts } section = Section::None;
  std::vector<Vertex> vertices;
  struct RawEdge {
    std::string id, from, to;
    double length;
    std::vector<PotentialSegment> potential;
    std::size_t line_no;
  };
  std::vector<RawEdge> raw_edges;
  struct RawCut {
    std::string edge;
    double t;
    CutFamily family;
    double param;
    std::size_t line_no;
  };
  std::vector<RawCut> raw_cuts;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = squeeze_separators(trim(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[vertices]") section = Section::Vertices;
      else if (line == "[edges]") section = Section::Edges;
      else if (line == "[cuts]") section = Section::Cuts;
      else fail(line_no, "unknown section " + line);
      continue;
    }
    const auto f = fields(line, line_no);
    switch (section) {
      case Section::None:
        fail(line_no, "content before any section header");
      case Section::Vertices: {
        const std::string& cond = need(f, "condition", line_no);
        VertexCondition vc;
        if (cond == "dirichlet") {
          vc = VertexCondition::dirichlet();
        } else if (cond.rfind("delta:", 0) == 0) {
          vc = VertexCondition::delta(to_double(cond.substr(6), line_no));
        } else if (cond == "delta") {
          vc = VertexCondition::delta(0.0);
        } else {
          fail(line_no, "condition must be delta:<chi> or dirichlet");
        }
        vertices.push_back({need(f, "id", line_no), vc});
        break;
      }
      case Section::Edges: {
        RawEdge e{need(f, "id", line_no), need(f, "from", line_no), need(f, "to", line_no),
                  to_double(need(f, "length", line_no), line_no), {}, line_no};
        if (const auto it = f.find("potential"); it != f.end()) {
          for (const auto& item : split(it->second, ',')) {
            const auto parts = split(item, ':');
            if (parts.size() != 2) fail(line_no, "potential entries are len:q");
            e.potential.push_back({to_double(parts[0], line_no), to_double(parts[1], line_no)});
          }
        }
        raw_edges.push_back(std::move(e));
        break;
      }
      case Section::Cuts: {
        const auto family = parse_cut_family(need(f, "family", line_no));
        if (!family) fail(line_no, "unknown cut family");
        double param = 0.0;
        if (const auto it = f.find("params"); it != f.end()) param = to_double(it->second, line_no);
        raw_cuts.push_back(
            {need(f, "edge", line_no), to_double(need(f, "t", line_no), line_no), *family, param, line_no});
        break;
      }
    }
  }

  auto vertex_index = [&](const std::string& id, std::size_t ln) {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (vertices[i].id == id) return i;
    fail(ln, "unknown vertex '" + id + "'");
  };
  std::vector<Edge> edges;
  for (auto& e : raw_edges)
    edges.push_back({e.id, vertex_index(e.from, e.line_no), vertex_index(e.to, e.line_no), e.length,
                     std::move(e.potential)});

  GraphFile out{MetricGraph(std::move(vertices), std::move(edges)), std::nullopt};
  if (!raw_cuts.empty()) {
    std::vector<CutPoint> cuts;
    std::vector<double> params;
    for (std::size_t j = 0; j < raw_cuts.size(); ++j) {
      const auto& c = raw_cuts[j];
      if (c.family != raw_cuts.front().family) fail(c.line_no, "all cuts must share one family");
      const auto e = out.graph.find_edge(c.edge);
      if (!e) fail(c.line_no, "unknown edge '" + c.edge + "'");
      cuts.push_back({*e, c.t, static_cast<int>(j)});
      params.push_back(c.param);
    }
    out.cuts = CutSet(std::move(cuts), raw_cuts.front().family, std::move(params));
  }
  return out;
}

GraphFile read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

std::string format_graph(const MetricGraph& graph, const std::optional<CutSet>& cuts) {
  std::ostringstream os;
  os.precision(17);
  os << "[vertices]\n";
  for (const auto& v : graph.vertices()) {
    os << "id=" << v.id << " condition=";
    if (v.condition.is_dirichlet()) os << "dirichlet\n";
    else os << "delta:" << v.condition.chi << "\n";
  }
  os << "[edges]\n";
  for (const auto& e : graph.edges()) {
    os << "id=" << e.id << " from=" << graph.vertex(e.from).id << " to=" << graph.vertex(e.to).id
       << " length=" << e.length << " potential=";
    for (std::size_t k = 0; k < e.potential.size(); ++k)
      os << (k ? "," : "") << e.potential[k].length << ":" << e.potential[k].q;
    os << "\n";
  }
  if (cuts && !cuts->empty()) {
    os << "[cuts]\n";
    for (std::size_t j = 0; j < cuts->size(); ++j) {
      const auto& c = cuts->cuts()[j];
      os << "edge=" << graph.edge(c.edge).id << " t=" << c.t << " family=" << to_string(cuts->family())
         << " params=" << cuts->params()[j] << "\n";
    }
  }
  return os.str();
}

}  // namespace qgraph
