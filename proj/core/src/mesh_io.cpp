#include "ilr/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "ilr/errors.hpp"

namespace ilr {

namespace {

/// Token stream over the non-comment content of a mesh file.
class Tokens {
 public:
  explicit Tokens(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) {
        if (tok != "/") tokens_.push_back(tok);
      }
    }
  }

  bool done() const { return pos_ >= tokens_.size(); }
  const std::string& peek() const { return tokens_.at(pos_); }

  std::string next(const char* what) {
    if (done()) throw MeshError(std::string("mesh file truncated while reading ") + what);
    return tokens_[pos_++];
  }

  void expect(const std::string& word) {
    const auto tok = next(word.c_str());
    if (tok != word) throw MeshError("mesh file: expected '" + word + "', got '" + tok + "'");
  }

  long long integer(const char* what) {
    const auto tok = next(what);
    try {
      std::size_t used = 0;
      const long long v = std::stoll(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw MeshError(std::string("mesh file: bad integer for ") + what + ": '" + tok + "'");
    }
  }

  double real(const char* what) {
    const auto tok = next(what);
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw MeshError(std::string("mesh file: bad number for ") + what + ": '" + tok + "'");
    }
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Mesh read_mesh(std::istream& in) {
  Tokens t(in);
  t.expect("vertices");
  const auto nv = t.integer("vertex count");
  t.expect("cells");
  const auto nc = t.integer("cell count");
  if (nv <= 0 || nc <= 0) throw MeshError("mesh file: counts must be positive");

  std::vector<Vec2> vertices(nv);
  for (auto& v : vertices) {
    v.x = t.real("x");
    v.y = t.real("y");
  }
  std::vector<std::vector<int>> cells(nc);
  std::vector<int> tags(nc);
  for (long long c = 0; c < nc; ++c) {
    const auto k = t.integer("cell size");
    if (k != 3 && k != 4) throw MeshError("mesh file: cell " + std::to_string(c) + " has size " +
                                          std::to_string(k));
    for (long long i = 0; i < k; ++i) {
      const auto v = t.integer("cell vertex");
      if (v < 0 || v >= nv) throw MeshError("mesh file: vertex id out of range in cell " +
                                            std::to_string(c));
      cells[c].push_back(static_cast<int>(v));
    }
    tags[c] = static_cast<int>(t.integer("cell tag"));
  }
  BoundarySpec spec;
  while (!t.done()) {
    const auto word = t.next("section");
    if (word == "edge") {
      BoundaryTag tag;
      tag.v0 = static_cast<int>(t.integer("edge vertex"));
      tag.v1 = static_cast<int>(t.integer("edge vertex"));
      const auto name = t.next("edge kind");
      const auto kind = parse_boundary_kind(name);
      if (!kind) throw MeshError("mesh file: unknown boundary kind '" + name + "'");
      tag.kind = *kind;
      spec.tags.push_back(tag);
    } else if (word == "periodic") {
      const double tx = t.real("periodic tx");
      const double ty = t.real("periodic ty");
      spec.periodic_translations.push_back({tx, ty});
    } else {
      throw MeshError("mesh file: unexpected token '" + word + "'");
    }
  }
  return Mesh::build(std::move(vertices), cells, spec, tags);
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path);
  return read_mesh(in);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << "vertices " << mesh.num_vertices() << " / cells " << mesh.num_cells() << '\n';
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices()) out << v.x << ' ' << v.y << '\n';
  for (const auto& c : mesh.cells()) {
    out << c.vertex_count;
    for (int k = 0; k < c.vertex_count; ++k) out << ' ' << c.vertices[k];
    out << ' ' << c.tag << '\n';
  }
  for (const auto& e : mesh.edges()) {
    if (e.kind == BoundaryKind::Periodic) {
      out << "edge " << e.vertices[0] << ' ' << e.vertices[1] << " periodic\n";
      out << "edge " << e.periodic_vertices[0] << ' ' << e.periodic_vertices[1] << " periodic\n";
    } else if (e.is_boundary()) {
      out << "edge " << e.vertices[0] << ' ' << e.vertices[1] << ' ' << to_string(e.kind) << '\n';
    }
  }
  for (const auto& T : mesh.periodic_translations()) out << "periodic " << T.x << ' ' << T.y << '\n';
}

void write_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file " + path);
  write_mesh(mesh, out);
}

}  // namespace ilr
