#include "reflekt/formats.hpp"

#include <algorithm>
#include <sstream>

namespace reflekt {

namespace {

struct Cursor {
  std::vector<std::string> lines;
  size_t i = 0;

  explicit Cursor(const std::string& text) {
    std::string cur;
    for (char c : text) {
      if (c == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    lines.push_back(cur);
  }
  int lineno() const { return static_cast<int>(i) + 1; }
};

std::string strip_comment(const std::string& s) {
  auto pos = s.find('#');
  return pos == std::string::npos ? s : s.substr(0, pos);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_dot(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '.') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// path text -> diagrammatic arrow list ("g.f" means f first)
std::vector<std::string> parse_path_names(const std::string& text, int line,
                                          std::string* identity_at) {
  std::string t = trim(text);
  if (t.rfind("id_", 0) == 0) {
    if (identity_at) *identity_at = t.substr(3);
    return {};
  }
  auto parts = split_dot(t);
  std::reverse(parts.begin(), parts.end());
  for (auto& p : parts)
    if (trim(p).empty()) throw ParseError(line, 1, "empty segment in path '" + t + "'");
  return parts;
}

QPath resolve_path(const Quiver& q, const std::vector<std::string>& names,
                   const std::string& identity_at, int line) {
  QPath p;
  if (names.empty()) {
    p.src = p.tgt = q.vertex_index(identity_at);
    if (p.src < 0) throw ParseError(line, 1, "unknown object '" + identity_at + "'");
    return p;
  }
  int at = -1;
  for (auto& n : names) {
    int a = q.arrow_index(trim(n));
    if (a < 0) throw ParseError(line, 1, "unknown arrow '" + trim(n) + "'");
    if (at < 0)
      p.src = q.arrows[a].src;
    else if (q.arrows[a].src != at)
      throw ParseError(line, 1, "path is not composable at '" + trim(n) + "'");
    at = q.arrows[a].tgt;
    p.arrows.push_back(a);
  }
  p.tgt = at;
  return p;
}

enum class Section { None, Objects, Arrows, Relations };

void parse_category_line(PresentedCategory& pc, Section& sec, const std::string& raw, int line) {
  std::string s = trim(strip_comment(raw));
  if (s.empty()) return;
  if (s.rfind("objects:", 0) == 0) {
    sec = Section::Objects;
    s = trim(s.substr(8));
  } else if (s.rfind("arrows:", 0) == 0) {
    sec = Section::Arrows;
    s = trim(s.substr(7));
  } else if (s.rfind("relations:", 0) == 0) {
    sec = Section::Relations;
    s = trim(s.substr(10));
  }
  if (s.empty()) return;
  switch (sec) {
    case Section::Objects: {
      for (auto& name : split_ws(s)) pc.quiver.vertices.push_back(name);
      break;
    }
    case Section::Arrows: {
      auto colon = s.find(':');
      auto arrow = s.find("->");
      if (colon == std::string::npos || arrow == std::string::npos || arrow < colon)
        throw ParseError(line, 1, "expected 'name: src -> tgt'");
      std::string name = trim(s.substr(0, colon));
      std::string src = trim(s.substr(colon + 1, arrow - colon - 1));
      std::string tgt = trim(s.substr(arrow + 2));
      int si = pc.quiver.vertex_index(src), ti = pc.quiver.vertex_index(tgt);
      if (si < 0) throw ParseError(line, static_cast<int>(colon) + 2, "unknown object '" + src + "'");
      if (ti < 0) throw ParseError(line, static_cast<int>(arrow) + 3, "unknown object '" + tgt + "'");
      pc.quiver.arrows.push_back({name, si, ti});
      break;
    }
    case Section::Relations: {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw ParseError(line, 1, "expected 'path = path'");
      std::string lid, rid;
      auto lhs_names = parse_path_names(s.substr(0, eq), line, &lid);
      auto rhs_names = parse_path_names(s.substr(eq + 1), line, &rid);
      QPath lhs = resolve_path(pc.quiver, lhs_names, lid, line);
      QPath rhs = resolve_path(pc.quiver, rhs_names, rid, line);
      if (lhs.src != rhs.src || lhs.tgt != rhs.tgt)
        throw ParseError(line, static_cast<int>(eq) + 1, "relation sides are not parallel");
      pc.relations.emplace_back(lhs, rhs);
      break;
    }
    case Section::None:
      throw ParseError(line, 1, "content outside any section: '" + s + "'");
  }
}

}  // namespace

const PresentedCategory* CatDocument::category(const std::string& name) const {
  for (auto& [n, c] : categories)
    if (n == name) return &c;
  return nullptr;
}

const FunctorDecl* CatDocument::functor_decl(const std::string& name) const {
  for (auto& f : functors)
    if (f.name == name) return &f;
  return nullptr;
}

CatDocument parse_cat(const std::string& text) {
  CatDocument doc;
  Cursor cur(text);
  bool block_style = false;
  for (auto& l : cur.lines) {
    std::string s = trim(strip_comment(l));
    if (s.rfind("category ", 0) == 0 || s.rfind("functor ", 0) == 0 || s.rfind("span", 0) == 0) {
      block_style = true;
      break;
    }
    if (!s.empty()) break;
  }
  if (!block_style) {
    PresentedCategory pc;
    Section sec = Section::None;
    for (; cur.i < cur.lines.size(); ++cur.i)
      parse_category_line(pc, sec, cur.lines[cur.i], cur.lineno());
    if (auto e = pc.validate(); !e.empty()) throw ParseError(1, 1, e);
    doc.categories.emplace_back("", std::move(pc));
    return doc;
  }

  while (cur.i < cur.lines.size()) {
    std::string s = trim(strip_comment(cur.lines[cur.i]));
    if (s.empty()) {
      ++cur.i;
      continue;
    }
    int start_line = cur.lineno();
    if (s.rfind("category ", 0) == 0) {
      std::string name = trim(s.substr(9));
      if (name.empty()) throw ParseError(start_line, 10, "category needs a name");
      PresentedCategory pc;
      Section sec = Section::None;
      ++cur.i;
      for (; cur.i < cur.lines.size(); ++cur.i) {
        std::string b = trim(strip_comment(cur.lines[cur.i]));
        if (b == "end") break;
        parse_category_line(pc, sec, cur.lines[cur.i], cur.lineno());
      }
      if (cur.i >= cur.lines.size()) throw ParseError(start_line, 1, "unterminated category block");
      ++cur.i;
      if (auto e = pc.validate(); !e.empty()) throw ParseError(start_line, 1, e);
      doc.categories.emplace_back(name, std::move(pc));
    } else if (s.rfind("functor ", 0) == 0) {
      FunctorDecl fd;
      std::string rest = trim(s.substr(8));
      auto colon = rest.find(':');
      auto arrow = rest.find("->");
      if (colon == std::string::npos || arrow == std::string::npos)
        throw ParseError(start_line, 1, "expected 'functor NAME : DOM -> COD'");
      fd.name = trim(rest.substr(0, colon));
      fd.dom = trim(rest.substr(colon + 1, arrow - colon - 1));
      fd.cod = trim(rest.substr(arrow + 2));
      ++cur.i;
      for (; cur.i < cur.lines.size(); ++cur.i) {
        std::string b = trim(strip_comment(cur.lines[cur.i]));
        if (b == "end") break;
        if (b.empty()) continue;
        if (b.rfind("object ", 0) == 0) {
          auto ar = b.find("->");
          if (ar == std::string::npos) throw ParseError(cur.lineno(), 1, "expected 'object a -> x'");
          fd.objects.emplace_back(trim(b.substr(7, ar - 7)), trim(b.substr(ar + 2)));
        } else if (b.rfind("arrow ", 0) == 0) {
          auto ar = b.find("->");
          if (ar == std::string::npos) throw ParseError(cur.lineno(), 1, "expected 'arrow f -> path'");
          std::string name = trim(b.substr(6, ar - 6));
          std::string idat;
          auto path = parse_path_names(b.substr(ar + 2), cur.lineno(), &idat);
          fd.arrows.emplace_back(name, path);
          if (path.empty()) fd.arrow_identity_at[name] = idat;
        } else {
          throw ParseError(cur.lineno(), 1, "unexpected line in functor block");
        }
      }
      if (cur.i >= cur.lines.size()) throw ParseError(start_line, 1, "unterminated functor block");
      ++cur.i;
      doc.functors.push_back(std::move(fd));
    } else if (s.rfind("span", 0) == 0) {
      SpanDecl sd;
      sd.name = trim(s.substr(4));
      ++cur.i;
      for (; cur.i < cur.lines.size(); ++cur.i) {
        std::string b = trim(strip_comment(cur.lines[cur.i]));
        if (b == "end") break;
        if (b.empty()) continue;
        if (b.rfind("apex ", 0) == 0)
          sd.apex = trim(b.substr(5));
        else if (b.rfind("left ", 0) == 0)
          sd.left = trim(b.substr(5));
        else if (b.rfind("right ", 0) == 0)
          sd.right = trim(b.substr(6));
        else
          throw ParseError(cur.lineno(), 1, "unexpected line in span block");
      }
      if (cur.i >= cur.lines.size()) throw ParseError(start_line, 1, "unterminated span block");
      ++cur.i;
      doc.spans.push_back(std::move(sd));
    } else {
      throw ParseError(start_line, 1, "expected a category/functor/span block");
    }
  }
  return doc;
}

std::string serialize_cat(const PresentedCategory& pc, const std::string& name) {
  std::ostringstream out;
  bool block = !name.empty();
  if (block) out << "category " << name << "\n";
  std::string ind = block ? "  " : "";
  out << ind << "objects:";
  for (auto& v : pc.quiver.vertices) out << " " << v;
  out << "\n" << ind << "arrows:\n";
  for (auto& a : pc.quiver.arrows)
    out << ind << "  " << a.name << ": " << pc.quiver.vertices[a.src] << " -> "
        << pc.quiver.vertices[a.tgt] << "\n";
  if (!pc.relations.empty()) {
    out << ind << "relations:\n";
    auto show = [&](const QPath& p) {
      if (p.arrows.empty()) return "id_" + pc.quiver.vertices[p.src];
      std::string s;
      for (auto it = p.arrows.rbegin(); it != p.arrows.rend(); ++it) {
        if (!s.empty()) s += ".";
        s += pc.quiver.arrows[*it].name;
      }
      return s;
    };
    for (auto& [l, r] : pc.relations) out << ind << "  " << show(l) << " = " << show(r) << "\n";
  }
  if (block) out << "end\n";
  return out.str();
}

PresentedCategory presentation_of(const FinCategory& cat) {
  PresentedCategory pc;
  pc.quiver.vertices = cat.objects;
  std::vector<int> arrow_of(cat.mors.size(), -1);
  for (size_t m = 0; m < cat.mors.size(); ++m) {
    if (cat.is_identity(static_cast<int>(m))) continue;
    arrow_of[m] = static_cast<int>(pc.quiver.arrows.size());
    pc.quiver.arrows.push_back({cat.mors[m].name, cat.mors[m].src, cat.mors[m].tgt});
  }
  for (size_t f = 0; f < cat.mors.size(); ++f) {
    if (cat.is_identity(static_cast<int>(f))) continue;
    for (size_t g = 0; g < cat.mors.size(); ++g) {
      if (cat.is_identity(static_cast<int>(g))) continue;
      int c = cat.compose(static_cast<int>(g), static_cast<int>(f));
      if (c < 0) continue;
      QPath lhs{cat.mors[f].src, {arrow_of[f], arrow_of[g]}, cat.mors[g].tgt};
      QPath rhs{lhs.src, {}, lhs.tgt};
      if (!cat.is_identity(c)) rhs.arrows = {arrow_of[c]};
      pc.relations.emplace_back(lhs, rhs);
    }
  }
  return pc;
}

// ---------------------------------------------------------------- matrices

namespace {

std::pair<long long, long long> parse_fraction(const std::string& tok, int line) {
  auto slash = tok.find('/');
  try {
    if (slash == std::string::npos) return {std::stoll(tok), 1};
    return {std::stoll(tok.substr(0, slash)), std::stoll(tok.substr(slash + 1))};
  } catch (const std::exception&) {
    throw ParseError(line, 1, "bad number '" + tok + "'");
  }
}

ParsedMatrix parse_matrix(const std::string& text, int line) {
  ParsedMatrix pm;
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    throw ParseError(line, 1, "expected [[..],[..]]");
  std::string inner = t.substr(1, t.size() - 2);
  std::vector<std::string> rows;
  std::string cur;
  int depth = 0;
  for (char c : inner) {
    if (c == '[') {
      ++depth;
      if (depth == 1) continue;
    }
    if (c == ']') {
      --depth;
      if (depth == 0) {
        rows.push_back(cur);
        cur.clear();
        continue;
      }
    }
    if (depth >= 1) cur += c;
  }
  if (trim(inner).empty()) return pm;
  size_t cols = std::string::npos;
  for (auto& row : rows) {
    std::vector<std::pair<long long, long long>> r;
    std::string tok;
    for (char c : row + ",") {
      if (c == ',') {
        std::string tt = trim(tok);
        if (!tt.empty()) r.push_back(parse_fraction(tt, line));
        tok.clear();
      } else {
        tok += c;
      }
    }
    if (cols == std::string::npos) cols = r.size();
    if (r.size() != cols) throw ParseError(line, 1, "ragged matrix");
    pm.entries.push_back(std::move(r));
  }
  return pm;
}

std::string show_matrix(const ParsedMatrix& pm) {
  std::string s = "[";
  for (size_t i = 0; i < pm.entries.size(); ++i) {
    s += "[";
    for (size_t j = 0; j < pm.entries[i].size(); ++j) {
      auto [n, d] = pm.entries[i][j];
      s += d == 1 ? std::to_string(n) : std::to_string(n) + "/" + std::to_string(d);
      if (j + 1 < pm.entries[i].size()) s += ",";
    }
    s += "]";
    if (i + 1 < pm.entries.size()) s += ",";
  }
  return s + "]";
}

}  // namespace

uint64_t parse_field_modulus(const std::string& field) {
  if (field == "Q") return 0;
  if (field.size() >= 2 && field[0] == 'F') return std::stoull(field.substr(1));
  throw std::invalid_argument("unknown field spec '" + field + "' (use Q or F<p>)");
}

RepFile parse_rep(const std::string& text) {
  RepFile rf;
  Cursor cur(text);
  for (; cur.i < cur.lines.size(); ++cur.i) {
    std::string s = trim(strip_comment(cur.lines[cur.i]));
    if (s.empty()) continue;
    int line = cur.lineno();
    if (s.rfind("field ", 0) == 0) {
      rf.field = trim(s.substr(6));
      parse_field_modulus(rf.field);
    } else if (s.rfind("dim ", 0) == 0) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw ParseError(line, 1, "expected 'dim a = n'");
      rf.dims[trim(s.substr(4, eq - 4))] = std::stoi(trim(s.substr(eq + 1)));
    } else if (s.rfind("matrix ", 0) == 0) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw ParseError(line, 1, "expected 'matrix f = [[..]]'");
      rf.matrices[trim(s.substr(7, eq - 7))] = parse_matrix(s.substr(eq + 1), line);
    } else {
      throw ParseError(line, 1, "unexpected line '" + s + "'");
    }
  }
  if (rf.field.empty()) throw ParseError(1, 1, "missing field header");
  return rf;
}

std::string serialize_rep(const RepFile& rf) {
  std::ostringstream out;
  out << "field " << rf.field << "\n";
  for (auto& [o, d] : rf.dims) out << "dim " << o << " = " << d << "\n";
  for (auto& [a, m] : rf.matrices) out << "matrix " << a << " = " << show_matrix(m) << "\n";
  return out.str();
}

CrepFile parse_crep(const std::string& text) {
  CrepFile cf;
  Cursor cur(text);
  for (; cur.i < cur.lines.size(); ++cur.i) {
    std::string s = trim(strip_comment(cur.lines[cur.i]));
    if (s.empty()) continue;
    int line = cur.lineno();
    if (s.rfind("field ", 0) == 0) {
      cf.field = trim(s.substr(6));
      parse_field_modulus(cf.field);
    } else if (s.rfind("degrees ", 0) == 0) {
      std::string rng = trim(s.substr(8));
      auto dots = rng.find("..");
      if (dots == std::string::npos) throw ParseError(line, 1, "expected 'degrees lo..hi'");
      cf.lo = std::stoi(trim(rng.substr(0, dots)));
      cf.hi = std::stoi(trim(rng.substr(dots + 2)));
      if (cf.hi < cf.lo) throw ParseError(line, 1, "empty degree window");
    } else if (s.rfind("dim ", 0) == 0) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw ParseError(line, 1, "expected 'dim a = d d d ...'");
      std::vector<int> ds;
      for (auto& tok : split_ws(s.substr(eq + 1))) ds.push_back(std::stoi(tok));
      if (static_cast<int>(ds.size()) != cf.hi - cf.lo + 1)
        throw ParseError(line, 1, "expected one dimension per degree");
      cf.dims[trim(s.substr(4, eq - 4))] = ds;
    } else if (s.rfind("d ", 0) == 0) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw ParseError(line, 1, "expected 'd a n = [[..]]'");
      auto toks = split_ws(s.substr(2, eq - 2));
      if (toks.size() != 2) throw ParseError(line, 1, "expected 'd a n = [[..]]'");
      cf.diffs[{toks[0], std::stoi(toks[1])}] = parse_matrix(s.substr(eq + 1), line);
    } else if (s.rfind("matrix ", 0) == 0) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw ParseError(line, 1, "expected 'matrix f n = [[..]]'");
      auto toks = split_ws(s.substr(7, eq - 7));
      if (toks.size() != 2) throw ParseError(line, 1, "expected 'matrix f n = [[..]]'");
      cf.maps[{toks[0], std::stoi(toks[1])}] = parse_matrix(s.substr(eq + 1), line);
    } else {
      throw ParseError(line, 1, "unexpected line '" + s + "'");
    }
  }
  if (cf.field.empty()) throw ParseError(1, 1, "missing field header");
  if (cf.hi < cf.lo) throw ParseError(1, 1, "missing degrees header");
  return cf;
}

std::string serialize_crep(const CrepFile& cf) {
  std::ostringstream out;
  out << "field " << cf.field << "\n";
  out << "degrees " << cf.lo << ".." << cf.hi << "\n";
  for (auto& [o, ds] : cf.dims) {
    out << "dim " << o << " =";
    for (int d : ds) out << " " << d;
    out << "\n";
  }
  for (auto& [key, m] : cf.diffs)
    out << "d " << key.first << " " << key.second << " = " << show_matrix(m) << "\n";
  for (auto& [key, m] : cf.maps)
    out << "matrix " << key.first << " " << key.second << " = " << show_matrix(m) << "\n";
  return out.str();
}

}  // namespace reflekt
