#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reflekt/catcore.hpp"

namespace reflekt {

// Line-oriented text formats. `.cat` files hold presentations (with optional
// named blocks for functors and spans), `.rep` representations and `.crep`
// complex-valued representations, both keyed by the arrows of the base
// presentation. Composition in paths is written right-to-left with a dot
// ("g.f" applies f first); identity paths are "id_<object>".

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int l, int c, const std::string& msg)
      : std::runtime_error("line " + std::to_string(l) + ", col " + std::to_string(c) + ": " + msg),
        line(l),
        col(c) {}
};

struct FunctorDecl {
  std::string name, dom, cod;
  std::vector<std::pair<std::string, std::string>> objects;
  std::vector<std::pair<std::string, std::vector<std::string>>> arrows;  // arrow -> path (diagrammatic)
  std::map<std::string, std::string> arrow_identity_at;                  // arrow -> object, for id images
};

struct SpanDecl {
  std::string name, apex, left, right;  // functor names
};

struct CatDocument {
  std::vector<std::pair<std::string, PresentedCategory>> categories;
  std::vector<FunctorDecl> functors;
  std::vector<SpanDecl> spans;

  const PresentedCategory* category(const std::string& name) const;
  const FunctorDecl* functor_decl(const std::string& name) const;
};

CatDocument parse_cat(const std::string& text);
std::string serialize_cat(const PresentedCategory& pc, const std::string& name = "");
// materialized table as a presentation: all non-identity morphisms as arrows,
// the full composition law as relations
PresentedCategory presentation_of(const FinCategory& cat);

// matrices are parsed exactly: integer or n/d entries
struct ParsedMatrix {
  std::vector<std::vector<std::pair<long long, long long>>> entries;  // (num, den)
  int rows() const { return static_cast<int>(entries.size()); }
  int cols() const { return entries.empty() ? 0 : static_cast<int>(entries[0].size()); }
};

struct RepFile {
  std::string field;  // "Q" or "F<p>"
  std::map<std::string, int> dims;
  std::map<std::string, ParsedMatrix> matrices;
};

RepFile parse_rep(const std::string& text);
std::string serialize_rep(const RepFile& rf);

struct CrepFile {
  std::string field;
  int lo = 0, hi = -1;
  std::map<std::string, std::vector<int>> dims;                    // per object, ascending degrees
  std::map<std::pair<std::string, int>, ParsedMatrix> diffs;       // (object, degree n): d_n
  std::map<std::pair<std::string, int>, ParsedMatrix> maps;        // (arrow, degree n)
};

CrepFile parse_crep(const std::string& text);
std::string serialize_crep(const CrepFile& cf);

uint64_t parse_field_modulus(const std::string& field);  // 0 for Q

}  // namespace reflekt
