#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace reflekt {

// Composition convention: compose(g, f) = g∘f for f: a -> b, g: b -> c.
// Paths are stored in diagrammatic order (first applied first); the display
// name of a composite is dot-separated right-to-left ("g.f"), matching the
// .cat relation syntax.

struct QuiverArrow {
  std::string name;
  int src = -1, tgt = -1;
};

struct Quiver {
  std::vector<std::string> vertices;
  std::vector<QuiverArrow> arrows;

  int vertex_index(const std::string& v) const;
  int arrow_index(const std::string& a) const;
  // empty string iff well-formed (unique ids, endpoints present)
  std::string validate() const;
};

// A directed path in a quiver, arrows in diagrammatic order. Empty = identity at src.
struct QPath {
  int src = -1;
  std::vector<int> arrows;
  int tgt = -1;
};

struct PresentedCategory {
  Quiver quiver;
  std::vector<std::pair<QPath, QPath>> relations;

  std::string validate() const;  // endpoints parallel and composable
};

PresentedCategory free_category(const Quiver& q);

struct Mor {
  std::string name;
  int src = -1, tgt = -1;
};

class FinCategory;
using CatPtr = std::shared_ptr<const FinCategory>;

// Finite category with a full composition table. Immutable once finalized;
// always handled through CatPtr.
class FinCategory {
 public:
  std::string name;  // informational
  std::vector<std::string> objects;
  std::vector<Mor> mors;
  std::vector<int> identity;    // per object
  std::vector<int> generators;  // morphism indices that generate under composition
  // witness[m]: m as a composite of generators, diagrammatic order; empty for identities
  std::vector<std::vector<int>> witness;

  int object_index(const std::string& o) const;
  int mor_index(const std::string& m) const;
  bool is_identity(int m) const { return identity[mors[m].src] == m && mors[m].src == mors[m].tgt; }

  // g∘f; -1 when not composable
  int compose(int g, int f) const;
  int compose_path(const std::vector<int>& diagrammatic, int obj_if_empty) const;

  const std::vector<int>& hom(int a, int b) const;
  bool is_iso(int m) const;
  std::optional<int> inverse_of(int m) const;
  bool isomorphic_objects(int a, int b) const;

  size_t composable_pairs() const { return comp_.size(); }

  // empty string iff the table is a category (units, associativity,
  // composability exactly for matching endpoints)
  std::string verify() const;

  // Builder interface: fill the public fields, register compositions, finalize.
  void set_composite(int g, int f, int gf);
  // Computes hom tables; derives witnesses from `generators` by BFS (falls
  // back to all non-identities when generators is empty).
  void finalize();

 private:
  std::unordered_map<uint64_t, int> comp_;
  std::unordered_map<std::string, int> obj_by_name_;
  std::unordered_map<std::string, int> mor_by_name_;
  std::vector<std::vector<int>> hom_;  // [a * objects.size() + b]
  static uint64_t key(int g, int f) { return (static_cast<uint64_t>(g) << 32) | static_cast<uint32_t>(f); }
};

CatPtr terminal_category();
CatPtr discrete_category(const std::vector<std::string>& objs);

// Saturation of a finite presentation by path rewriting. Relations are
// oriented longer -> shorter, ties broken lexicographically on arrow names.
struct NonFiniteReport {
  std::string hom_src, hom_tgt;
  int reached = 0;
  int bound = 0;
};

struct SaturationResult {
  CatPtr cat;  // null iff non_finite
  std::optional<NonFiniteReport> non_finite;
  bool rules_locally_confluent = true;  // critical-pair check of the oriented rules
  std::vector<int> arrow_mor;           // per quiver arrow: morphism index in cat
};

SaturationResult saturate(const PresentedCategory& pc, int bound);

// Total functor between materialized categories.
struct FunctorMap {
  std::string name;
  CatPtr dom, cod;
  std::vector<int> ob;
  std::vector<int> mor;

  int apply_ob(int o) const { return ob[o]; }
  int apply_mor(int m) const { return mor[m]; }
};

FunctorMap identity_functor(const CatPtr& c);
FunctorMap compose_functors(const FunctorMap& g, const FunctorMap& f);  // g after f

struct FunctorReport {
  bool ok = true;
  std::string issue;
};

FunctorReport check_functor(const FunctorMap& f);

// Extend generator images to a total functor; throws if the images do not
// respect the composition table.
FunctorMap functor_from_generators(const CatPtr& dom, const CatPtr& cod,
                                   const std::vector<int>& ob_map,
                                   const std::map<int, int>& gen_images,
                                   const std::string& name = "");

// Generator-level functor out of a presentation (arrow -> path of morphisms
// in a materialized codomain).
struct GeneratorFunctor {
  PresentedCategory dom;
  CatPtr cod;
  std::vector<int> ob;                     // per vertex
  std::vector<std::vector<int>> arrow_to;  // per arrow: morphism path, diagrammatic
};

FunctorReport check_generator_functor(const GeneratorFunctor& f);

struct FunctorPredicates {
  bool fully_faithful = false;
  bool faithful = false;
  bool injective_on_objects = false;
  bool sieve = false;
  bool cosieve = false;
  bool essentially_surjective = false;
};

FunctorPredicates functor_predicates(const FunctorMap& f);

enum class SliceSide { Under, Over };  // (u/b) resp. (b/u)

struct SliceCategory {
  CatPtr cat;
  FunctorMap projection;                     // to dom(u)
  std::vector<std::pair<int, int>> objects;  // (a, f) with f: u(a)->b (resp. b->u(a))
  int object_of(int a, int f) const;
};

SliceCategory slice(const FunctorMap& u, int b, SliceSide side);

struct ProductCategory {
  CatPtr cat;
  std::vector<std::pair<int, int>> objects;
  std::vector<std::pair<int, int>> morphisms;
  int object_of(int o1, int o2) const;
  int mor_of(int m1, int m2) const;
};

ProductCategory product_category(const CatPtr& c1, const CatPtr& c2);
CatPtr opposite_category(const CatPtr& c);
// n-fold product; pairs built left-associated
ProductCategory power_category(const CatPtr& c, int n);

// Full subcategory on an object subset, with the inclusion functor.
struct SubcategoryResult {
  CatPtr cat;
  FunctorMap inclusion;
};
SubcategoryResult full_subcategory(const CatPtr& c, const std::vector<int>& objs,
                                   const std::string& name = "");

// product functor f1 x f2 between product categories
FunctorMap product_functor(const ProductCategory& dom, const ProductCategory& cod,
                           const FunctorMap& f1, const FunctorMap& f2);

// Natural transformation between functors of categories (component per object).
struct CatTransform {
  const FunctorMap* src = nullptr;
  const FunctorMap* dst = nullptr;
  std::vector<int> component;  // per object of the domain: morphism in codomain
};

bool check_cat_transform(const FunctorMap& src, const FunctorMap& dst,
                         const std::vector<int>& component);

enum class AdjointSide { Left, Right };

struct Adjunction {
  FunctorMap left, right;        // left ⊣ right
  std::vector<int> unit;         // per object of dom(left): id -> right∘left
  std::vector<int> counit;       // per object of dom(right): left∘right -> id
};

// side = Right: search G with F ⊣ G; side = Left: search G with G ⊣ F.
// Triangle identities are machine-checked before returning.
std::optional<Adjunction> find_adjoint(const FunctorMap& f, AdjointSide side);

bool has_3for2(const FunctorMap& f);

// Structural equality of composition tables (names, endpoints, composites).
bool same_table(const FinCategory& a, const FinCategory& b);

// Searches for an isomorphism of categories extending the given partial
// object map (may be empty); returns it as a FunctorMap if found.
std::optional<FunctorMap> find_isomorphism(const CatPtr& a, const CatPtr& b,
                                           const std::map<int, int>& partial_ob = {});

}  // namespace reflekt
