#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "reflekt/amalgam.hpp"
#include "reflekt/catcore.hpp"

namespace reflekt {

// The named gluing constructions: free oriented gluings with standard
// factorizations, attached sources/sinks, separated sources/sinks, cube and
// invertible-cube shapes, the reflection shape chain, and object separation.

struct CoproductCategory {
  CatPtr cat;
  FunctorMap inj1, inj2;
  std::vector<std::pair<int, int>> ob_origin;   // (side, index)
  std::vector<std::pair<int, int>> mor_origin;  // (side, index)
};

CoproductCategory coproduct_category(const CatPtr& c1, const CatPtr& c2);

CatPtr point_category(const std::string& obj);
CatPtr chain_category(int n_objects);  // poset 0 < 1 < ... (objects "0", "1", ...)

struct GluingResult {
  CatPtr A1, A2;
  std::vector<int> s, t;  // marked objects in A1 resp. A2
  CoproductCategory copr;
  AmalgamResult push;     // W = 2n discrete points over coproduct(A1, A2) and n free arrows
  MaterializedAmalgam M;
  CatPtr A;               // M.Z
  FunctorMap i1, i2;      // A1 -> A, A2 -> A
  std::vector<int> beta;  // per k: morphism index in A
  std::vector<std::pair<int, int>> ob_origin;  // per A-object: (side, index in A1/A2)

  enum class Kind { In1, In2, Cross };
  struct Class {
    Kind kind;
    int m = -1;             // original morphism (In1/In2)
    int k = -1, f1 = -1, f2 = -1;  // standard factorization (Cross)
  };
  std::vector<Class> cls;  // per A-morphism

  int n() const { return static_cast<int>(s.size()); }
};

GluingResult free_oriented_gluing(const CatPtr& A1, const CatPtr& A2, const std::vector<int>& s,
                                  const std::vector<int>& t,
                                  const std::vector<std::string>& beta_names = {}, int bound = 64);

// Builds a functor out of a gluing by mapping each word entry to a path in
// the target; the result is validated.
FunctorMap functor_on_gluing(const GluingResult& g, const CatPtr& target, const std::string& name,
                             const std::vector<int>& ob_img,
                             const std::function<std::vector<int>(int side, int mor)>& leg_img,
                             const std::function<std::vector<int>(int k)>& beta_img);

// Compatible gluings (same A2 and targets, sigma: A1 -> A1' with sigma(s)=s')
// induce a functor between the glued categories.
FunctorMap induced_gluing_functor(const GluingResult& g, const GluingResult& gp,
                                  const FunctorMap& sigma, const std::string& name);

// For thin codomains (hom-sets of size <= 1 between the relevant objects):
// the morphism map is forced by the object map.
FunctorMap thin_functor(const CatPtr& dom, const CatPtr& cod, const std::vector<int>& ob_map,
                        const std::string& name);

struct ConeOverResult {
  CatPtr cat;
  FunctorMap inclusion;  // base -> cone
  int tip;
  std::vector<int> tip_arrows;  // per base object: tip->o (source) resp. o->tip (sink)
};

// Adjoin a free initial (source) or terminal (sink) object to a category.
ConeOverResult cone_over(const CatPtr& base, const std::string& tip_name, int dir_source);

struct StandardFactorization {
  int k;
  int f1;  // morphism in A1
  int f2;  // morphism in A2
};

// Unique factorization f = i2(f2) ∘ β_k ∘ i1(f1) of a cross morphism.
StandardFactorization standard_factorization(const GluingResult& g, int mor);

struct GluingLemmaReport {
  bool images_fully_faithful = false;
  bool images_disjoint = false;
  bool jointly_surjective = false;
  bool no_backward_morphisms = false;
  bool factorizations_unique = false;  // brute-force scan over all triples
  std::string detail;
  bool ok() const {
    return images_fully_faithful && images_disjoint && jointly_surjective &&
           no_backward_morphisms && factorizations_unique;
  }
};

GluingLemmaReport check_gluing_lemma(const GluingResult& g);

enum class ConeDirection { Source, Sink };

struct ConeResult {
  GluingResult glue;
  CatPtr cat;            // C^- resp. C^+
  FunctorMap inclusion;  // C -> C^±, fully faithful
  std::vector<int> cone_arrows;  // a_i: v -> y_i resp. b_i: y_i -> w
  int tip;               // object index of v resp. w
  ConeDirection direction;
};

ConeResult attach_cone(const CatPtr& C, const std::vector<int>& ys, ConeDirection dir,
                       int bound = 64);

struct SeparationResult {
  GluingResult glue;
  CatPtr D;              // D^- resp. D^+
  ConeResult cone;       // the corresponding C^- resp. C^+
  FunctorMap u;          // D^± -> C^±, contracts the edges x_i -> y_i
  FunctorMap j;          // C -> D^±
  std::vector<int> xs;   // the separated objects x_i in D^±
  std::vector<int> sep_arrows;   // e_i: x_i -> y_i  (resp. x_i -> y_i)
  std::vector<int> tip_arrows;   // v -> x_i (source) resp. x_i -> v (sink)
  int tip;
};

SeparationResult separate_source_sink(const CatPtr& C, const std::vector<int>& ys,
                                      ConeDirection dir, int bound = 64);

// Slice decomposition from the contraction analysis: the objects of (u^+/w)
// fall into five disjoint classes, the first three spanning the homotopy
// final subcategory H with H' obtained by dropping the y-classes.
struct SinkSliceAnalysis {
  SliceCategory slice;                  // (u^+ / w)
  std::vector<int> object_class;       // per slice object: 1..5
  SubcategoryResult H, Hprime;
  std::vector<int> h_class;            // class (1..3) per H object
  bool classes_exhaustive = false;     // every object in exactly one class
};

SinkSliceAnalysis analyze_sink_slice(const SeparationResult& sep);

// n-fold products with tuple bookkeeping (used for [1]^n, [2]^n, R^n).
struct TuplePower {
  CatPtr cat;
  std::vector<std::vector<int>> obj_tuple, mor_tuple;
  int object_of(const std::vector<int>& t) const;
  int mor_of(const std::vector<int>& t) const;
};

TuplePower tuple_power(const CatPtr& c, int n);

// The inclusion chain n·1 = [1]^n_{=n-1} -> [1]^n_{>=n-1} -> [1]^n -> I -> [2]^n.
struct CubeShapes {
  int n;
  TuplePower unit_cube;   // [1]^n
  TuplePower two_cube;    // [2]^n
  SubcategoryResult eq_top;   // [1]^n_{=n-1} in [1]^n
  SubcategoryResult geq_top;  // [1]^n_{>=n-1} in [1]^n
  SubcategoryResult corner_I; // I in [2]^n: hull [1,2]^n plus the corners
  FunctorMap i1;  // [1]^n_{=n-1} -> [1]^n_{>=n-1}
  FunctorMap i2;  // [1]^n_{>=n-1} -> [1]^n
  FunctorMap i3;  // [1]^n -> I  (shift by +1)
  FunctorMap i4;  // I -> [2]^n
};

CubeShapes cube_shapes(int n);

// truncations [1]^n_{>=k} / [1]^n_{=k} with their inclusions
SubcategoryResult cube_truncation_geq(const TuplePower& unit_cube, int k);
SubcategoryResult cube_truncation_eq(const TuplePower& unit_cube, int k);

struct InvertibleShapes {
  CatPtr R;        // localization of [2] at 0 -> 2, materialized by saturation
  SaturationResult R_oracle;
  TuplePower Rn;   // R^n
  TuplePower two_cube;
  FunctorMap q;    // [2]^n -> R^n
  int idempotent;  // e in Hom_R(1,1)
};

InvertibleShapes invertible_shapes(int n);

// Hand-frozen composition table of R; the oracle run must reproduce it.
CatPtr frozen_R_table();

// Shape chain for the separated reflection: both the minus and the plus side,
// ending in the common category F (the isomorphism is constructed, not
// assumed).
struct ReflectionShapes {
  int n = 0;
  SeparationResult sep_minus, sep_plus;

  // minus side
  std::vector<GluingResult> minus_chain;  // D^-, A1, A2, A3, E1^-
  std::vector<FunctorMap> j_minus;        // connecting functors of the chain
  GluingResult E2m, F1, F;
  FunctorMap r;          // E1^- -> E2^-
  FunctorMap jF1, jF2;   // E2^- -> F1 -> F
  FunctorMap l_cube;     // [2]^n -> E1^-
  FunctorMap j_R;        // R^n -> E2^-
  FunctorMap l_square;   // square -> F
  FunctorMap m_R;        // R^n -> F

  // plus side
  std::vector<GluingResult> plus_chain;   // D^+, A1+, A2+, A3+, E1^+
  std::vector<FunctorMap> j_plus;
  GluingResult E2p, F1p, Fp;
  FunctorMap r_plus;     // E1^+ -> E2^+
  FunctorMap iso_F;      // F -> F^+, bijective on objects and morphisms

  InvertibleShapes inv;
  CubeShapes cubes;

  // intermediate one-point extensions and squares (exposed for inspection)
  GluingResult B1m, B2m, B1p, B2p;
  MaterializedAmalgam MBm, MBp;

  // the non-discrete pushouts used along the way (I1, I2, B and duals)
  std::vector<AmalgamResult> auxiliary_pushouts;
};

ReflectionShapes reflection_chain_shapes(const CatPtr& C, const std::vector<int>& ys,
                                         int bound = 512);

struct SeparateObjectsResult {
  CatPtr cat;             // C~
  FunctorMap p;           // C~ -> C, an equivalence
  std::vector<int> ytilde;  // the fresh objects, pairwise distinct
};

// Adds a fresh object isomorphic to y_i for each i (suffix ~i).
SeparateObjectsResult separate_objects(const CatPtr& C, const std::vector<int>& ys);

}  // namespace reflekt
