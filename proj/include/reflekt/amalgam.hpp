#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reflekt/catcore.hpp"

namespace reflekt {

// Pushouts of small categories along inclusions, with the reduction order on
// allowable sequences and normal forms when the apex is discrete.

struct Span {
  CatPtr W, X, Y;
  FunctorMap fX, fY;  // W -> X, W -> Y
};

enum class AmalgamKind { NormalFormComplete, BoundedSearch };

// Entry of an allowable sequence; leg 0 = X, 1 = Y. Entries shared through W
// are canonicalized to the X tag.
struct TaggedMor {
  int leg = 0;
  int mor = -1;
  bool operator==(const TaggedMor& o) const { return leg == o.leg && mor == o.mor; }
  bool operator<(const TaggedMor& o) const { return leg != o.leg ? leg < o.leg : mor < o.mor; }
};

// Allowable sequence in diagrammatic order (first applied first); an empty
// entry list is the identity at src. src/tgt index the pushout's objects.
struct Word {
  int src = -1, tgt = -1;
  std::vector<TaggedMor> entries;
  bool operator==(const Word& o) const { return src == o.src && tgt == o.tgt && entries == o.entries; }
  bool operator<(const Word& o) const {
    if (src != o.src) return src < o.src;
    if (tgt != o.tgt) return tgt < o.tgt;
    return entries < o.entries;
  }
};

struct AmalgamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PushoutOptions {
  // Con 5.1 gluings repeat objects in the leg maps; the normal-form calculus
  // is unaffected for discrete W, so the strict injectivity requirement can be
  // waived in that case only.
  bool allow_repeats_on_discrete = false;
};

class AmalgamResult {
 public:
  Span span;
  AmalgamKind kind = AmalgamKind::NormalFormComplete;

  std::vector<std::string> z_objects;
  std::vector<int> zob_of_x, zob_of_y;

  // Only populated for BoundedSearch (non-discrete W).
  std::optional<PresentedCategory> presentation;
  std::vector<int> arrow_of_x, arrow_of_y;  // leg morphism -> presentation arrow (-1 for identities)

  bool w_discrete() const { return kind == AmalgamKind::NormalFormComplete; }

  Word identity_word(int z_obj) const { return Word{z_obj, z_obj, {}}; }
  Word word_of_leg(int leg, int mor) const;
  // canonicalize entries (W-shared morphisms to the X tag), drop identities
  Word make_word(int src, const std::vector<TaggedMor>& entries) const;

  // Elementary reductions: every one-step reduct of w (all positions, all leg
  // lifts). Used to exhaust reduction DAGs in tests.
  std::vector<Word> reductions(const Word& w) const;
  // Elementary expansions: inverse reductions, splitting one entry into a
  // same-leg composable pair.
  std::vector<Word> expansions(const Word& w) const;

  // Leftmost-first reduction to a normal form; order-independent when W is
  // discrete.
  Word reduce(const Word& w) const;
  Word compose(const Word& g, const Word& f) const;  // g∘f = reduce(f ++ g)

  int z_src_of(const TaggedMor& e) const;
  int z_tgt_of(const TaggedMor& e) const;

  // leg morphism shared through W? (twin in the other leg)
  int x_twin_of_y(int ymor) const { return x_twin_of_y_[ymor]; }
  int y_twin_of_x(int xmor) const { return y_twin_of_x_[xmor]; }

  friend AmalgamResult pushout(const Span& s, const PushoutOptions& opt);

 private:
  std::vector<int> x_twin_of_y_, y_twin_of_x_;
  std::optional<int> lift_to_leg(const TaggedMor& e, int leg) const;
};

AmalgamResult pushout(const Span& s, const PushoutOptions& opt = {});

Word reduce_word(const AmalgamResult& z, const Word& w);

enum class EqualVerdict { Equal, Distinct, Unknown };

struct EqualResult {
  EqualVerdict verdict;
  int depth_used = 0;
};

// Normal-form comparison when W is discrete (never Unknown); bidirectional
// search through reductions and expansions otherwise, words capped at `depth`
// entries.
EqualResult decide_equal(const AmalgamResult& z, const Word& w1, const Word& w2, int depth);

struct MaterializedAmalgam {
  CatPtr Z;
  FunctorMap gX, gY;
  std::vector<Word> words;  // per Z morphism, normal form

  int z_mor_of(const Word& normal_form) const;
};

struct MaterializeOutcome {
  std::optional<MaterializedAmalgam> amalgam;
  std::optional<NonFiniteReport> non_finite;
};

// Enumerates Z within the hom-set bound. For discrete W this is the
// normal-form calculus; otherwise the presentation is saturated.
MaterializeOutcome materialize(const AmalgamResult& z, int bound);

struct AmalgamationReport {
  bool materialized = false;
  std::optional<NonFiniteReport> non_finite;
  bool gx_injective_on_objects = false, gy_injective_on_objects = false;
  bool gx_faithful = false, gy_faithful = false;
  bool gx_3for2 = false, gy_3for2 = false;
  // Conditional fully-faithfulness transfer: when fX is fully faithful (and
  // fY faithful with 3-for-2), gY must be fully faithful; symmetrically.
  bool a9_applicable_to_gy = false, gy_fully_faithful = false;
  bool a9_applicable_to_gx = false, gx_fully_faithful = false;
  std::string detail;

  bool ok() const {
    if (!materialized) return false;
    bool base = gx_injective_on_objects && gy_injective_on_objects && gx_faithful && gy_faithful &&
                gx_3for2 && gy_3for2;
    if (a9_applicable_to_gy) base = base && gy_fully_faithful;
    if (a9_applicable_to_gx) base = base && gx_fully_faithful;
    return base;
  }
};

AmalgamationReport verify_amalgamation(const AmalgamResult& z, int bound);

}  // namespace reflekt
