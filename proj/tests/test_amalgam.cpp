#include <doctest.h>

#include <set>

#include "reflekt/amalgam.hpp"
#include "reflekt/glue.hpp"

using namespace reflekt;

namespace {

// span gluing the target of X's arrow to the source of Y's arrow
Span end_to_start_span() {
  Span s;
  s.W = discrete_category({"w"});
  s.X = chain_category(2);
  s.Y = chain_category(2);
  s.fX.name = "fX";
  s.fX.dom = s.W;
  s.fX.cod = s.X;
  s.fX.ob = {1};
  s.fX.mor = {s.X->identity[1]};
  s.fY.name = "fY";
  s.fY.dom = s.W;
  s.fY.cod = s.Y;
  s.fY.ob = {0};
  s.fY.mor = {s.Y->identity[0]};
  return s;
}

Span parallel_pair_span() {
  Span s;
  s.W = discrete_category({"w0", "w1"});
  s.X = chain_category(2);
  s.Y = chain_category(2);
  s.fX.name = "fX";
  s.fX.dom = s.W;
  s.fX.cod = s.X;
  s.fX.ob = {0, 1};
  s.fX.mor = {s.X->identity[0], s.X->identity[1]};
  s.fY = s.fX;
  s.fY.cod = s.Y;
  return s;
}

}  // namespace

TEST_CASE("has_3for2 on fully faithful and discrete-domain functors") {
  auto two = chain_category(3);
  auto sub = full_subcategory(two, {0, 1});
  CHECK(has_3for2(sub.inclusion));

  auto disc = discrete_category({"a", "b"});
  FunctorMap f;
  f.name = "pts";
  f.dom = disc;
  f.cod = two;
  f.ob = {0, 2};
  f.mor = {two->identity[0], two->identity[2]};
  CHECK(has_3for2(f));
}

TEST_CASE("has_3for2 fails when only a composite and one factor are hit") {
  // codomain [2] with image {alpha: 0->1, beta.alpha: 0->2} but not beta
  auto two_arrows = coproduct_category(chain_category(2), chain_category(2));
  auto chain3 = chain_category(3);
  FunctorMap f;
  f.name = "span";
  f.dom = two_arrows.cat;
  f.cod = chain3;
  f.ob.assign(4, -1);
  f.ob[two_arrows.inj1.ob[0]] = 0;
  f.ob[two_arrows.inj1.ob[1]] = 1;
  f.ob[two_arrows.inj2.ob[0]] = 0;
  f.ob[two_arrows.inj2.ob[1]] = 2;
  f.mor.assign(two_arrows.cat->mors.size(), -1);
  for (size_t m = 0; m < two_arrows.cat->mors.size(); ++m) {
    auto& mor = two_arrows.cat->mors[m];
    if (two_arrows.cat->is_identity(static_cast<int>(m)))
      f.mor[m] = chain3->identity[f.ob[mor.src]];
    else
      f.mor[m] = chain3->hom(f.ob[mor.src], f.ob[mor.tgt])[0];
  }
  REQUIRE(check_functor(f).ok);
  CHECK_FALSE(has_3for2(f));
}

TEST_CASE("end-to-start pushout of two arrows is the poset [2]") {
  auto z = pushout(end_to_start_span());
  CHECK(z.kind == AmalgamKind::NormalFormComplete);
  CHECK(z.z_objects.size() == 3);
  auto out = materialize(z, 16);
  REQUIRE(out.amalgam);
  CHECK(out.amalgam->Z->mors.size() == 6);
  CHECK(find_isomorphism(out.amalgam->Z, chain_category(3)).has_value());
}

TEST_CASE("gluing both endpoints pairwise gives two parallel arrows") {
  auto z = pushout(parallel_pair_span());
  auto out = materialize(z, 16);
  REQUIRE(out.amalgam);
  CHECK(out.amalgam->Z->objects.size() == 2);
  CHECK(out.amalgam->Z->mors.size() == 4);

  // the two arrows have distinct normal forms
  Word wx = z.reduce(z.word_of_leg(0, 1));  // non-identity morphism of X
  Word wy = z.reduce(z.word_of_leg(1, 1));
  int xm = -1, ym = -1;
  for (size_t m = 0; m < out.amalgam->Z->mors.size(); ++m) {
    if (out.amalgam->words[m] == wx) xm = static_cast<int>(m);
    if (out.amalgam->words[m] == wy) ym = static_cast<int>(m);
  }
  int x_nonid = chain_category(2)->mor_index("0->1");
  REQUIRE(x_nonid >= 0);
  CHECK(xm >= 0);
  CHECK(ym >= 0);
  CHECK(xm != ym);
  CHECK(decide_equal(z, wx, wy, 6).verdict == EqualVerdict::Distinct);
}

TEST_CASE("attaching a source of valence 1 to the point gives [1]") {
  auto cone = attach_cone(terminal_category(), {0}, ConeDirection::Source);
  CHECK(cone.cat->objects.size() == 2);
  CHECK(cone.cat->mors.size() == 3);
  CHECK(find_isomorphism(cone.cat, chain_category(2)).has_value());
}

TEST_CASE("reduce_word: singletons, identities, order-independence") {
  auto z = pushout(parallel_pair_span());
  Word w = z.word_of_leg(0, 1);
  CHECK(z.reduce(w) == w);

  // (id, alpha, id) reduces to (alpha): identities are eliminated eagerly
  Word padded = z.make_word(w.src, {TaggedMor{0, chain_category(2)->identity[0]},
                                    TaggedMor{0, 1}, TaggedMor{0, chain_category(2)->identity[1]}});
  CHECK(padded == w);

  // exhaust the reduction DAG of a longer word in the end-to-start pushout
  auto z2 = pushout(end_to_start_span());
  Word comp = z2.make_word(z2.zob_of_x[0], {TaggedMor{0, 1}, TaggedMor{1, 1}});
  std::set<Word> normals;
  std::vector<Word> stack{comp};
  std::set<Word> seen;
  while (!stack.empty()) {
    Word cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    auto reds = z2.reductions(cur);
    if (reds.empty()) normals.insert(cur);
    for (auto& r : reds) stack.push_back(r);
  }
  CHECK(normals.size() == 1);
}

TEST_CASE("decide_equal through a fully faithful leg") {
  // W = [1] included in X = [2] as the long edge and in Y = [1] as the arrow
  Span s;
  s.W = chain_category(2);
  s.X = chain_category(3);
  s.Y = chain_category(2);
  s.fX.name = "fX";
  s.fX.dom = s.W;
  s.fX.cod = s.X;
  s.fX.ob = {0, 2};
  for (size_t m = 0; m < s.W->mors.size(); ++m) {
    if (s.W->is_identity(static_cast<int>(m)))
      s.fX.mor.push_back(s.X->identity[s.fX.ob[s.W->mors[m].src]]);
    else
      s.fX.mor.push_back(s.X->mor_index("0->2"));
  }
  s.fY = identity_functor(s.Y);
  s.fY.name = "fY";
  s.fY.dom = s.W;

  auto z = pushout(s);
  CHECK(z.kind == AmalgamKind::BoundedSearch);
  // the Y arrow equals the X long edge through W
  Word wy = z.word_of_leg(1, s.Y->mor_index("0->1"));
  Word wx = z.word_of_leg(0, s.X->mor_index("0->2"));
  CHECK(z.reduce(wy) == z.reduce(wx));  // canonicalized through the twin
  // and equals the composite of the two short X edges after a reduction chain
  Word wcomp = z.make_word(wy.src, {TaggedMor{0, s.X->mor_index("0->1")},
                                    TaggedMor{0, s.X->mor_index("1->2")}});
  auto res = decide_equal(z, wy, wcomp, 6);
  CHECK(res.verdict == EqualVerdict::Equal);

  auto out = materialize(z, 16);
  REQUIRE(out.amalgam);
  CHECK(out.amalgam->Z->mors.size() == 6);  // still the poset [2]
}

TEST_CASE("verify_amalgamation on identity spans and cones") {
  auto c = chain_category(3);
  Span s;
  s.W = s.X = s.Y = c;
  s.fX = s.fY = identity_functor(c);
  auto z = pushout(s);
  auto rep = verify_amalgamation(z, 32);
  CHECK(rep.ok());
  auto out = materialize(z, 32);
  REQUIRE(out.amalgam);
  CHECK(find_isomorphism(out.amalgam->Z, c).has_value());

  // inclusion C -> C^+ is fully faithful (transfer of full faithfulness)
  auto disc = discrete_category({"p1", "p2"});
  auto cone = attach_cone(disc, {0, 1}, ConeDirection::Sink);
  auto p = functor_predicates(cone.inclusion);
  CHECK(p.fully_faithful);
  auto vrep = verify_amalgamation(cone.glue.push, 32);
  CHECK(vrep.materialized);
  CHECK(vrep.gx_faithful);
  CHECK(vrep.gy_faithful);
  CHECK(vrep.gx_3for2);
  CHECK(vrep.gy_3for2);
}

TEST_CASE("pushout rejects bad spans by naming the failing leg") {
  Span s;
  s.W = chain_category(2);
  s.X = chain_category(2);
  s.Y = chain_category(2);
  s.fX = identity_functor(s.X);
  s.fX.dom = s.W;
  s.fY.name = "collapse";
  s.fY.dom = s.W;
  s.fY.cod = s.Y;
  s.fY.ob = {0, 0};
  s.fY.mor = {s.Y->identity[0], s.Y->identity[0], s.Y->identity[0]};
  CHECK_THROWS_WITH_AS(pushout(s), doctest::Contains("W -> Y"), AmalgamError);
}
