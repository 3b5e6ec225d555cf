#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reflekt/catcore.hpp"
#include "reflekt/matrix.hpp"

namespace reflekt {

// Representations of finite categories in finite-dimensional vector spaces
// over an exact field F, with limits, colimits and pointwise Kan extensions.
// A representation stores one matrix per morphism (rows = target dimension);
// construction from generator matrices extends along the witness paths and
// checks functoriality, which subsumes the relation check.

template <class F>
struct Rep {
  F field;
  CatPtr base;
  std::vector<int> dim;         // per object
  std::vector<Mat<F>> mat;      // per morphism
};

template <class F>
std::string validate_rep(const Rep<F>& x) {
  const auto& B = *x.base;
  for (size_t m = 0; m < B.mors.size(); ++m) {
    if (x.mat[m].rows != x.dim[B.mors[m].tgt] || x.mat[m].cols != x.dim[B.mors[m].src])
      return "matrix shape mismatch at '" + B.mors[m].name + "'";
  }
  for (size_t o = 0; o < B.objects.size(); ++o)
    if (!mat_eq(x.field, x.mat[B.identity[o]], mat_id(x.field, x.dim[o])))
      return "identity not the identity matrix at '" + B.objects[o] + "'";
  for (size_t f = 0; f < B.mors.size(); ++f)
    for (size_t g = 0; g < B.mors.size(); ++g) {
      int c = B.compose(static_cast<int>(g), static_cast<int>(f));
      if (c < 0) continue;
      if (!mat_eq(x.field, x.mat[c], mat_mul(x.field, x.mat[g], x.mat[f])))
        return "functoriality fails on (" + B.mors[g].name + ", " + B.mors[f].name + ")";
    }
  return "";
}

template <class F>
Rep<F> make_rep(const F& k, const CatPtr& base, const std::vector<int>& dims,
                const std::map<int, Mat<F>>& gen_mats) {
  Rep<F> x;
  x.field = k;
  x.base = base;
  x.dim = dims;
  x.mat.resize(base->mors.size());
  for (size_t m = 0; m < base->mors.size(); ++m) {
    const auto& w = base->witness[m];
    Mat<F> acc = mat_id(k, dims[base->mors[m].src]);
    for (int g : w) {
      auto it = gen_mats.find(g);
      if (it == gen_mats.end())
        throw std::invalid_argument("make_rep: missing matrix for generator '" +
                                    base->mors[g].name + "'");
      acc = mat_mul(k, it->second, acc);
    }
    x.mat[m] = std::move(acc);
  }
  if (auto e = validate_rep(x); !e.empty()) throw std::invalid_argument("make_rep: " + e);
  return x;
}

// the representation constant at the zero space
template <class F>
Rep<F> zero_rep(const F& k, const CatPtr& base) {
  Rep<F> x;
  x.field = k;
  x.base = base;
  x.dim.assign(base->objects.size(), 0);
  for (size_t m = 0; m < base->mors.size(); ++m) x.mat.push_back(Mat<F>(0, 0));
  return x;
}

// representable P_a = F[Hom(a, -)], basis ordered by the hom lists
template <class F>
Rep<F> representable_rep(const F& k, const CatPtr& base, int a) {
  Rep<F> x;
  x.field = k;
  x.base = base;
  x.dim.resize(base->objects.size());
  for (size_t b = 0; b < base->objects.size(); ++b)
    x.dim[b] = static_cast<int>(base->hom(a, static_cast<int>(b)).size());
  x.mat.resize(base->mors.size());
  for (size_t m = 0; m < base->mors.size(); ++m) {
    int bsrc = base->mors[m].src, btgt = base->mors[m].tgt;
    const auto& hs = base->hom(a, bsrc);
    const auto& ht = base->hom(a, btgt);
    Mat<F> mm(static_cast<int>(ht.size()), static_cast<int>(hs.size()));
    for (size_t j = 0; j < hs.size(); ++j) {
      int img = base->compose(static_cast<int>(m), hs[j]);
      for (size_t i = 0; i < ht.size(); ++i)
        if (ht[i] == img) mm.at(static_cast<int>(i), static_cast<int>(j)) = k.one();
    }
    x.mat[m] = std::move(mm);
  }
  return x;
}

// dual of the corepresentable, I_a = F[Hom(-, a)]^*
template <class F>
Rep<F> corepresentable_dual_rep(const F& k, const CatPtr& base, int a) {
  Rep<F> x;
  x.field = k;
  x.base = base;
  x.dim.resize(base->objects.size());
  for (size_t b = 0; b < base->objects.size(); ++b)
    x.dim[b] = static_cast<int>(base->hom(static_cast<int>(b), a).size());
  x.mat.resize(base->mors.size());
  for (size_t m = 0; m < base->mors.size(); ++m) {
    int bsrc = base->mors[m].src, btgt = base->mors[m].tgt;
    const auto& hs = base->hom(bsrc, a);
    const auto& ht = base->hom(btgt, a);
    // transpose of precomposition Hom(btgt, a) -> Hom(bsrc, a)
    Mat<F> mm(static_cast<int>(ht.size()), static_cast<int>(hs.size()));
    for (size_t i = 0; i < ht.size(); ++i) {
      int img = base->compose(ht[i], static_cast<int>(m));
      for (size_t j = 0; j < hs.size(); ++j)
        if (hs[j] == img) mm.at(static_cast<int>(i), static_cast<int>(j)) = k.one();
    }
    x.mat[m] = std::move(mm);
  }
  return x;
}

template <class F>
Rep<F> conjugate_rep(const Rep<F>& x, const std::vector<Mat<F>>& u) {
  Rep<F> y = x;
  std::vector<Mat<F>> uinv(u.size());
  for (size_t o = 0; o < u.size(); ++o) {
    auto inv_o = inverse(x.field, u[o]);
    if (!inv_o) throw std::invalid_argument("conjugate_rep: non-invertible change of basis");
    uinv[o] = *inv_o;
  }
  for (size_t m = 0; m < x.mat.size(); ++m) {
    int a = x.base->mors[m].src, b = x.base->mors[m].tgt;
    y.mat[m] = mat_mul(x.field, u[b], mat_mul(x.field, x.mat[m], uinv[a]));
  }
  return y;
}

template <class F>
Rep<F> direct_sum_rep(const Rep<F>& x, const Rep<F>& y) {
  if (x.base != y.base) throw std::invalid_argument("direct_sum_rep: different bases");
  Rep<F> s;
  s.field = x.field;
  s.base = x.base;
  s.dim.resize(x.dim.size());
  for (size_t o = 0; o < x.dim.size(); ++o) s.dim[o] = x.dim[o] + y.dim[o];
  s.mat.resize(x.mat.size());
  for (size_t m = 0; m < x.mat.size(); ++m) {
    int a = x.base->mors[m].src, b = x.base->mors[m].tgt;
    Mat<F> mm(s.dim[b], s.dim[a]);
    for (int i = 0; i < x.mat[m].rows; ++i)
      for (int j = 0; j < x.mat[m].cols; ++j) mm.at(i, j) = x.mat[m].at(i, j);
    for (int i = 0; i < y.mat[m].rows; ++i)
      for (int j = 0; j < y.mat[m].cols; ++j)
        mm.at(x.dim[b] + i, x.dim[a] + j) = y.mat[m].at(i, j);
    s.mat[m] = std::move(mm);
  }
  return s;
}

template <class F>
Rep<F> restrict_rep(const FunctorMap& u, const Rep<F>& x) {
  if (x.base != u.cod) throw std::invalid_argument("restrict_rep: base mismatch");
  Rep<F> y;
  y.field = x.field;
  y.base = u.dom;
  for (size_t o = 0; o < u.dom->objects.size(); ++o) y.dim.push_back(x.dim[u.ob[o]]);
  for (size_t m = 0; m < u.dom->mors.size(); ++m) y.mat.push_back(x.mat[u.mor[m]]);
  return y;
}

// natural transformations -----------------------------------------------------

template <class F>
struct Nat {
  std::vector<Mat<F>> at;  // per object
};

template <class F>
bool is_natural(const Rep<F>& x, const Rep<F>& y, const Nat<F>& t) {
  if (x.base != y.base) return false;
  const auto& B = *x.base;
  for (size_t o = 0; o < B.objects.size(); ++o)
    if (t.at[o].rows != y.dim[o] || t.at[o].cols != x.dim[o]) return false;
  for (int g : B.generators) {
    int a = B.mors[g].src, b = B.mors[g].tgt;
    if (!mat_eq(x.field, mat_mul(x.field, y.mat[g], t.at[a]),
                mat_mul(x.field, t.at[b], x.mat[g])))
      return false;
  }
  return true;
}

template <class F>
Nat<F> nat_identity(const Rep<F>& x) {
  Nat<F> t;
  for (size_t o = 0; o < x.dim.size(); ++o) t.at.push_back(mat_id(x.field, x.dim[o]));
  return t;
}

template <class F>
Nat<F> nat_compose(const Rep<F>& x, const Nat<F>& g, const Nat<F>& f) {
  Nat<F> t;
  for (size_t o = 0; o < g.at.size(); ++o) t.at.push_back(mat_mul(x.field, g.at[o], f.at[o]));
  return t;
}

template <class F>
bool is_natural_iso(const Rep<F>& x, const Rep<F>& y, const Nat<F>& t) {
  if (!is_natural(x, y, t)) return false;
  for (auto& m : t.at)
    if (!is_invertible(x.field, m)) return false;
  return true;
}

// Basis of Hom(X, Y): solves all naturality constraints exactly.
template <class F>
std::vector<Nat<F>> hom_space(const Rep<F>& x, const Rep<F>& y) {
  if (x.base != y.base) throw std::invalid_argument("hom_space: different bases");
  const F& k = x.field;
  const auto& B = *x.base;
  int nob = static_cast<int>(B.objects.size());
  std::vector<int> offset(nob + 1, 0);
  for (int o = 0; o < nob; ++o) offset[o + 1] = offset[o] + y.dim[o] * x.dim[o];
  int total = offset[nob];

  int rows = 0;
  for (int g : B.generators) rows += y.dim[B.mors[g].tgt] * x.dim[B.mors[g].src];
  Mat<F> sys(rows, total);
  int r0 = 0;
  for (int g : B.generators) {
    int a = B.mors[g].src, b = B.mors[g].tgt;
    // Y(g) t_a - t_b X(g) = 0, entry (i, j) for i < y.dim[b], j < x.dim[a]
    for (int i = 0; i < y.dim[b]; ++i)
      for (int j = 0; j < x.dim[a]; ++j) {
        int row = r0 + i * x.dim[a] + j;
        for (int l = 0; l < y.dim[a]; ++l)
          sys.at(row, offset[a] + l * x.dim[a] + j) =
              k.add(sys.at(row, offset[a] + l * x.dim[a] + j), y.mat[g].at(i, l));
        for (int l = 0; l < x.dim[b]; ++l)
          sys.at(row, offset[b] + i * x.dim[b] + l) =
              k.sub(sys.at(row, offset[b] + i * x.dim[b] + l), x.mat[g].at(l, j));
      }
    r0 += y.dim[b] * x.dim[a];
  }
  Mat<F> ker = kernel_basis(k, sys);
  std::vector<Nat<F>> basis;
  for (int c = 0; c < ker.cols; ++c) {
    Nat<F> t;
    for (int o = 0; o < nob; ++o) {
      Mat<F> m(y.dim[o], x.dim[o]);
      for (int i = 0; i < y.dim[o]; ++i)
        for (int j = 0; j < x.dim[o]; ++j) m.at(i, j) = ker.at(offset[o] + i * x.dim[o] + j, c);
      t.at.push_back(std::move(m));
    }
    basis.push_back(std::move(t));
  }
  return basis;
}

template <class F>
int hom_dim(const Rep<F>& x, const Rep<F>& y) {
  return static_cast<int>(hom_space(x, y).size());
}

// (co)limits -------------------------------------------------------------------

template <class F>
struct Cocone {
  int dim = 0;
  std::vector<Mat<F>> inj;  // per object: dim x X.dim[o]
};

template <class F>
struct Cone {
  int dim = 0;
  std::vector<Mat<F>> proj;  // per object: X.dim[o] x dim
};

// colim X = coker( ⊕_{generators f: a -> b} X_a -> ⊕_o X_o ), xi |-> X(f)xi - xi
template <class F>
Cocone<F> colimit(const Rep<F>& x, bool use_all_morphisms = false) {
  const F& k = x.field;
  const auto& B = *x.base;
  int nob = static_cast<int>(B.objects.size());
  std::vector<int> offset(nob + 1, 0);
  for (int o = 0; o < nob; ++o) offset[o + 1] = offset[o] + x.dim[o];
  int total = offset[nob];
  std::vector<int> gens;
  if (use_all_morphisms) {
    for (size_t m = 0; m < B.mors.size(); ++m)
      if (!B.is_identity(static_cast<int>(m))) gens.push_back(static_cast<int>(m));
  } else {
    gens = B.generators;
  }
  int cols = 0;
  for (int g : gens) cols += x.dim[B.mors[g].src];
  Mat<F> d(total, cols);
  int c0 = 0;
  for (int g : gens) {
    int a = B.mors[g].src, b = B.mors[g].tgt;
    for (int j = 0; j < x.dim[a]; ++j) {
      for (int i = 0; i < x.dim[b]; ++i) d.at(offset[b] + i, c0 + j) = x.mat[g].at(i, j);
      d.at(offset[a] + j, c0 + j) = k.sub(d.at(offset[a] + j, c0 + j), k.one());
    }
    c0 += x.dim[a];
  }
  auto ck = cokernel(k, d);
  Cocone<F> cc;
  cc.dim = ck.dim;
  for (int o = 0; o < nob; ++o) {
    Mat<F> inj(ck.dim, x.dim[o]);
    for (int i = 0; i < ck.dim; ++i)
      for (int j = 0; j < x.dim[o]; ++j) inj.at(i, j) = ck.proj.at(i, offset[o] + j);
    cc.inj.push_back(std::move(inj));
  }
  return cc;
}

// lim X = ker( ⊕_o X_o -> ⊕_{generators f} X_{tgt f} ), (xi_o) |-> X(f)xi_a - xi_b
template <class F>
Cone<F> limit(const Rep<F>& x, bool use_all_morphisms = false) {
  const F& k = x.field;
  const auto& B = *x.base;
  int nob = static_cast<int>(B.objects.size());
  std::vector<int> offset(nob + 1, 0);
  for (int o = 0; o < nob; ++o) offset[o + 1] = offset[o] + x.dim[o];
  int total = offset[nob];
  std::vector<int> gens;
  if (use_all_morphisms) {
    for (size_t m = 0; m < B.mors.size(); ++m)
      if (!B.is_identity(static_cast<int>(m))) gens.push_back(static_cast<int>(m));
  } else {
    gens = B.generators;
  }
  int rows = 0;
  for (int g : gens) rows += x.dim[B.mors[g].tgt];
  Mat<F> l(rows, total);
  int r0 = 0;
  for (int g : gens) {
    int a = B.mors[g].src, b = B.mors[g].tgt;
    for (int i = 0; i < x.dim[b]; ++i) {
      for (int j = 0; j < x.dim[a]; ++j) l.at(r0 + i, offset[a] + j) = x.mat[g].at(i, j);
      l.at(r0 + i, offset[b] + i) = k.sub(l.at(r0 + i, offset[b] + i), k.one());
    }
    r0 += x.dim[b];
  }
  Mat<F> ker = kernel_basis(k, l);
  Cone<F> cn;
  cn.dim = ker.cols;
  for (int o = 0; o < nob; ++o) {
    Mat<F> proj(x.dim[o], ker.cols);
    for (int i = 0; i < x.dim[o]; ++i)
      for (int j = 0; j < ker.cols; ++j) proj.at(i, j) = ker.at(offset[o] + i, j);
    cn.proj.push_back(std::move(proj));
  }
  return cn;
}

// unique mediating map out of the colimit onto a test cocone; throws if the
// linear system is unsolvable or not unique (that would falsify the
// universal-property certificate)
template <class F>
Mat<F> colimit_mediating(const F& k, const Cocone<F>& cc, const std::vector<Mat<F>>& test,
                         int test_dim) {
  // stack: M * inj_o = test_o for all o; transpose to solve inj^T M^T = test^T
  Mat<F> injT(0, cc.dim), testT(0, test_dim);
  for (size_t o = 0; o < cc.inj.size(); ++o) {
    injT = vcat(k, injT, transpose(k, cc.inj[o]));
    testT = vcat(k, testT, transpose(k, test[o]));
  }
  bool unique = false;
  auto sol = solve(k, injT, testT, &unique);
  if (!sol || !unique) throw std::runtime_error("colimit_mediating: universal property violated");
  return transpose(k, *sol);
}

template <class F>
Mat<F> limit_mediating(const F& k, const Cone<F>& cn, const std::vector<Mat<F>>& test,
                       int test_dim) {
  // proj_o * M = test_o: stack rows and solve directly
  Mat<F> projS(0, cn.dim), testS(0, test_dim);
  for (size_t o = 0; o < cn.proj.size(); ++o) {
    projS = vcat(k, projS, cn.proj[o]);
    testS = vcat(k, testS, test[o]);
  }
  bool unique = false;
  auto sol = solve(k, projS, testS, &unique);
  if (!sol || !unique) throw std::runtime_error("limit_mediating: universal property violated");
  return *sol;
}

// Kan extensions ----------------------------------------------------------------

enum class KanSide { Left, Right };

template <class F>
struct KanResult {
  Rep<F> ext;        // u_! X resp. u_* X
  Nat<F> canonical;  // unit X -> u* u_! X resp. counit u* u_* X -> X
};

template <class F>
KanResult<F> kan_extension(const FunctorMap& u, const Rep<F>& x, KanSide side) {
  if (x.base != u.dom) throw std::invalid_argument("kan_extension: base mismatch");
  const F& k = x.field;
  const auto& B = *u.cod;
  KanResult<F> res;
  res.ext.field = k;
  res.ext.base = u.cod;
  res.ext.dim.assign(B.objects.size(), 0);
  res.ext.mat.resize(B.mors.size());

  if (side == KanSide::Left) {
    std::vector<SliceCategory> slices;
    std::vector<Cocone<F>> cones;
    for (size_t b = 0; b < B.objects.size(); ++b) {
      slices.push_back(slice(u, static_cast<int>(b), SliceSide::Under));
      cones.push_back(colimit(restrict_rep(slices.back().projection, x)));
      res.ext.dim[b] = cones.back().dim;
    }
    for (size_t g = 0; g < B.mors.size(); ++g) {
      int b = B.mors[g].src, b2 = B.mors[g].tgt;
      // test cocone at b: object (a, f) |-> inj at (a, g∘f)
      std::vector<Mat<F>> test;
      for (size_t i = 0; i < slices[b].objects.size(); ++i) {
        auto [a, fm] = slices[b].objects[i];
        int gf = B.compose(static_cast<int>(g), fm);
        int j = slices[b2].object_of(a, gf);
        if (j < 0) throw std::logic_error("kan_extension: slice functoriality failure");
        test.push_back(cones[b2].inj[j]);
      }
      // repackage: mediating expects one matrix per slice object
      Cocone<F> cb;
      cb.dim = cones[b].dim;
      for (size_t i = 0; i < slices[b].objects.size(); ++i) cb.inj.push_back(cones[b].inj[i]);
      res.ext.mat[g] = colimit_mediating(k, cb, test, cones[b2].dim);
    }
    if (auto e = validate_rep(res.ext); !e.empty())
      throw std::logic_error("kan_extension(left): " + e);
    // unit at a: the cocone leg at (a, id)
    for (size_t a = 0; a < u.dom->objects.size(); ++a) {
      int ua = u.ob[a];
      int j = slices[ua].object_of(static_cast<int>(a), B.identity[ua]);
      res.canonical.at.push_back(cones[ua].inj[j]);
    }
    return res;
  }

  std::vector<SliceCategory> slices;
  std::vector<Cone<F>> cones;
  for (size_t b = 0; b < B.objects.size(); ++b) {
    slices.push_back(slice(u, static_cast<int>(b), SliceSide::Over));
    cones.push_back(limit(restrict_rep(slices.back().projection, x)));
    res.ext.dim[b] = cones.back().dim;
  }
  for (size_t g = 0; g < B.mors.size(); ++g) {
    int b = B.mors[g].src, b2 = B.mors[g].tgt;
    // R(g): R(b) -> R(b2) with proj_{(a, f)} ∘ R(g) = proj_{(a, f∘g)}
    std::vector<Mat<F>> test;
    for (size_t i = 0; i < slices[b2].objects.size(); ++i) {
      auto [a, fm] = slices[b2].objects[i];
      int fg = B.compose(fm, static_cast<int>(g));
      int j = slices[b].object_of(a, fg);
      if (j < 0) throw std::logic_error("kan_extension: slice functoriality failure");
      Mat<F> projcomp(x.dim[slices[b].projection.ob[j]], cones[b].dim);
      projcomp = cones[b].proj[j];
      test.push_back(std::move(projcomp));
    }
    Cone<F> cb2;
    cb2.dim = cones[b2].dim;
    for (size_t i = 0; i < slices[b2].objects.size(); ++i) cb2.proj.push_back(cones[b2].proj[i]);
    res.ext.mat[g] = limit_mediating(k, cb2, test, cones[b].dim);
  }
  if (auto e = validate_rep(res.ext); !e.empty())
    throw std::logic_error("kan_extension(right): " + e);
  // counit at a: the cone leg at (a, id)
  for (size_t a = 0; a < u.dom->objects.size(); ++a) {
    int ua = u.ob[a];
    int j = slices[ua].object_of(static_cast<int>(a), B.identity[ua]);
    res.canonical.at.push_back(cones[ua].proj[j]);
  }
  return res;
}

// functorial action of u_! / u_* on a morphism t: X -> X'
template <class F>
Nat<F> kan_map(const FunctorMap& u, const Rep<F>& x, const Rep<F>& xp, const Nat<F>& t,
               KanSide side) {
  const F& k = x.field;
  const auto& B = *u.cod;
  Nat<F> out;
  for (size_t b = 0; b < B.objects.size(); ++b) {
    SliceCategory s = slice(u, static_cast<int>(b),
                            side == KanSide::Left ? SliceSide::Under : SliceSide::Over);
    Rep<F> xs = restrict_rep(s.projection, x);
    Rep<F> xps = restrict_rep(s.projection, xp);
    if (side == KanSide::Left) {
      Cocone<F> ca = colimit(xs), cb = colimit(xps);
      std::vector<Mat<F>> test;
      for (size_t i = 0; i < s.objects.size(); ++i)
        test.push_back(mat_mul(k, cb.inj[i], t.at[s.objects[i].first]));
      out.at.push_back(colimit_mediating(k, ca, test, cb.dim));
    } else {
      Cone<F> ca = limit(xs), cb = limit(xps);
      std::vector<Mat<F>> test;
      for (size_t i = 0; i < s.objects.size(); ++i)
        test.push_back(mat_mul(k, t.at[s.objects[i].first], ca.proj[i]));
      out.at.push_back(limit_mediating(k, cb, test, ca.dim));
    }
  }
  return out;
}

// counit u_! u^* Y -> Y (left) resp. unit Y -> u_* u^* Y (right)
template <class F>
Nat<F> kan_counit_unit(const FunctorMap& u, const Rep<F>& y, KanSide side) {
  const F& k = y.field;
  const auto& B = *u.cod;
  Rep<F> uy = restrict_rep(u, y);
  Nat<F> out;
  for (size_t b = 0; b < B.objects.size(); ++b) {
    SliceCategory s = slice(u, static_cast<int>(b),
                            side == KanSide::Left ? SliceSide::Under : SliceSide::Over);
    Rep<F> ys = restrict_rep(s.projection, uy);
    if (side == KanSide::Left) {
      Cocone<F> cc = colimit(ys);
      std::vector<Mat<F>> test;
      for (size_t i = 0; i < s.objects.size(); ++i) test.push_back(y.mat[s.objects[i].second]);
      out.at.push_back(colimit_mediating(k, cc, test, y.dim[b]));
    } else {
      Cone<F> cn = limit(ys);
      std::vector<Mat<F>> test;
      for (size_t i = 0; i < s.objects.size(); ++i) test.push_back(y.mat[s.objects[i].second]);
      out.at.push_back(limit_mediating(k, cn, test, y.dim[b]));
    }
  }
  return out;
}

// Exact verification of the (u_!, u^*) resp. (u^*, u_*) adjunction on a pair
// (X over dom u, Y over cod u): both triangle identities and the hom-space
// dimension equality.
template <class F>
bool verify_kan_adjunction(const FunctorMap& u, const Rep<F>& x, const Rep<F>& y, KanSide side,
                           std::string* why = nullptr) {
  const F& k = x.field;
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (side == KanSide::Left) {
    KanResult<F> L = kan_extension(u, x, KanSide::Left);
    Rep<F> uLX = restrict_rep(u, L.ext);
    if (!is_natural(x, uLX, L.canonical)) return fail("unit not natural");
    // triangle 1: eps_{LX} ∘ u_!(eta) = id
    Nat<F> ueta = kan_map(u, x, uLX, L.canonical, KanSide::Left);
    Nat<F> epsLX = kan_counit_unit(u, L.ext, KanSide::Left);
    for (size_t b = 0; b < u.cod->objects.size(); ++b) {
      Mat<F> comp = mat_mul(k, epsLX.at[b], ueta.at[b]);
      if (!mat_eq(k, comp, mat_id(k, L.ext.dim[b]))) return fail("triangle 1 fails");
    }
    // triangle 2: u^*(eps_Y) ∘ eta_{u^*Y} = id
    Rep<F> uy = restrict_rep(u, y);
    KanResult<F> Luy = kan_extension(u, uy, KanSide::Left);
    Nat<F> epsY = kan_counit_unit(u, y, KanSide::Left);
    for (size_t a = 0; a < u.dom->objects.size(); ++a) {
      Mat<F> comp = mat_mul(k, epsY.at[u.ob[a]], Luy.canonical.at[a]);
      if (!mat_eq(k, comp, mat_id(k, uy.dim[a]))) return fail("triangle 2 fails");
    }
    if (hom_dim(L.ext, y) != hom_dim(x, uy)) return fail("hom dimensions differ");
    return true;
  }
  // right adjoint: (u^*, u_*), unit Y -> u_* u^* Y, counit u^* u_* X -> X
  KanResult<F> R = kan_extension(u, x, KanSide::Right);
  Rep<F> uRX = restrict_rep(u, R.ext);
  if (!is_natural(uRX, x, R.canonical)) return fail("counit not natural");
  // triangle: u_*(eps) ∘ eta_{u_*X} = id
  Nat<F> ueps = kan_map(u, uRX, x, R.canonical, KanSide::Right);
  Nat<F> etaRX = kan_counit_unit(u, R.ext, KanSide::Right);
  for (size_t b = 0; b < u.cod->objects.size(); ++b) {
    Mat<F> comp = mat_mul(k, ueps.at[b], etaRX.at[b]);
    if (!mat_eq(k, comp, mat_id(k, R.ext.dim[b]))) return fail("triangle 1 fails (right)");
  }
  Rep<F> uy = restrict_rep(u, y);
  KanResult<F> Ruy = kan_extension(u, uy, KanSide::Right);
  Nat<F> etaY = kan_counit_unit(u, y, KanSide::Right);
  for (size_t a = 0; a < u.dom->objects.size(); ++a) {
    Mat<F> comp = mat_mul(k, Ruy.canonical.at[a], etaY.at[u.ob[a]]);
    if (!mat_eq(k, comp, mat_id(k, uy.dim[a]))) return fail("triangle 2 fails (right)");
  }
  if (hom_dim(restrict_rep(u, y), x) != hom_dim(y, R.ext)) return fail("hom dimensions differ");
  return true;
}

// shift consistency: representations of a product category as diagrams of
// representations, and back
template <class F>
std::vector<Rep<F>> curry_rep(const ProductCategory& p, const CatPtr& c1, const CatPtr& c2,
                              const Rep<F>& x) {
  // per object a of c2: a representation of c1
  std::vector<Rep<F>> out;
  for (size_t a = 0; a < c2->objects.size(); ++a) {
    Rep<F> r;
    r.field = x.field;
    r.base = c1;
    for (size_t o = 0; o < c1->objects.size(); ++o)
      r.dim.push_back(x.dim[p.object_of(static_cast<int>(o), static_cast<int>(a))]);
    for (size_t m = 0; m < c1->mors.size(); ++m)
      r.mat.push_back(x.mat[p.mor_of(static_cast<int>(m), c2->identity[a])]);
    out.push_back(std::move(r));
  }
  return out;
}

template <class F>
Rep<F> uncurry_rep(const ProductCategory& p, const CatPtr& c1, const CatPtr& c2,
                   const std::vector<Rep<F>>& xs, const std::vector<Nat<F>>& arrows) {
  // arrows: per morphism of c2, a natural transformation between the slices
  Rep<F> x;
  x.field = xs[0].field;
  x.base = p.cat;
  x.dim.resize(p.cat->objects.size());
  for (size_t i = 0; i < p.objects.size(); ++i)
    x.dim[i] = xs[p.objects[i].second].dim[p.objects[i].first];
  x.mat.resize(p.cat->mors.size());
  for (size_t i = 0; i < p.morphisms.size(); ++i) {
    auto [m1, m2] = p.morphisms[i];
    int a2 = c2->mors[m2].src;
    int b1 = c1->mors[m1].tgt;
    // X(m1, m2) = arrows[m2]_{tgt m1} ∘ X_{a2}(m1)
    x.mat[i] = mat_mul(xs[0].field, arrows[m2].at[b1], xs[a2].mat[m1]);
  }
  if (auto e = validate_rep(x); !e.empty()) throw std::invalid_argument("uncurry_rep: " + e);
  return x;
}

}  // namespace reflekt
