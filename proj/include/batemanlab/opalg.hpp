#pragma once

// Noncommutative polynomial algebra over the generator tags, with normal
// ordering driven by a table of central commutators.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "batemanlab/errors.hpp"
#include "batemanlab/generator.hpp"

namespace batemanlab {

/// Identifies the generator set a polynomial lives in. `free_algebra`
/// polynomials (scalars, mostly) combine with anything.
enum class AlgebraId {
  free_algebra,
  phase_space,     // x1, x2, p1, p2
  bateman,         // x, y, px, py
  boson,           // a1, a2, a1d, a2d
  extended_boson,  // a1, a2, b1, b2 (overdamped)
  pseudo,          // A1, A2, B1, B2
  universal,       // every tag; used by the randomized property checks
};

inline std::string_view algebra_name(AlgebraId id) {
  switch (id) {
    case AlgebraId::free_algebra: return "free";
    case AlgebraId::phase_space: return "phase_space";
    case AlgebraId::bateman: return "bateman";
    case AlgebraId::boson: return "boson";
    case AlgebraId::extended_boson: return "extended_boson";
    case AlgebraId::pseudo: return "pseudo";
    case AlgebraId::universal: return "universal";
  }
  return "?";
}

inline AlgebraId unify_algebras(AlgebraId a, AlgebraId b) {
  if (a == AlgebraId::free_algebra) return b;
  if (b == AlgebraId::free_algebra || a == b) return a;
  throw AlgebraMismatch("cannot combine polynomials over '" + std::string(algebra_name(a)) +
                        "' and '" + std::string(algebra_name(b)) + "'");
}

using Word = std::vector<Tag>;

inline constexpr double drop_tolerance = 1e-14;
inline constexpr double equality_tolerance = 1e-12;

template <class Scalar>
class Polynomial {
 public:
  using scalar_type = Scalar;
  using real_type = typename Scalar::value_type;
  using term_map = std::map<Word, Scalar>;

  Polynomial() = default;
  explicit Polynomial(AlgebraId id) : algebra_(id) {}

  static Polynomial identity(Scalar c = Scalar(1), AlgebraId id = AlgebraId::free_algebra) {
    Polynomial p(id);
    p.add_term({}, c);
    return p;
  }

  static Polynomial generator(Tag t, AlgebraId id, Scalar c = Scalar(1)) {
    Polynomial p(id);
    p.add_term({t}, c);
    return p;
  }

  static Polynomial monomial(Word w, Scalar c, AlgebraId id) {
    Polynomial p(id);
    p.add_term(std::move(w), c);
    return p;
  }

  AlgebraId algebra() const noexcept { return algebra_; }
  void set_algebra(AlgebraId id) noexcept { algebra_ = id; }

  const term_map& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  /// Adds c·word, merging with an existing term; drops the result if it
  /// falls below the drop tolerance.
  void add_term(Word w, Scalar c, real_type drop = real_type(drop_tolerance)) {
    auto [it, inserted] = terms_.try_emplace(std::move(w), c);
    if (!inserted) it->second += c;
    if (std::abs(it->second) < drop) terms_.erase(it);
  }

  Scalar coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void prune(real_type tol = real_type(drop_tolerance)) {
    std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) < tol; });
  }

  Polynomial& operator+=(const Polynomial& o) {
    algebra_ = unify_algebras(algebra_, o.algebra_);
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    algebra_ = unify_algebras(algebra_, o.algebra_);
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }

  Polynomial& operator*=(Scalar s) {
    for (auto& [w, c] : terms_) c *= s;
    prune();
    return *this;
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& [w, c] : r.terms_) c = -c;
    return r;
  }

 private:
  AlgebraId algebra_ = AlgebraId::free_algebra;
  term_map terms_;
};

using OperatorPolynomial = Polynomial<std::complex<double>>;

template <class S>
Polynomial<S> operator+(Polynomial<S> p, const Polynomial<S>& q) {
  p += q;
  return p;
}

template <class S>
Polynomial<S> operator-(Polynomial<S> p, const Polynomial<S>& q) {
  p -= q;
  return p;
}

template <class S>
Polynomial<S> operator*(Polynomial<S> p, S s) {
  p *= s;
  return p;
}

template <class S>
Polynomial<S> operator*(S s, Polynomial<S> p) {
  p *= s;
  return p;
}

template <class S>
Polynomial<S> operator*(Polynomial<S> p, typename S::value_type s) {
  p *= S(s);
  return p;
}

template <class S>
Polynomial<S> operator*(typename S::value_type s, Polynomial<S> p) {
  p *= S(s);
  return p;
}

/// Distributive concatenation of words; no reordering.
template <class S>
Polynomial<S> multiply(const Polynomial<S>& p, const Polynomial<S>& q) {
  Polynomial<S> r(unify_algebras(p.algebra(), q.algebra()));
  for (const auto& [wp, cp] : p.terms()) {
    for (const auto& [wq, cq] : q.terms()) {
      Word w;
      w.reserve(wp.size() + wq.size());
      w.insert(w.end(), wp.begin(), wp.end());
      w.insert(w.end(), wq.begin(), wq.end());
      r.add_term(std::move(w), cp * cq);
    }
  }
  return r;
}

template <class S>
Polynomial<S> operator*(const Polynomial<S>& p, const Polynomial<S>& q) {
  return multiply(p, q);
}

template <class S>
Polynomial<S> power(const Polynomial<S>& p, int n) {
  auto r = Polynomial<S>::identity(S(1), p.algebra());
  for (int i = 0; i < n; ++i) r = multiply(r, p);
  return r;
}

/// Conjugates coefficients, reverses words and swaps every tag for its partner.
template <class S>
Polynomial<S> adjoint(const Polynomial<S>& p) {
  Polynomial<S> r(p.algebra());
  for (const auto& [w, c] : p.terms()) {
    Word rw(w.rbegin(), w.rend());
    for (auto& t : rw) t = adjoint(t);
    r.add_term(std::move(rw), std::conj(c));
  }
  return r;
}

template <class S>
typename S::value_type max_abs_coefficient(const Polynomial<S>& p) {
  typename S::value_type m = 0;
  for (const auto& [w, c] : p.terms()) m = std::max(m, std::abs(c));
  return m;
}

/// Central commutation rules g·h = h·g + c·𝟙 over a declared generator set.
template <class Scalar>
class CommutationTable {
 public:
  CommutationTable(AlgebraId id, TagSet generators) : id_(id), generators_(generators) {
    for (auto& row : rules_) row.fill(Scalar(0));
  }

  AlgebraId id() const noexcept { return id_; }
  const TagSet& generators() const noexcept { return generators_; }
  bool contains(Tag t) const { return generators_.test(index(t)); }

  /// Declares [g,h] = c, and with it [h,g] = −c.
  CommutationTable& add_rule(Tag g, Tag h, Scalar c) {
    if (!contains(g) || !contains(h)) {
      throw AlgebraMismatch("rule between generators outside the table: " + std::string(name(g)) +
                            ", " + std::string(name(h)));
    }
    if (g == h) throw AlgebraMismatch("a generator commutes with itself");
    rules_[index(g)][index(h)] = c;
    rules_[index(h)][index(g)] = -c;
    return *this;
  }

  Scalar bracket(Tag g, Tag h) const { return rules_[index(g)][index(h)]; }

  /// rule(h†, g†) = conj(rule(g, h)) wherever both partners are declared.
  bool is_star_consistent(typename Scalar::value_type tol = 0) const {
    for (std::size_t i = 0; i < tag_count; ++i) {
      for (std::size_t j = 0; j < tag_count; ++j) {
        const Tag g = static_cast<Tag>(i), h = static_cast<Tag>(j);
        if (!contains(g) || !contains(h) || !contains(adjoint(g)) || !contains(adjoint(h))) continue;
        if (std::abs(bracket(adjoint(h), adjoint(g)) - std::conj(bracket(g, h))) > tol) return false;
      }
    }
    return true;
  }

  void require_covers(const Polynomial<Scalar>& p) const {
    if (p.algebra() != AlgebraId::free_algebra && p.algebra() != id_) {
      throw AlgebraMismatch("polynomial over '" + std::string(algebra_name(p.algebra())) +
                            "' used with table '" + std::string(algebra_name(id_)) + "'");
    }
    for (const auto& [w, c] : p.terms()) {
      for (Tag t : w) {
        if (!contains(t)) {
          throw AlgebraMismatch("generator " + std::string(name(t)) + " is not part of table '" +
                                std::string(algebra_name(id_)) + "'");
        }
      }
    }
  }

 private:
  AlgebraId id_;
  TagSet generators_;
  std::array<std::array<Scalar, tag_count>, tag_count> rules_;
};

template <class S>
bool is_normal_ordered(const Polynomial<S>& p) {
  for (const auto& [w, c] : p.terms()) {
    for (std::size_t i = 1; i < w.size(); ++i) {
      if (order_rank(w[i - 1]) > order_rank(w[i])) return false;
    }
  }
  return true;
}

namespace detail {

struct LongerWordsFirst {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  }
};

}  // namespace detail

/// Sorts every word by the normal-form order, emitting the central
/// contraction terms required by the table at each adjacent swap.
template <class S>
Polynomial<S> normal_order(const Polynomial<S>& p, const CommutationTable<S>& table) {
  table.require_covers(p);
  using real_type = typename S::value_type;
  std::map<Word, S, detail::LongerWordsFirst> pending(p.terms().begin(), p.terms().end());
  Polynomial<S> result(table.id());

  while (!pending.empty()) {
    auto node = pending.extract(pending.begin());
    Word w = std::move(node.key());
    const S c = node.mapped();
    if (std::abs(c) < real_type(drop_tolerance)) continue;

    std::size_t i = 1;
    while (i < w.size() && order_rank(w[i - 1]) <= order_rank(w[i])) ++i;
    if (i >= w.size()) {
      result.add_term(std::move(w), c);
      continue;
    }
    const S r = table.bracket(w[i - 1], w[i]);
    if (r != S(0)) {
      Word contracted;
      contracted.reserve(w.size() - 2);
      contracted.insert(contracted.end(), w.begin(), w.begin() + static_cast<long>(i) - 1);
      contracted.insert(contracted.end(), w.begin() + static_cast<long>(i) + 1, w.end());
      pending[std::move(contracted)] += c * r;
    }
    std::swap(w[i - 1], w[i]);
    pending[std::move(w)] += c;
  }
  return result;
}

template <class S>
Polynomial<S> commutator(const Polynomial<S>& p, const Polynomial<S>& q,
                         const CommutationTable<S>& table) {
  return normal_order(multiply(p, q) - multiply(q, p), table);
}

/// Largest coefficient of the normal form of p − q.
template <class S>
typename S::value_type residual(const Polynomial<S>& p, const Polynomial<S>& q,
                                const CommutationTable<S>& table) {
  return max_abs_coefficient(normal_order(p - q, table));
}

template <class S>
bool approx_equal(const Polynomial<S>& p, const Polynomial<S>& q, const CommutationTable<S>& table,
                  typename S::value_type tol = equality_tolerance) {
  return residual(p, q, table) <= tol;
}

/// Homomorphic replacement of generators by polynomials of another algebra.
template <class Scalar>
class Substitution {
 public:
  Substitution(AlgebraId source, AlgebraId target) : source_(source), target_(target) {}

  AlgebraId source() const noexcept { return source_; }
  AlgebraId target() const noexcept { return target_; }

  Substitution& set(Tag t, Polynomial<Scalar> image) {
    image.set_algebra(unify_algebras(image.algebra(), target_));
    images_[index(t)] = std::move(image);
    return *this;
  }

  /// Fills every unset adjoint partner with the adjoint of its image.
  Substitution& complete_adjoints() {
    for (std::size_t i = 0; i < tag_count; ++i) {
      const Tag t = static_cast<Tag>(i);
      if (images_[i] && !images_[index(adjoint(t))]) images_[index(adjoint(t))] = adjoint(*images_[i]);
    }
    return *this;
  }

  bool defines(Tag t) const { return images_[index(t)].has_value(); }

  const Polynomial<Scalar>& image(Tag t) const {
    if (!defines(t)) {
      throw SubstitutionIncomplete("substitution has no image for generator " + std::string(name(t)));
    }
    return *images_[index(t)];
  }

  /// image(t†) equals image(t)† for every declared pair.
  bool is_adjoint_consistent(const CommutationTable<Scalar>& target_table,
                             typename Scalar::value_type tol = equality_tolerance) const {
    for (std::size_t i = 0; i < tag_count; ++i) {
      const Tag t = static_cast<Tag>(i);
      if (!defines(t) || !defines(adjoint(t))) continue;
      if (residual(image(adjoint(t)), adjoint(image(t)), target_table) > tol) return false;
    }
    return true;
  }

 private:
  AlgebraId source_;
  AlgebraId target_;
  std::array<std::optional<Polynomial<Scalar>>, tag_count> images_;
};

template <class S>
Polynomial<S> substitute(const Polynomial<S>& p, const Substitution<S>& s,
                         const CommutationTable<S>& target_table) {
  if (p.algebra() != AlgebraId::free_algebra && p.algebra() != s.source()) {
    throw AlgebraMismatch("substitution expects '" + std::string(algebra_name(s.source())) +
                          "' input, got '" + std::string(algebra_name(p.algebra())) + "'");
  }
  if (target_table.id() != s.target()) {
    throw AlgebraMismatch("substitution targets '" + std::string(algebra_name(s.target())) +
                          "' but the table is '" + std::string(algebra_name(target_table.id())) + "'");
  }
  Polynomial<S> acc(s.target());
  for (const auto& [w, c] : p.terms()) {
    auto term = Polynomial<S>::identity(c, s.target());
    for (Tag t : w) term = normal_order(multiply(term, s.image(t)), target_table);
    acc += term;
  }
  return normal_order(acc, target_table);
}

/// Drops every monomial whose word ends in one of `annihilators`: the action
/// of p on a formal vacuum they annihilate.
template <class S>
Polynomial<S> reduce_mod_right_ideal(const Polynomial<S>& p, const TagSet& annihilators,
                                     const CommutationTable<S>& table) {
  table.require_covers(p);
  int max_other = -1, min_annihilator = static_cast<int>(tag_count);
  for (std::size_t i = 0; i < tag_count; ++i) {
    const Tag t = static_cast<Tag>(i);
    if (!table.contains(t)) continue;
    if (annihilators.test(i)) {
      min_annihilator = std::min(min_annihilator, order_rank(t));
    } else {
      max_other = std::max(max_other, order_rank(t));
    }
  }
  if (max_other > min_annihilator) {
    throw OrderViolation("the table's order does not put the annihilator tags rightmost");
  }
  if (!is_normal_ordered(p)) throw OrderViolation("polynomial is not in normal form");

  Polynomial<S> r(table.id());
  for (const auto& [w, c] : p.terms()) {
    if (!w.empty() && annihilators.test(index(w.back()))) continue;
    r.add_term(w, c);
  }
  return r;
}

template <class S>
std::ostream& operator<<(std::ostream& os, const Polynomial<S>& p) {
  if (p.empty()) return os << "0";
  bool first = true;
  for (const auto& [w, c] : p.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    if (w.empty()) os << " 1";
    for (Tag t : w) os << " " << name(t);
  }
  return os;
}

template <class S>
std::string to_string(const Polynomial<S>& p) {
  std::ostringstream os;
  os << p;
  return os.str();
}

// ---------------------------------------------------------------------------
// Standard tables.

template <class S = std::complex<double>>
CommutationTable<S> phase_space_table() {
  CommutationTable<S> t(AlgebraId::phase_space, make_tag_set({Tag::x1, Tag::x2, Tag::p1, Tag::p2}));
  t.add_rule(Tag::x1, Tag::p1, S(0, 1)).add_rule(Tag::x2, Tag::p2, S(0, 1));
  return t;
}

template <class S = std::complex<double>>
CommutationTable<S> bateman_table() {
  CommutationTable<S> t(AlgebraId::bateman, make_tag_set({Tag::x, Tag::y, Tag::px, Tag::py}));
  t.add_rule(Tag::x, Tag::px, S(0, 1)).add_rule(Tag::y, Tag::py, S(0, 1));
  return t;
}

/// [a_j, a_k†] = δ_jk.
template <class S = std::complex<double>>
CommutationTable<S> boson_table() {
  CommutationTable<S> t(AlgebraId::boson, make_tag_set({Tag::a1, Tag::a2, Tag::a1d, Tag::a2d}));
  t.add_rule(Tag::a1, Tag::a1d, S(1)).add_rule(Tag::a2, Tag::a2d, S(1));
  return t;
}

/// [a_j, b_k] = δ_jk.
template <class S = std::complex<double>>
CommutationTable<S> extended_boson_table() {
  CommutationTable<S> t(AlgebraId::extended_boson, make_tag_set({Tag::a1, Tag::a2, Tag::b1, Tag::b2}));
  t.add_rule(Tag::a1, Tag::b1, S(1)).add_rule(Tag::a2, Tag::b2, S(1));
  return t;
}

/// [A_j, B_k] = δ_jk.
template <class S = std::complex<double>>
CommutationTable<S> pseudo_table() {
  CommutationTable<S> t(AlgebraId::pseudo, make_tag_set({Tag::A1, Tag::A2, Tag::B1, Tag::B2}));
  t.add_rule(Tag::A1, Tag::B1, S(1)).add_rule(Tag::A2, Tag::B2, S(1));
  return t;
}

/// Every tag, with the union of the family relations closed under adjoints.
template <class S = std::complex<double>>
CommutationTable<S> universal_table() {
  TagSet all;
  all.set();
  CommutationTable<S> t(AlgebraId::universal, all);
  const S i(0, 1), one(1);
  t.add_rule(Tag::x1, Tag::p1, i).add_rule(Tag::x2, Tag::p2, i);
  t.add_rule(Tag::x, Tag::px, i).add_rule(Tag::y, Tag::py, i);
  t.add_rule(Tag::a1, Tag::a1d, one).add_rule(Tag::a2, Tag::a2d, one);
  t.add_rule(Tag::a1, Tag::b1, one).add_rule(Tag::a2, Tag::b2, one);
  t.add_rule(Tag::b1d, Tag::a1d, one).add_rule(Tag::b2d, Tag::a2d, one);
  t.add_rule(Tag::A1, Tag::B1, one).add_rule(Tag::A2, Tag::B2, one);
  t.add_rule(Tag::B1d, Tag::A1d, one).add_rule(Tag::B2d, Tag::A2d, one);
  return t;
}

}  // namespace batemanlab
