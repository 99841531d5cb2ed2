#pragma once

// Association trees over an ordered list of factors, and the sign bookkeeping
// for moving a pure index between bracketings.
//
// Signs attached to a tree are listed by in-order position of the internal
// nodes; for the left comb (((1 2) 3) ... n) that order is exactly the
// canonical sign string s_1 .. s_(n-1). Rebracketing never touches local
// indices, only signs, and the canonical form of a subtree's signs is local:
//   canon(A . B with sign u) = canon(A) ++ [u] ++ [u * t : t in canon(B)].

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bct/rng.hpp"
#include "bct/system.hpp"

namespace bct {

class AssocTree {
 public:
  // Single-leaf tree.
  static AssocTree leaf() {
    AssocTree t;
    t.root_ = encode_leaf(0);
    return t;
  }

  // Tree whose root joins a (on the left) and b (on the right).
  static AssocTree join(const AssocTree& a, const AssocTree& b) {
    AssocTree t;
    t.nodes_ = a.nodes_;
    const auto leaf_shift = static_cast<std::int32_t>(a.leaf_count());
    const auto node_shift = static_cast<std::int32_t>(a.nodes_.size());
    for (const auto& n : b.nodes_)
      t.nodes_.push_back({shift(n.left, leaf_shift, node_shift), shift(n.right, leaf_shift, node_shift)});
    t.nodes_.push_back({a.root_, shift(b.root_, leaf_shift, node_shift)});
    t.root_ = static_cast<std::int32_t>(t.nodes_.size()) - 1;
    return t;
  }

  static AssocTree left_comb(std::size_t n) {
    check_arity(n);
    AssocTree t = leaf();
    for (std::size_t k = 1; k < n; ++k) t = join(t, leaf());
    return t;
  }

  static AssocTree right_comb(std::size_t n) {
    check_arity(n);
    AssocTree t = leaf();
    for (std::size_t k = 1; k < n; ++k) t = join(leaf(), t);
    return t;
  }

  static AssocTree random(std::size_t n, Rng& rng) {
    check_arity(n);
    if (n == 1) return leaf();
    std::size_t cut = 1 + static_cast<std::size_t>(rng.below(n - 1));
    return join(random(cut, rng), random(n - cut, rng));
  }

  std::size_t leaf_count() const { return nodes_.size() + 1; }
  std::size_t sign_count() const { return nodes_.size(); }

  // Signs on this tree (in-order) -> canonical left-nested signs.
  std::vector<Sign> signs_to_canonical(const std::vector<Sign>& tree_signs) const {
    require_sign_count(tree_signs);
    return to_canonical(root_, ranks(), tree_signs);
  }

  // Canonical left-nested signs -> signs on this tree (in-order).
  std::vector<Sign> signs_from_canonical(const std::vector<Sign>& canonical) const {
    require_sign_count(canonical);
    std::vector<Sign> out(sign_count(), Sign::plus);
    from_canonical(root_, ranks(), canonical, out);
    return out;
  }

  std::string to_string() const { return render(root_); }

  friend bool operator==(const AssocTree&, const AssocTree&) = default;

 private:
  struct Node {
    std::int32_t left, right;
    friend bool operator==(const Node&, const Node&) = default;
  };

  static std::int32_t encode_leaf(std::int32_t k) { return -k - 1; }
  static bool is_leaf(std::int32_t c) { return c < 0; }

  static std::int32_t shift(std::int32_t c, std::int32_t leaf_shift, std::int32_t node_shift) {
    return is_leaf(c) ? encode_leaf(-c - 1 + leaf_shift) : c + node_shift;
  }

  static void check_arity(std::size_t n) {
    if (n == 0) throw std::invalid_argument("AssocTree: need at least one leaf");
  }

  void require_sign_count(const std::vector<Sign>& s) const {
    if (s.size() != sign_count())
      throw std::invalid_argument("AssocTree: sign vector length does not match tree");
  }

  // In-order rank of every internal node.
  std::vector<std::size_t> ranks() const {
    std::vector<std::size_t> rank(nodes_.size());
    std::size_t next = 0;
    rank_walk(root_, rank, next);
    return rank;
  }

  void rank_walk(std::int32_t c, std::vector<std::size_t>& rank, std::size_t& next) const {
    if (is_leaf(c)) return;
    rank_walk(nodes_[c].left, rank, next);
    rank[c] = next++;
    rank_walk(nodes_[c].right, rank, next);
  }

  std::size_t leaves_under(std::int32_t c) const {
    if (is_leaf(c)) return 1;
    return leaves_under(nodes_[c].left) + leaves_under(nodes_[c].right);
  }

  std::vector<Sign> to_canonical(std::int32_t c, const std::vector<std::size_t>& rank,
                                 const std::vector<Sign>& tree_signs) const {
    if (is_leaf(c)) return {};
    auto out = to_canonical(nodes_[c].left, rank, tree_signs);
    const Sign u = tree_signs[rank[c]];
    out.push_back(u);
    for (Sign t : to_canonical(nodes_[c].right, rank, tree_signs)) out.push_back(u * t);
    return out;
  }

  void from_canonical(std::int32_t c, const std::vector<std::size_t>& rank,
                      const std::vector<Sign>& local, std::vector<Sign>& out) const {
    if (is_leaf(c)) return;
    const std::size_t left_leaves = leaves_under(nodes_[c].left);
    const Sign u = local[left_leaves - 1];
    out[rank[c]] = u;
    from_canonical(nodes_[c].left, rank,
                   std::vector<Sign>(local.begin(), local.begin() + (left_leaves - 1)), out);
    std::vector<Sign> right_local(local.begin() + left_leaves, local.end());
    for (Sign& t : right_local) t = u * t;
    from_canonical(nodes_[c].right, rank, right_local, out);
  }

  std::string render(std::int32_t c) const {
    if (is_leaf(c)) return std::to_string(-c);  // leaves printed 1-based
    return "(" + render(nodes_[c].left) + " " + render(nodes_[c].right) + ")";
  }

  std::vector<Node> nodes_;
  std::int32_t root_ = encode_leaf(0);
};

// Reinterprets x's signs from one bracketing to another; local indices are
// untouched. Both trees must cover the same number of factors as x.
inline PureIndex reassociate(const PureIndex& x, const AssocTree& from, const AssocTree& to) {
  if (from.leaf_count() != to.leaf_count())
    throw std::invalid_argument("reassociate: trees cover different factor counts");
  if (x.signs.size() != from.sign_count())
    throw std::invalid_argument("reassociate: sign count does not match trees");
  PureIndex out;
  out.locals = x.locals;
  out.signs = to.signs_from_canonical(from.signs_to_canonical(x.signs));
  return out;
}

struct Bipartition {
  PureIndex left, right;
  Sign rel;  // sign of the composition step joining the two blocks
};

// Splits a canonical pure index on n factors into the pure indices of factors
// [0, cut) and [cut, n) plus the relative sign of the cut, per the identity
//   canon = canon(left) ++ [rel] ++ [rel * t : t in canon(right)].
inline Bipartition bipartition(const PureIndex& x, std::size_t cut) {
  const std::size_t n = x.locals.size();
  if (cut < 1 || cut >= n) throw std::out_of_range("bipartition: cut must satisfy 1 <= cut < n");
  if (x.signs.size() + 1 != n) throw std::invalid_argument("bipartition: malformed pure index");
  Bipartition b;
  b.left.locals.assign(x.locals.begin(), x.locals.begin() + cut);
  b.left.signs.assign(x.signs.begin(), x.signs.begin() + (cut - 1));
  b.rel = x.signs[cut - 1];
  b.right.locals.assign(x.locals.begin() + cut, x.locals.end());
  b.right.signs.resize(n - cut - 1);
  for (std::size_t i = 0; i + cut + 1 < n; ++i) b.right.signs[i] = b.rel * x.signs[cut + i];
  return b;
}

// Inverse of bipartition.
inline PureIndex join_pure(const PureIndex& left, const PureIndex& right, Sign rel) {
  if (left.locals.empty() || right.locals.empty())
    throw std::invalid_argument("join_pure: blocks must be non-trivial");
  PureIndex x;
  x.locals = left.locals;
  x.locals.insert(x.locals.end(), right.locals.begin(), right.locals.end());
  x.signs = left.signs;
  x.signs.push_back(rel);
  for (Sign t : right.signs) x.signs.push_back(rel * t);
  return x;
}

}  // namespace bct
