/*
 * Copyright 2026 The treeverify Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "treeverify/verifier/search.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <mutex>
#include <thread>

#include "treeverify/core/errors.hpp"

namespace treeverify::verifier::internal {
namespace {

using Clock = std::chrono::steady_clock;
using Int128 = __int128;

thread_local const char* last_scalar_kind = "none";

// Compatible leaf pairs are enumerated only below this product; above it the
// pair bound falls back to max(x side) - min(x' side).
constexpr size_t kPairEnumerationLimit = 4096;

struct Control {
  uint64_t max_nodes = 0;
  Clock::time_point deadline;
  std::atomic<uint64_t> nodes{0};
  std::atomic<uint32_t> max_depth{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::optional<std::vector<SlotRange>> found;
  bool exhausted = false;
  std::string reason;

  void Exhaust(std::string why) {
    std::lock_guard<std::mutex> lock(mu);
    if (!exhausted && !found) {
      exhausted = true;
      reason = std::move(why);
    }
    stop = true;
  }
  void Found(const std::vector<SlotRange>& cell) {
    std::lock_guard<std::mutex> lock(mu);
    if (!found) found = cell;
    stop = true;
  }
};

template <typename W>
W FromInteger(const mpz_class& z);

template <>
int64_t FromInteger<int64_t>(const mpz_class& z) {
  return mpz_get_si(z.get_mpz_t());
}

template <>
Int128 FromInteger<Int128>(const mpz_class& z) {
  mpz_class magnitude = abs(z);
  const uint64_t low = mpz_get_ui(magnitude.get_mpz_t());
  mpz_class high_part = magnitude >> 64;
  const uint64_t high = mpz_get_ui(high_part.get_mpz_t());
  const auto value = static_cast<Int128>((static_cast<unsigned __int128>(high) << 64) | low);
  return z < 0 ? -value : value;
}

template <typename W>
struct Scaled {
  std::vector<std::vector<W>> leaf;  // per participating tree
  W base{};
  W target{};
};

template <typename W>
class Engine {
 public:
  struct TreeState {
    W lo{};
    W hi{};
    bool constant = false;
  };
  struct Frame {
    std::vector<SlotRange> ranges;
    std::vector<TreeState> trees;
    uint32_t depth = 0;
  };
  enum class Step { kPruned, kViolated, kBranched };

  Engine(const SearchProblem& problem, const Scaled<W>& weights, Control& control)
      : p_(problem), w_(weights), control_(control), d_(problem.slots->num_features()) {}

  // Returns false when the ordering constraint leaves no pair.
  bool Propagate(std::vector<SlotRange>& ranges) const {
    if (!p_.pair_mode) return true;
    SlotRange& a = ranges[p_.pair_feature];
    SlotRange& b = ranges[d_];
    if (p_.order_le) {
      a.hi = std::min(a.hi, b.hi);
      b.lo = std::max(b.lo, a.lo);
    } else {
      a.lo = std::max(a.lo, b.lo);
      b.hi = std::min(b.hi, a.hi);
    }
    return !a.Empty() && !b.Empty();
  }

  std::optional<Frame> Root() const {
    Frame root;
    root.ranges = p_.initial;
    if (!Propagate(root.ranges)) return std::nullopt;
    root.trees.resize(p_.trees.size());
    return root;
  }

  Step Process(Frame& frame, std::vector<Frame>* children) {
    children->clear();
    const uint64_t n = control_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
    if (n > control_.max_nodes) {
      control_.Exhaust("node limit of " + std::to_string(control_.max_nodes) + " reached");
      return Step::kPruned;
    }
    if ((n & 255u) == 1 && Clock::now() > control_.deadline) {
      control_.Exhaust("timeout reached");
      return Step::kPruned;
    }
    uint32_t seen = control_.max_depth.load(std::memory_order_relaxed);
    while (frame.depth > seen && !control_.max_depth.compare_exchange_weak(seen, frame.depth)) {
    }

    straddles_.clear();
    W lo = w_.base;
    W hi = w_.base;
    for (size_t k = 0; k < p_.trees.size(); ++k) {
      TreeState& state = frame.trees[k];
      if (!state.constant) {
        const bool feasible = p_.pair_mode ? BoundPair(k, frame.ranges, state) : BoundSum(k, frame.ranges, state);
        if (!feasible) return Step::kPruned;
      }
      lo += state.lo;
      hi += state.hi;
    }
    if (p_.strict ? !(hi > w_.target) : hi < w_.target) return Step::kPruned;
    if (p_.strict ? lo > w_.target : !(lo < w_.target)) return Step::kViolated;
    if (straddles_.empty()) {
      throw Error(ErrorCode::kInternal, "ambiguous bound without a straddling threshold");
    }

    // Most frequent straddling threshold; ties to the lowest dim, then cut.
    std::sort(straddles_.begin(), straddles_.end());
    uint64_t best_key = straddles_[0];
    size_t best_count = 0;
    for (size_t i = 0; i < straddles_.size();) {
      size_t j = i;
      while (j < straddles_.size() && straddles_[j] == straddles_[i]) ++j;
      if (j - i > best_count) {
        best_count = j - i;
        best_key = straddles_[i];
      }
      i = j;
    }
    const auto dim = static_cast<size_t>(best_key >> 32);
    const auto cut = static_cast<int32_t>(best_key & 0xffffffffu);

    Frame left = frame;
    left.depth = frame.depth + 1;
    left.ranges[dim].hi = cut - 1;
    Frame& right = frame;
    right.depth = frame.depth + 1;
    right.ranges[dim].lo = cut;
    if (Propagate(left.ranges)) children->push_back(std::move(left));
    if (Propagate(right.ranges)) children->push_back(std::move(right));
    return Step::kBranched;
  }

 private:
  void NoteStraddle(size_t dim, int32_t cut) {
    straddles_.push_back((static_cast<uint64_t>(dim) << 32) | static_cast<uint32_t>(cut));
  }

  // Collects leaves of tree k reachable from the cell. `moved_dim` replaces
  // the pair feature's dim (pair mode, x' side).
  void Reach(size_t k, const std::vector<SlotRange>& ranges, size_t moved_dim, std::vector<int32_t>* leaves) {
    const SlotTree& tree = p_.slots->trees()[p_.trees[k]];
    leaves->clear();
    stack_.assign(1, 0);
    while (!stack_.empty()) {
      const SlotNode& node = tree.nodes[static_cast<size_t>(stack_.back())];
      stack_.pop_back();
      if (node.feature < 0) {
        leaves->push_back(node.left);
        continue;
      }
      size_t dim = static_cast<size_t>(node.feature);
      if (p_.pair_mode && dim == p_.pair_feature) dim = moved_dim;
      const SlotRange r = ranges[dim];
      if (r.hi < node.cut) {
        stack_.push_back(node.left);
      } else if (r.lo >= node.cut) {
        stack_.push_back(node.right);
      } else {
        NoteStraddle(dim, node.cut);
        stack_.push_back(node.right);
        stack_.push_back(node.left);
      }
    }
  }

  bool BoundSum(size_t k, const std::vector<SlotRange>& ranges, TreeState& state) {
    Reach(k, ranges, 0, &leaves_a_);
    const auto& weights = w_.leaf[k];
    state.lo = weights[static_cast<size_t>(leaves_a_[0])];
    state.hi = state.lo;
    for (size_t i = 1; i < leaves_a_.size(); ++i) {
      const W& v = weights[static_cast<size_t>(leaves_a_[i])];
      if (v < state.lo) state.lo = v;
      if (state.hi < v) state.hi = v;
    }
    state.constant = leaves_a_.size() == 1;
    return true;
  }

  bool BoundPair(size_t k, const std::vector<SlotRange>& ranges, TreeState& state) {
    Reach(k, ranges, p_.pair_feature, &leaves_a_);
    Reach(k, ranges, d_, &leaves_b_);
    const auto& weights = w_.leaf[k];
    state.constant = leaves_a_.size() == 1 && leaves_b_.size() == 1;
    if (leaves_a_.size() * leaves_b_.size() > kPairEnumerationLimit) {
      W a_lo = weights[static_cast<size_t>(leaves_a_[0])], a_hi = a_lo;
      W b_lo = weights[static_cast<size_t>(leaves_b_[0])], b_hi = b_lo;
      for (int32_t l : leaves_a_) {
        const W& v = weights[static_cast<size_t>(l)];
        if (v < a_lo) a_lo = v;
        if (a_hi < v) a_hi = v;
      }
      for (int32_t l : leaves_b_) {
        const W& v = weights[static_cast<size_t>(l)];
        if (v < b_lo) b_lo = v;
        if (b_hi < v) b_hi = v;
      }
      state.lo = a_lo - b_hi;
      state.hi = a_hi - b_lo;
      return true;
    }
    // Only pairs whose leaf regions can hold a shared point (and respect the
    // ordering on the pair feature) count.
    const SlotTree& tree = p_.slots->trees()[p_.trees[k]];
    const size_t j = p_.pair_feature;
    bool any = false;
    for (int32_t la : leaves_a_) {
      const auto& box_a = tree.leaf_box[static_cast<size_t>(la)];
      const int32_t a_lo = std::max(box_a[j].lo, ranges[j].lo);
      const int32_t a_hi = std::min(box_a[j].hi, ranges[j].hi);
      for (int32_t lb : leaves_b_) {
        const auto& box_b = tree.leaf_box[static_cast<size_t>(lb)];
        const int32_t b_lo = std::max(box_b[j].lo, ranges[d_].lo);
        const int32_t b_hi = std::min(box_b[j].hi, ranges[d_].hi);
        if (p_.order_le ? a_lo > b_hi : a_hi < b_lo) continue;
        bool overlap = true;
        for (size_t f = 0; f < d_ && overlap; ++f) {
          if (f == j) continue;
          const int32_t lo = std::max({box_a[f].lo, box_b[f].lo, ranges[f].lo});
          const int32_t hi = std::min({box_a[f].hi, box_b[f].hi, ranges[f].hi});
          overlap = lo <= hi;
        }
        if (!overlap) continue;
        W diff = weights[static_cast<size_t>(la)] - weights[static_cast<size_t>(lb)];
        if (!any) {
          state.lo = diff;
          state.hi = diff;
          any = true;
        } else {
          if (diff < state.lo) state.lo = diff;
          if (state.hi < diff) state.hi = diff;
        }
      }
    }
    return any;
  }

  const SearchProblem& p_;
  const Scaled<W>& w_;
  Control& control_;
  size_t d_;
  std::vector<uint64_t> straddles_;
  std::vector<int32_t> stack_;
  std::vector<int32_t> leaves_a_;
  std::vector<int32_t> leaves_b_;
};

template <typename W>
void RunDepthFirst(Engine<W>& engine, std::vector<typename Engine<W>::Frame> stack, Control& control) {
  using Frame = typename Engine<W>::Frame;
  std::vector<Frame> children;
  while (!stack.empty() && !control.stop.load(std::memory_order_relaxed)) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    switch (engine.Process(frame, &children)) {
      case Engine<W>::Step::kPruned: break;
      case Engine<W>::Step::kViolated: control.Found(frame.ranges); return;
      case Engine<W>::Step::kBranched:
        // Left child on top: depth-first, left-first.
        for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(std::move(*it));
        break;
    }
  }
}

template <typename W>
void Solve(const SearchProblem& problem, const Scaled<W>& weights, const Limits& limits, Control& control) {
  using Frame = typename Engine<W>::Frame;
  Engine<W> engine(problem, weights, control);
  auto root = engine.Root();
  if (!root) return;
  if (limits.workers <= 1) {
    std::vector<Frame> stack;
    stack.push_back(std::move(*root));
    RunDepthFirst(engine, std::move(stack), control);
    return;
  }
  // Breadth-first until there is enough independent work, then one
  // depth-first search per worker.
  std::deque<Frame> frontier;
  frontier.push_back(std::move(*root));
  std::vector<Frame> children;
  const size_t wanted = 8 * static_cast<size_t>(limits.workers);
  while (!frontier.empty() && frontier.size() < wanted && !control.stop) {
    Frame frame = std::move(frontier.front());
    frontier.pop_front();
    switch (engine.Process(frame, &children)) {
      case Engine<W>::Step::kPruned: break;
      case Engine<W>::Step::kViolated: control.Found(frame.ranges); return;
      case Engine<W>::Step::kBranched:
        for (Frame& child : children) frontier.push_back(std::move(child));
        break;
    }
  }
  if (frontier.empty() || control.stop) return;
  std::vector<std::vector<Frame>> shares(limits.workers);
  for (size_t i = 0; i < frontier.size(); ++i) {
    // Reverse so each worker pops its leftmost share first.
    shares[i % limits.workers].insert(shares[i % limits.workers].begin(), std::move(frontier[i]));
  }
  std::vector<std::thread> threads;
  for (unsigned t = 0; t < limits.workers; ++t) {
    threads.emplace_back([&, t] {
      Engine<W> local(problem, weights, control);
      try {
        RunDepthFirst(local, std::move(shares[t]), control);
      } catch (const std::exception& e) {
        control.Exhaust(std::string("worker failed: ") + e.what());
      }
    });
  }
  for (auto& thread : threads) thread.join();
}

}  // namespace

const char* LastScalarKind() { return last_scalar_kind; }

SearchOutcome RunSearch(const SearchProblem& problem, const Limits& limits) {
  const auto start = Clock::now();
  Control control;
  control.max_nodes = limits.max_nodes;
  control.deadline = start + limits.timeout;

  // Participating leaf weights, signed for the objective.
  std::vector<std::vector<Rational>> leaf(problem.trees.size());
  for (size_t k = 0; k < problem.trees.size(); ++k) {
    const Tree& tree = problem.slots->model().trees[problem.trees[k]];
    const SlotTree& st = problem.slots->trees()[problem.trees[k]];
    leaf[k].reserve(st.leaf_node.size());
    for (int32_t node : st.leaf_node) {
      Rational w = tree.node(static_cast<size_t>(node)).weight;
      if (problem.sign < 0) w = -w;
      leaf[k].push_back(std::move(w));
    }
  }
  const Rational base = problem.sign < 0 ? Rational(-problem.base) : problem.base;

  // Common denominator and magnitude of any partial sum.
  mpz_class denominator = 1;
  auto absorb = [&denominator](const Rational& v) {
    mpz_lcm(denominator.get_mpz_t(), denominator.get_mpz_t(), v.get_den_mpz_t());
  };
  absorb(base);
  absorb(problem.target);
  for (const auto& weights : leaf) {
    for (const auto& w : weights) absorb(w);
  }
  Rational magnitude = abs(base) + abs(problem.target);
  for (const auto& weights : leaf) {
    Rational largest = 0;
    for (const auto& w : weights) largest = std::max(largest, Rational(abs(w)));
    magnitude += problem.pair_mode ? Rational(2 * largest) : largest;
  }
  const mpz_class scaled_magnitude = mpz_class(magnitude.get_num() * denominator / magnitude.get_den()) + 1;
  const size_t bits = mpz_sizeinbase(scaled_magnitude.get_mpz_t(), 2);

  auto scale = [&](auto tag) {
    using W = decltype(tag);
    Scaled<W> out;
    auto convert = [&](const Rational& v) {
      return FromInteger<W>(mpz_class(v.get_num() * (denominator / v.get_den())));
    };
    out.base = convert(base);
    out.target = convert(problem.target);
    out.leaf.resize(leaf.size());
    for (size_t k = 0; k < leaf.size(); ++k) {
      out.leaf[k].reserve(leaf[k].size());
      for (const auto& w : leaf[k]) out.leaf[k].push_back(convert(w));
    }
    return out;
  };

  if (bits < 62) {
    last_scalar_kind = "int64";
    Solve(problem, scale(int64_t{}), limits, control);
  } else if (bits < 125) {
    last_scalar_kind = "int128";
    Solve(problem, scale(Int128{}), limits, control);
  } else {
    last_scalar_kind = "rational";
    Scaled<Rational> exact;
    exact.base = base;
    exact.target = problem.target;
    exact.leaf = std::move(leaf);
    Solve(problem, exact, limits, control);
  }

  SearchOutcome outcome;
  outcome.stats.nodes_explored = std::min<uint64_t>(control.nodes.load(), limits.max_nodes);
  outcome.stats.max_depth = control.max_depth.load();
  outcome.stats.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start);
  if (control.found) {
    outcome.violating_cell = std::move(control.found);
  } else if (control.exhausted) {
    outcome.exhausted = true;
    outcome.exhausted_reason = control.reason;
  }
  return outcome;
}

}  // namespace treeverify::verifier::internal
