#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrapnc/errors.hpp"

namespace qrapnc {

// What kind of breakpoint an entry represents. Initial entries come from a
// single variable's box; multiplier entries stand for a whole group of
// variables frozen at an earlier prefix multiplier.
enum class BreakpointTag : std::uint8_t {
  initial_lower,     // l_i / a_i
  initial_upper,     // u_i / a_i
  multiplier_lower,  // kappa of some earlier prefix
  multiplier_upper,  // lambda of some earlier prefix
};

// Double-ended priority queue over breakpoint values with stable ids.
// Backed by twin binary heaps sharing one entry table; removals are lazy
// (dead ids are skipped when they surface at a top). Ids are never reused
// within a pool's lifetime. Ties order by (value, id).
class DepqPool {
 public:
  using EntryId = std::uint32_t;

  struct EntryRef {
    EntryId id;
    double value;
    BreakpointTag tag;
    std::uint32_t owner;  // prefix length the entry belongs to
  };

  EntryId insert(double value, BreakpointTag tag, std::uint32_t owner) {
    ++ops_;
    const EntryId id = static_cast<EntryId>(nodes_.size());
    nodes_.push_back({value, owner, tag, true});
    min_heap_.push_back(id);
    sift_up(min_heap_, min_heap_.size() - 1, true);
    max_heap_.push_back(id);
    sift_up(max_heap_, max_heap_.size() - 1, false);
    ++live_;
    return id;
  }

  std::optional<EntryRef> peek_min() {
    ++ops_;
    purge(min_heap_, true);
    if (min_heap_.empty()) return std::nullopt;
    return ref(min_heap_.front());
  }

  std::optional<EntryRef> peek_max() {
    ++ops_;
    purge(max_heap_, false);
    if (max_heap_.empty()) return std::nullopt;
    return ref(max_heap_.front());
  }

  std::optional<EntryRef> pop_min() { return pop(min_heap_, true); }
  std::optional<EntryRef> pop_max() { return pop(max_heap_, false); }

  void remove(EntryId id) {
    ++ops_;
    if (id >= nodes_.size() || !nodes_[id].alive)
      throw InternalError("remove of unknown or dead entry " + std::to_string(id));
    nodes_[id].alive = false;
    --live_;
  }

  // Hand an entry over to a later prefix without touching the heaps.
  void retag(EntryId id, std::uint32_t owner) {
    ++ops_;
    if (id >= nodes_.size() || !nodes_[id].alive)
      throw InternalError("retag of unknown or dead entry " + std::to_string(id));
    nodes_[id].owner = owner;
  }

  EntryRef get(EntryId id) const {
    if (id >= nodes_.size() || !nodes_[id].alive)
      throw InternalError("get of unknown or dead entry " + std::to_string(id));
    return ref(id);
  }

  std::size_t size() const { return live_; }
  bool empty() const { return live_ == 0; }

  void reserve(std::size_t n) {
    nodes_.reserve(n);
    min_heap_.reserve(n);
    max_heap_.reserve(n);
  }

  std::uint64_t compare_count() const { return compares_; }
  std::uint64_t op_count() const { return ops_; }

 private:
  struct Node {
    double value;
    std::uint32_t owner;
    BreakpointTag tag;
    bool alive;
  };

  EntryRef ref(EntryId id) const {
    const Node& n = nodes_[id];
    return {id, n.value, n.tag, n.owner};
  }

  bool value_less(EntryId a, EntryId b) {
    ++compares_;
    if (nodes_[a].value != nodes_[b].value) return nodes_[a].value < nodes_[b].value;
    return a < b;
  }

  bool heap_less(EntryId a, EntryId b, bool min_heap) {
    return min_heap ? value_less(a, b) : value_less(b, a);
  }

  void sift_up(std::vector<EntryId>& h, std::size_t i, bool min_heap) {
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!heap_less(h[i], h[parent], min_heap)) break;
      std::swap(h[i], h[parent]);
      i = parent;
    }
  }

  void sift_down(std::vector<EntryId>& h, std::size_t i, bool min_heap) {
    const std::size_t n = h.size();
    while (true) {
      const std::size_t l = 2 * i + 1;
      const std::size_t r = l + 1;
      std::size_t best = i;
      if (l < n && heap_less(h[l], h[best], min_heap)) best = l;
      if (r < n && heap_less(h[r], h[best], min_heap)) best = r;
      if (best == i) break;
      std::swap(h[i], h[best]);
      i = best;
    }
  }

  void drop_top(std::vector<EntryId>& h, bool min_heap) {
    h.front() = h.back();
    h.pop_back();
    if (!h.empty()) sift_down(h, 0, min_heap);
  }

  void purge(std::vector<EntryId>& h, bool min_heap) {
    while (!h.empty() && !nodes_[h.front()].alive) drop_top(h, min_heap);
  }

  std::optional<EntryRef> pop(std::vector<EntryId>& h, bool min_heap) {
    ++ops_;
    purge(h, min_heap);
    if (h.empty()) return std::nullopt;
    const EntryId id = h.front();
    const EntryRef out = ref(id);
    nodes_[id].alive = false;  // twin heap's copy dies lazily
    --live_;
    drop_top(h, min_heap);
    return out;
  }

  std::vector<Node> nodes_;
  std::vector<EntryId> min_heap_, max_heap_;
  std::size_t live_ = 0;
  std::uint64_t compares_ = 0;
  std::uint64_t ops_ = 0;
};

}  // namespace qrapnc
