#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace noteffect {

using UserId = std::uint32_t;

// Who follows whom. Users are interned to dense ids; lookups for unknown users
// yield an empty followee list.
class FollowEdgeSet {
 public:
  UserId intern(std::string_view name);
  std::optional<UserId> find(std::string_view name) const;
  const std::string& name(UserId id) const { return names_[id]; }
  std::size_t user_count() const { return names_.size(); }
  // Valid after finalize().
  std::size_t edge_count() const { return edge_count_; }

  // Self-follows are ignored. Duplicate edges are collapsed.
  void add_follow(std::string_view follower, std::string_view followee);
  void add_follow(UserId follower, UserId followee);

  std::span<const UserId> followees(UserId user) const;
  std::span<const UserId> followees(std::string_view user) const;

  // Sorts and deduplicates adjacency lists; call once loading is done.
  void finalize();

  bool operator==(const FollowEdgeSet& other) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, UserId> index_;
  std::vector<std::vector<UserId>> follows_;
  std::size_t edge_count_ = 0;
  bool dirty_ = false;
};

}  // namespace noteffect
