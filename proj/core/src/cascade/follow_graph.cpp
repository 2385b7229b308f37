#include "noteffect/cascade/follow_graph.hpp"

#include <algorithm>

namespace noteffect {

UserId FollowEdgeSet::intern(std::string_view name) {
  auto it = index_.find(std::string(name));
  if (it != index_.end()) return it->second;
  const auto id = static_cast<UserId>(names_.size());
  names_.emplace_back(name);
  index_.emplace(names_.back(), id);
  follows_.emplace_back();
  return id;
}

std::optional<UserId> FollowEdgeSet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void FollowEdgeSet::add_follow(std::string_view follower, std::string_view followee) {
  const UserId a = intern(follower);
  const UserId b = intern(followee);
  add_follow(a, b);
}

void FollowEdgeSet::add_follow(UserId follower, UserId followee) {
  if (follower == followee) return;
  follows_[follower].push_back(followee);
  dirty_ = true;
}

void FollowEdgeSet::finalize() {
  if (!dirty_) return;
  edge_count_ = 0;
  for (auto& list : follows_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    edge_count_ += list.size();
  }
  dirty_ = false;
}

std::span<const UserId> FollowEdgeSet::followees(UserId user) const {
  if (user >= follows_.size()) return {};
  return follows_[user];
}

std::span<const UserId> FollowEdgeSet::followees(std::string_view user) const {
  const auto id = find(user);
  if (!id) return {};
  return followees(*id);
}

bool FollowEdgeSet::operator==(const FollowEdgeSet& other) const {
  if (names_.size() != other.names_.size()) return false;
  for (UserId u = 0; u < names_.size(); ++u) {
    const auto o = other.find(names_[u]);
    if (!o) return false;
    std::vector<std::string_view> a, b;
    for (UserId v : follows_[u]) a.push_back(names_[v]);
    for (UserId v : other.follows_[*o]) b.push_back(other.names_[v]);
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    if (a != b) return false;
  }
  return true;
}

}  // namespace noteffect
