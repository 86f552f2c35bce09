#ifndef MOST_NAMES_HPP
#define MOST_NAMES_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace most {

// Interned channel name. Nonnegative ids index into the session NameTable;
// negative ids are canonical bound names produced by alpha-canonicalization.
struct Chan {
  int32_t id = 0;
  friend bool operator==(Chan a, Chan b) { return a.id == b.id; }
  friend bool operator!=(Chan a, Chan b) { return a.id != b.id; }
  friend bool operator<(Chan a, Chan b) { return a.id < b.id; }
};

// Interned choice/case label.
struct Lab {
  int32_t id = 0;
  friend bool operator==(Lab a, Lab b) { return a.id == b.id; }
  friend bool operator!=(Lab a, Lab b) { return a.id != b.id; }
  friend bool operator<(Lab a, Lab b) { return a.id < b.id; }
};

// Per-session name allocator. Channel ids are drawn from a monotone counter,
// so distinct binders never collide even when their display names do.
class NameTable {
 public:
  Chan fresh_chan(std::string_view display) {
    chan_display_.emplace_back(display);
    return Chan{static_cast<int32_t>(chan_display_.size() - 1)};
  }

  Lab label(std::string_view text) {
    auto it = label_ids_.find(std::string(text));
    if (it != label_ids_.end()) return Lab{it->second};
    label_text_.emplace_back(text);
    int32_t id = static_cast<int32_t>(label_text_.size() - 1);
    label_ids_.emplace(label_text_.back(), id);
    return Lab{id};
  }

  std::string chan_display(Chan c) const {
    if (c.id < 0) return "%" + std::to_string(-c.id - 1);
    return chan_display_[static_cast<size_t>(c.id)];
  }

  const std::string& label_text(Lab l) const {
    return label_text_[static_cast<size_t>(l.id)];
  }

  size_t chan_count() const { return chan_display_.size(); }

 private:
  std::vector<std::string> chan_display_;
  std::vector<std::string> label_text_;
  std::unordered_map<std::string, int32_t> label_ids_;
};

struct Pos {
  int line = 0;
  int col = 0;
};

}  // namespace most

template <>
struct std::hash<most::Chan> {
  size_t operator()(most::Chan c) const noexcept {
    return std::hash<int32_t>{}(c.id);
  }
};
template <>
struct std::hash<most::Lab> {
  size_t operator()(most::Lab l) const noexcept {
    return std::hash<int32_t>{}(l.id);
  }
};

#endif
