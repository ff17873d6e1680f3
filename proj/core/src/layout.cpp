#include "qmarkov/layout.hpp"

#include <algorithm>
#include <set>

namespace qmarkov {

SystemLayout::SystemLayout(std::vector<SubSystem> systems)
    : systems_(std::move(systems)) {
  std::set<std::string> seen;
  long long total = 1;
  for (const auto& s : systems_) {
    if (s.label.empty()) throw LayoutError("empty subsystem label");
    if (s.dim < 1) throw LayoutError("subsystem '" + s.label + "' has dim < 1");
    if (!seen.insert(s.label).second)
      throw LayoutError("duplicate subsystem label '" + s.label + "'");
    total *= s.dim;
    if (total > (1 << 24)) throw LayoutError("total dimension too large");
  }
  total_dim_ = static_cast<int>(total);
  strides_.assign(systems_.size(), 1);
  for (int i = static_cast<int>(systems_.size()) - 2; i >= 0; --i)
    strides_[i] = strides_[i + 1] * systems_[i + 1].dim;
}

bool SystemLayout::has(const std::string& label) const {
  return std::any_of(systems_.begin(), systems_.end(),
                     [&](const SubSystem& s) { return s.label == label; });
}

int SystemLayout::position(const std::string& label) const {
  for (int i = 0; i < count(); ++i)
    if (systems_[i].label == label) return i;
  throw LayoutError("unknown subsystem label '" + label + "'");
}

std::vector<int> SystemLayout::positions(
    const std::vector<std::string>& labels) const {
  std::vector<int> out;
  out.reserve(labels.size());
  std::set<int> seen;
  for (const auto& l : labels) {
    int p = position(l);
    if (!seen.insert(p).second)
      throw LayoutError("label '" + l + "' listed twice");
    out.push_back(p);
  }
  return out;
}

std::vector<int> SystemLayout::complement(
    const std::vector<std::string>& labels) const {
  auto pos = positions(labels);
  std::set<int> inside(pos.begin(), pos.end());
  std::vector<int> out;
  for (int i = 0; i < count(); ++i)
    if (!inside.count(i)) out.push_back(i);
  return out;
}

std::vector<std::string> SystemLayout::labels_at(
    const std::vector<int>& positions) const {
  std::vector<std::string> out;
  out.reserve(positions.size());
  for (int p : positions) out.push_back(system(p).label);
  return out;
}

std::vector<std::string> SystemLayout::labels() const {
  std::vector<std::string> out;
  out.reserve(systems_.size());
  for (const auto& s : systems_) out.push_back(s.label);
  return out;
}

SystemLayout SystemLayout::sub(const std::vector<int>& positions) const {
  std::vector<SubSystem> subs;
  subs.reserve(positions.size());
  for (int p : positions) subs.push_back(system(p));
  return SystemLayout(std::move(subs));
}

void SystemLayout::decompose(int index, std::vector<int>& digits) const {
  digits.resize(systems_.size());
  for (size_t s = 0; s < systems_.size(); ++s) {
    digits[s] = index / strides_[s];
    index -= digits[s] * strides_[s];
  }
}

int SystemLayout::compose(const std::vector<int>& digits) const {
  int index = 0;
  for (size_t s = 0; s < systems_.size(); ++s) index += digits[s] * strides_[s];
  return index;
}

std::string fresh_label(const SystemLayout& layout, const std::string& base) {
  std::string candidate = base;
  while (layout.has(candidate)) candidate += "_";
  return candidate;
}

}  // namespace qmarkov
