#ifndef QMARKOV_LAYOUT_HPP
#define QMARKOV_LAYOUT_HPP

#include <string>
#include <vector>

#include "qmarkov/errors.hpp"

namespace qmarkov {

struct SubSystem {
  std::string label;
  int dim = 1;

  bool operator==(const SubSystem&) const = default;
};

// Ordered list of labeled subsystem dimensions. The composite basis index
// is i = sum_s i_s * stride_s with the LAST listed system fastest-varying,
// so stride_s is the product of the dimensions listed after s.
class SystemLayout {
public:
  SystemLayout() = default;
  explicit SystemLayout(std::vector<SubSystem> systems);

  int total_dim() const { return total_dim_; }
  int count() const { return static_cast<int>(systems_.size()); }
  const std::vector<SubSystem>& systems() const { return systems_; }
  const SubSystem& system(int pos) const { return systems_.at(pos); }
  int stride(int pos) const { return strides_.at(pos); }

  bool has(const std::string& label) const;
  // Position of a label; throws LayoutError if absent.
  int position(const std::string& label) const;
  // Positions of the given labels, validated for existence and uniqueness.
  std::vector<int> positions(const std::vector<std::string>& labels) const;
  // All positions not covered by `labels`, in layout order.
  std::vector<int> complement(const std::vector<std::string>& labels) const;
  // Labels at the given positions.
  std::vector<std::string> labels_at(const std::vector<int>& positions) const;
  std::vector<std::string> labels() const;

  // Sub-layout made of the systems at `positions`, in the given order.
  SystemLayout sub(const std::vector<int>& positions) const;

  // Composite-index arithmetic.
  void decompose(int index, std::vector<int>& digits) const;
  int compose(const std::vector<int>& digits) const;

  bool operator==(const SystemLayout& other) const {
    return systems_ == other.systems_;
  }

private:
  std::vector<SubSystem> systems_;
  std::vector<int> strides_;
  int total_dim_ = 1;
};

// A label based on `base` that does not collide with anything in `layout`.
std::string fresh_label(const SystemLayout& layout, const std::string& base);

}  // namespace qmarkov

#endif
