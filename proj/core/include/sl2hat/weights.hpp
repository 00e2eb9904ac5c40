#pragma once

// Integral weights of the affine algebra A1^(1).
//
// A weight n*L0 + (x/2)*a1 + d*delta is stored as three integers
// (level n, alpha1 index x, delta depth d). Storing twice the a1 coefficient
// keeps every coordinate integral; the only non-integral quantity is the
// bilinear form, which lives in (1/2)Z and is returned as a HalfInteger.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace sl2hat {

/// Exact element of (1/2)Z.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;
  static constexpr HalfInteger from_twice(std::int64_t twice) {
    HalfInteger h;
    h.twice_ = twice;
    return h;
  }
  static constexpr HalfInteger from_int(std::int64_t v) { return from_twice(2 * v); }

  constexpr std::int64_t twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr double to_double() const { return static_cast<double>(twice_) / 2.0; }

  friend constexpr bool operator==(HalfInteger, HalfInteger) = default;
  friend constexpr auto operator<=>(HalfInteger, HalfInteger) = default;

 private:
  std::int64_t twice_ = 0;
};

struct Weight {
  std::int64_t level = 0;         // coefficient n of L0, equals (delta, w)
  std::int64_t alpha1_index = 0;  // x, the a1 coefficient is x/2
  std::int64_t delta_depth = 0;   // coefficient d of delta

  friend constexpr bool operator==(const Weight&, const Weight&) = default;
  friend constexpr auto operator<=>(const Weight&, const Weight&) = default;

  constexpr Weight& operator+=(const Weight& o) {
    level += o.level;
    alpha1_index += o.alpha1_index;
    delta_depth += o.delta_depth;
    return *this;
  }
  constexpr Weight& operator-=(const Weight& o) {
    level -= o.level;
    alpha1_index -= o.alpha1_index;
    delta_depth -= o.delta_depth;
    return *this;
  }
  friend constexpr Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend constexpr Weight operator-(Weight a, const Weight& b) { return a -= b; }
  friend constexpr Weight operator*(std::int64_t k, const Weight& w) {
    return {k * w.level, k * w.alpha1_index, k * w.delta_depth};
  }
  constexpr Weight operator-() const { return {-level, -alpha1_index, -delta_depth}; }
};

inline constexpr Weight kLambda0{1, 0, 0};
inline constexpr Weight kAlpha1{0, 2, 0};
inline constexpr Weight kDelta{0, 0, 1};
inline constexpr Weight kAlpha0{0, -2, 1};  // delta - a1
/// rho = 2 L0 + a1/2.
inline constexpr Weight kRho{2, 1, 0};

enum class SimpleRoot : int { alpha0 = 0, alpha1 = 1 };

/// Symmetric bilinear form: (L0,L0)=0, (L0,a1)=0, (L0,delta)=1, (a1,a1)=2,
/// (delta,a1)=0, (delta,delta)=0.
constexpr HalfInteger pairing(const Weight& v, const Weight& w) {
  return HalfInteger::from_twice(2 * v.level * w.delta_depth + 2 * v.delta_depth * w.level +
                                 v.alpha1_index * w.alpha1_index);
}

constexpr std::int64_t level_of(const Weight& w) { return w.level; }

constexpr bool is_dominant(const Weight& w) {
  return 0 <= w.alpha1_index && w.alpha1_index <= w.level;
}

/// Translation t_k: w + k n a1 - (k x + k^2 n) delta.
constexpr Weight weyl_translate(std::int64_t k, const Weight& w) {
  return {w.level, w.alpha1_index + 2 * k * w.level,
          w.delta_depth - k * w.alpha1_index - k * k * w.level};
}

constexpr Weight weyl_reflect(SimpleRoot root, const Weight& w) {
  if (root == SimpleRoot::alpha1) return {w.level, -w.alpha1_index, w.delta_depth};
  return {w.level, 2 * w.level - w.alpha1_index, w.delta_depth - w.level + w.alpha1_index};
}

/// Integer-indexed overload; throws std::invalid_argument unless index is 0 or 1.
Weight weyl_reflect(int index, const Weight& w);

/// Drops the delta component.
constexpr Weight project_bar(const Weight& w) { return {w.level, w.alpha1_index, 0}; }

/// "n*L0 + (x/2)*a1 + d*delta"
std::string to_string(const Weight& w);

/// Inverse of to_string. Whitespace is ignored; throws std::invalid_argument.
Weight parse_weight(std::string_view text);

}  // namespace sl2hat

template <>
struct std::hash<sl2hat::Weight> {
  std::size_t operator()(const sl2hat::Weight& w) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(w.level) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<std::uint64_t>(w.alpha1_index) + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(w.delta_depth) + 0x94d049bb133111ebULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};
