#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace cogsim {

enum class BiasKind : std::size_t {
  LossAversion = 0,
  BaseRateNeglect = 1,
  Confirmation = 2,
  SunkCost = 3,
  Availability = 4,
};

inline constexpr std::size_t kBiasCount = 5;

inline constexpr std::array<BiasKind, kBiasCount> kAllBiases{
    BiasKind::LossAversion, BiasKind::BaseRateNeglect, BiasKind::Confirmation,
    BiasKind::SunkCost, BiasKind::Availability};

constexpr std::size_t index_of(BiasKind b) { return static_cast<std::size_t>(b); }

std::string_view to_string(BiasKind b);
std::optional<BiasKind> bias_from_string(std::string_view name);

// Trigger id letters: B, L, A, C, S.
char bias_letter(BiasKind b);
std::optional<BiasKind> bias_from_letter(char letter);

// Dense per-bias table indexed by BiasKind.
template <typename T>
struct BiasTable {
  std::array<T, kBiasCount> values{};

  T& operator[](BiasKind b) { return values[index_of(b)]; }
  const T& operator[](BiasKind b) const { return values[index_of(b)]; }

  bool operator==(const BiasTable&) const = default;
};

using BiasVector = BiasTable<double>;

}  // namespace cogsim
