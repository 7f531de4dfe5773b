#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hippo {

// Bijective token <-> id map with ids dense in [0, size()). The capacity
// sigma is fixed at construction; exceeding it is a CapacityError.
class Vocabulary {
  public:
    explicit Vocabulary(std::uint32_t capacity);

    std::optional<std::uint32_t> find(std::string_view token) const;

    // Existing id, or a freshly allocated one. Throws CapacityError when the
    // vocabulary is full.
    std::uint32_t get_or_add(std::string_view token);

    const std::string& surface(std::uint32_t id) const;

    std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(surfaces_.size()); }
    std::uint32_t capacity() const noexcept { return capacity_; }

    // Bits per symbol needed to encode any id below sigma.
    static std::uint32_t symbol_width(std::uint32_t sigma);

  private:
    std::uint32_t capacity_;
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::vector<std::string> surfaces_;
};

}  // namespace hippo
