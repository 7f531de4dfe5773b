#include "hippo/vocabulary.hpp"

#include <bit>
#include <stdexcept>

#include "hippo/errors.hpp"

namespace hippo {

Vocabulary::Vocabulary(std::uint32_t capacity) : capacity_(capacity) {
    if (capacity < 2) throw std::invalid_argument("vocabulary capacity must be at least 2");
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view token) const {
    auto it = ids_.find(std::string(token));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::uint32_t Vocabulary::get_or_add(std::string_view token) {
    auto it = ids_.find(std::string(token));
    if (it != ids_.end()) return it->second;
    if (surfaces_.size() >= capacity_) {
        throw CapacityError("vocabulary full: sigma = " + std::to_string(capacity_));
    }
    const auto id = static_cast<std::uint32_t>(surfaces_.size());
    surfaces_.emplace_back(token);
    ids_.emplace(surfaces_.back(), id);
    return id;
}

const std::string& Vocabulary::surface(std::uint32_t id) const {
    if (id >= surfaces_.size()) throw std::out_of_range("vocabulary: unknown token id");
    return surfaces_[id];
}

std::uint32_t Vocabulary::symbol_width(std::uint32_t sigma) {
    return std::bit_width(std::uint64_t{sigma} - 1);
}

}  // namespace hippo
