#include "eon/spectrum.hpp"

#include <algorithm>
#include <string>

namespace eon {

int SlotBlock::overlap_width(const SlotBlock& other) const {
  return std::max(0, std::min(end(), other.end()) - std::max(start, other.start));
}

SlotGrid::SlotGrid(int slot_count) : owner_(slot_count, -1), forbidden_(slot_count, false) {
  if (slot_count <= 0) throw SpectrumError("slot grid needs at least one slot");
}

SlotState SlotGrid::state(int slot) const {
  if (owner_.at(slot) >= 0) return SlotState::used;
  return forbidden_[slot] ? SlotState::forbidden : SlotState::free;
}

std::optional<LightpathId> SlotGrid::owner(int slot) const {
  const LightpathId id = owner_.at(slot);
  if (id < 0) return std::nullopt;
  return id;
}

void SlotGrid::check_block(const SlotBlock& block) const {
  if (block.width < 1 || block.start < 0 || block.end() > slot_count())
    throw SpectrumError("slot block [" + std::to_string(block.start) + ", " +
                        std::to_string(block.end()) + ") outside grid");
}

void SlotGrid::occupy(const SlotBlock& block, LightpathId id) {
  check_block(block);
  if (id < 0) throw SpectrumError("negative lightpath id");
  for (int s = block.start; s < block.end(); ++s) {
    if (owner_[s] >= 0)
      throw SpectrumError("slot " + std::to_string(s) + " already used by lightpath " +
                          std::to_string(owner_[s]));
    if (forbidden_[s]) throw SpectrumError("slot " + std::to_string(s) + " is forbidden");
  }
  std::fill(owner_.begin() + block.start, owner_.begin() + block.end(), id);
  used_ += block.width;
}

int SlotGrid::vacate(LightpathId id) {
  int freed = 0;
  for (auto& o : owner_) {
    if (o == id) {
      o = -1;
      ++freed;
    }
  }
  used_ -= freed;
  return freed;
}

void SlotGrid::forbid(const SlotBlock& block) {
  check_block(block);
  std::fill(forbidden_.begin() + block.start, forbidden_.begin() + block.end(), true);
}

int SlotGrid::forbidden_count() const {
  int n = 0;
  for (int s = 0; s < slot_count(); ++s) n += (forbidden_[s] && owner_[s] < 0) ? 1 : 0;
  return n;
}

double utilization(const SlotGrid& grid) {
  return static_cast<double>(grid.used_count()) / grid.slot_count();
}

std::optional<SlotBlock> first_fit(std::span<const SlotGrid* const> grids, int width,
                                   bool forbidden_aware, int min_start, int guardband) {
  if (width < 1) throw SpectrumError("first_fit: width must be positive");
  if (grids.empty()) throw SpectrumError("first_fit: empty route");
  const int n = grids.front()->slot_count();
  for (const SlotGrid* g : grids)
    if (g->slot_count() != n) throw SpectrumError("first_fit: grids differ in slot count");

  std::vector<char> blocked(n, 0);
  for (const SlotGrid* g : grids)
    for (int s = 0; s < n; ++s)
      if (g->is_used(s) || (forbidden_aware && g->is_flagged_forbidden(s))) blocked[s] = 1;

  // A start is feasible iff no blocked slot lies in [start - g, start + width + g)
  // clipped to the grid. Track the last blocked index seen while sweeping.
  int last_blocked = -1;
  int scanned = 0;
  const auto advance_to = [&](int limit) {
    for (; scanned < limit; ++scanned)
      if (blocked[scanned]) last_blocked = scanned;
  };
  for (int start = std::max(0, min_start); start + width <= n; ++start) {
    const int hi = std::min(n, start + width + guardband);
    advance_to(hi);
    const int lo = std::max(0, start - guardband);
    if (last_blocked < lo) return SlotBlock{start, width};
    // Jump past the blocking slot.
    start = std::max(start, last_blocked + guardband + 1) - 1;
  }
  return std::nullopt;
}

void allocate(std::span<SlotGrid* const> grids, const SlotBlock& block, LightpathId id) {
  for (SlotGrid* g : grids)
    for (int s = block.start; s < block.end(); ++s)
      if (g->state(s) != SlotState::free || g->is_flagged_forbidden(s))
        throw SpectrumError("allocate: slot " + std::to_string(s) + " is not free");
  for (SlotGrid* g : grids) g->occupy(block, id);
}

void release(std::span<SlotGrid* const> grids, LightpathId id) {
  for (SlotGrid* g : grids)
    if (g->vacate(id) == 0)
      throw SpectrumError("release: lightpath " + std::to_string(id) + " not on grid");
}

SlotUsageIntegrator::SlotUsageIntegrator(int slot_count)
    : busy_(slot_count, 0.0), since_(slot_count, -1.0) {}

void SlotUsageIntegrator::on_occupy(const SlotBlock& block, double now) {
  for (int s = block.start; s < block.end(); ++s) since_[s] = now;
}

void SlotUsageIntegrator::on_vacate(const SlotBlock& block, double now) {
  for (int s = block.start; s < block.end(); ++s) {
    if (since_[s] >= 0.0) busy_[s] += now - since_[s];
    since_[s] = -1.0;
  }
}

std::vector<double> SlotUsageIntegrator::time_average(double horizon) const {
  std::vector<double> out(busy_.size(), 0.0);
  if (!(horizon > 0.0)) return out;
  for (std::size_t s = 0; s < busy_.size(); ++s) {
    double busy = busy_[s];
    if (since_[s] >= 0.0) busy += horizon - since_[s];
    out[s] = std::clamp(busy / horizon, 0.0, 1.0);
  }
  return out;
}

}  // namespace eon
