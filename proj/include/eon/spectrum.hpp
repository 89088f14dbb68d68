#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace eon {

using LightpathId = std::int64_t;

inline constexpr int kDefaultSlotCount = 320;
inline constexpr int kGuardbandSlots = 2;

class SpectrumError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Contiguous slots [start, start + width).
struct SlotBlock {
  int start = 0;
  int width = 1;

  int end() const { return start + width; }
  bool overlaps(const SlotBlock& other) const { return start < other.end() && other.start < end(); }
  int overlap_width(const SlotBlock& other) const;
  bool operator==(const SlotBlock&) const = default;
};

enum class SlotState { free, used, forbidden };

/// Occupancy of one direction of one fiber.
///
/// A slot is either owned by a lightpath or not. Independently it may carry a
/// forbidden flag set by the jamming-aware controller; a forbidden slot that is
/// still owned (flagged after establishment) reports as used until released.
class SlotGrid {
 public:
  explicit SlotGrid(int slot_count = kDefaultSlotCount);

  int slot_count() const { return static_cast<int>(owner_.size()); }
  SlotState state(int slot) const;
  std::optional<LightpathId> owner(int slot) const;
  bool is_used(int slot) const { return owner_[slot] >= 0; }
  bool is_flagged_forbidden(int slot) const { return forbidden_[slot]; }

  /// Throws SpectrumError if any slot is used or flagged forbidden.
  void occupy(const SlotBlock& block, LightpathId id);
  /// Frees every slot held by `id`; returns how many there were.
  int vacate(LightpathId id);
  void forbid(const SlotBlock& block);

  int used_count() const { return used_; }
  int forbidden_count() const;
  int free_count() const { return slot_count() - used_count() - forbidden_count(); }

 private:
  void check_block(const SlotBlock& block) const;

  std::vector<LightpathId> owner_;
  std::vector<bool> forbidden_;
  int used_ = 0;
};

/// used / slot_count; forbidden slots count as not used.
double utilization(const SlotGrid& grid);

/// Lowest start such that [start, start + width) is free on every grid and no
/// used slot lies within `guardband` slots of the block on any grid. With
/// `forbidden_aware`, forbidden slots are treated exactly like used ones
/// (unavailable, and the guardband applies against them). Starts below
/// `min_start` are skipped.
std::optional<SlotBlock> first_fit(std::span<const SlotGrid* const> grids, int width,
                                   bool forbidden_aware, int min_start = 0,
                                   int guardband = kGuardbandSlots);

void allocate(std::span<SlotGrid* const> grids, const SlotBlock& block, LightpathId id);
/// Throws SpectrumError if `id` holds no slot on some grid.
void release(std::span<SlotGrid* const> grids, LightpathId id);

/// Exact time integral of per-slot occupancy for one grid.
class SlotUsageIntegrator {
 public:
  explicit SlotUsageIntegrator(int slot_count = kDefaultSlotCount);

  void on_occupy(const SlotBlock& block, double now);
  void on_vacate(const SlotBlock& block, double now);
  /// Busy time of each slot divided by `horizon`; open intervals are closed at
  /// `horizon`.
  std::vector<double> time_average(double horizon) const;

 private:
  std::vector<double> busy_;
  std::vector<double> since_;
};

}  // namespace eon
