// SPDX-License-Identifier: Apache-2.0
#include "nail/inject/injectors.hpp"

namespace nail::inject {

const char* injector_kind_name(InjectorKind kind) {
  switch (kind) {
    case InjectorKind::StuckAt: return "stuckAt";
    case InjectorKind::LfsrFlip: return "lfsrFlip";
    case InjectorKind::CycleWindow: return "cycleWindow";
  }
  return "?";
}

InjectorKind injector_kind_from_name(const std::string& name) {
  if (name == "stuckAt") return InjectorKind::StuckAt;
  if (name == "lfsrFlip") return InjectorKind::LfsrFlip;
  if (name == "cycleWindow") return InjectorKind::CycleWindow;
  fail(ErrKind::Validate, "unknown injector kind '" + name + "'");
}

std::vector<FieldSpec> injector_fields(InjectorKind kind, unsigned targetWidth) {
  if (targetWidth < 1 || targetWidth > kMaxWidth)
    fail(ErrKind::Validate, "injector target width out of range");
  switch (kind) {
    case InjectorKind::StuckAt:
      return {{"isActive", 1}, {"mask", targetWidth}, {"stuckValue", targetWidth}};
    case InjectorKind::LfsrFlip:
      return {{"isActive", 1}, {"seed", 32}, {"threshold", 32}, {"mask", targetWidth}};
    case InjectorKind::CycleWindow:
      return {{"isActive", 1}, {"startCycle", 32}, {"duration", 32}, {"mask", targetWidth}};
  }
  fail(ErrKind::Internal, "unknown injector kind");
}

Value lfsr_step(Value state, unsigned width, std::span<const unsigned> taps) {
  if (width < 2 || width > kMaxWidth)
    fail(ErrKind::Validate, "lfsr width out of range");
  if ((state & mask_of(width)) == 0)
    fail(ErrKind::Validate, "lfsr state must be nonzero");
  Value fb = 0;
  for (unsigned tap : taps) {
    if (tap < 1 || tap > width) fail(ErrKind::Validate, "lfsr tap out of range");
    fb ^= (state >> (width - tap)) & 1;
  }
  return ((state >> 1) | (fb << (width - 1))) & mask_of(width);
}

std::uint32_t lfsr32_next(std::uint32_t state) {
  static constexpr unsigned kTaps[] = {32, 22, 2, 1};
  return static_cast<std::uint32_t>(lfsr_step(state, 32, kTaps));
}

void InjectorRef::reset() {
  lfsr = seed;
  counter = 0;
  gePrev = false;
}

Value InjectorRef::step(Value orig, bool sel, bool globalEn) {
  orig &= mask_of(width);
  Value out = orig;
  switch (kind) {
    case InjectorKind::StuckAt:
      if (sel) out = stuck_at(orig, mask, stuckValue, width);
      break;
    case InjectorKind::LfsrFlip: {
      std::uint32_t next = lfsr32_next(lfsr);
      if (sel) {
        if (next < threshold) out = flip_bits(orig, mask, width);
        lfsr = next;
      } else {
        lfsr = seed;
      }
      break;
    }
    case InjectorKind::CycleWindow: {
      if (sel && counter >= startCycle && counter - startCycle < duration)
        out = flip_bits(orig, mask, width);
      bool rising = globalEn && !gePrev;
      if (rising)
        counter = 0;
      else if (globalEn)
        counter += 1;
      gePrev = globalEn;
      break;
    }
  }
  return out;
}

}  // namespace nail::inject
