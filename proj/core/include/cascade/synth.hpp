#pragma once

#include <string>

#include "cascade/domain.hpp"

namespace cascade {

// Deterministic synthetic audio for fixtures and tests. A spec is a
// semicolon-separated list: a "sr=<hz>" header followed by segments that are
// concatenated in order:
//   silence:<dur_s>
//   const:<amplitude>:<dur_s>
//   burst:<amplitude>:<dur_s>     (alias of const, reads better in fixtures)
//   tone:<freq_hz>:<amplitude>:<dur_s>
// Example: "sr=8000;silence:2;burst:0.8:1;silence:7" is a 10 s clip with a
// one-second burst starting at t=2 s.
AudioClip synthesize_clip(const std::string& clip_id, const std::string& spec);

// Duration implied by a spec without rendering samples.
double synth_spec_duration(const std::string& spec);

}  // namespace cascade
