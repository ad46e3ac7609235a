#pragma once

#include <string>

#include "cascade/domain.hpp"

namespace cascade {

// Minimal RIFF/WAVE support: mono PCM16 or IEEE float32 only. Anything else
// (stereo, compressed codecs) is rejected with InvalidInputError.
AudioClip read_wav(const std::string& path, const std::string& clip_id);

// Writes mono PCM16. Samples are clamped to [-1, 1].
void write_wav(const std::string& path, const AudioClip& clip);

}  // namespace cascade
