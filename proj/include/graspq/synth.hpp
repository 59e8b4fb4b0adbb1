#pragma once

#include <cstdint>
#include <string>

#include "graspq/dataset.hpp"

namespace graspq {

// ideal: boundary-value grasps (metric optima); separable: three cleanly
// separated classes; noisy: separable plus label flips and wider geometry
// bands, strength in [0, 1].
enum class SynthPreset { ideal, separable, noisy };

struct SynthSpec {
    SynthPreset preset = SynthPreset::separable;
    double noise = 0.0;
};

// Accepts "ideal", "separable" or "noisy(<strength>)".
SynthSpec parse_preset(const std::string& text);

struct SynthOptions {
    SynthSpec spec;
    std::size_t count = 600;  // records, spread over clusters of 1-3
    std::uint64_t seed = 0;
};

struct SynthResult {
    Dataset dataset;
    ObjectMap objects;
};

SynthResult generate(const SynthOptions& opt);

}  // namespace graspq
