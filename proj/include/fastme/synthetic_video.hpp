#pragma once

// Deterministic procedural video used as test fixtures and demo input.

#include <cstdint>
#include <vector>

#include "fastme/frame.hpp"

namespace fastme::synth {

// Smooth multi-octave value noise in [0,1], row-major. `cell` is the coarsest
// lattice spacing in pixels.
std::vector<double> value_noise(int width, int height, double cell, int octaves,
                                std::uint64_t seed);

// Frame pair where the reference is the current frame shifted by (dx, dy):
// reference(x, y) = current(x - dx, y - dy), zero outside. Every block whose
// window contains (dx, dy) therefore has an exact match there. The texture is
// a smooth base plus fine grain, so SAD falls steadily towards the match and
// any misaligned candidate pays for the grain.
struct FramePair {
  LumaPlane current;
  LumaPlane reference;
};
FramePair planted_shift_pair(int width, int height, MotionVector shift,
                             std::uint64_t seed);

// CIF-sized head-and-shoulders style clip: a textured background with small
// camera jitter, a textured ellipse that drifts, and mild sensor noise.
std::vector<LumaPlane> talking_head_sequence(int frames, std::uint64_t seed,
                                             int width = 352, int height = 288);

// Static, noise-free textured background with one textured square object
// moving at a constant integer velocity.
struct SalientObjectClip {
  std::vector<LumaPlane> frames;
  // Object centre per frame, in pixels.
  std::vector<double> center_x;
  std::vector<double> center_y;
  int object_size = 0;
};
SalientObjectClip salient_object_sequence(int frames, std::uint64_t seed,
                                          int width = 352, int height = 288,
                                          MotionVector velocity = {3, 2},
                                          int object_size = 64);

}  // namespace fastme::synth
