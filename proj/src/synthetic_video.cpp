#include "fastme/synthetic_video.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace fastme::synth {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Value noise defined on the whole plane, so moving content can be sampled at
// shifted coordinates without edge effects.
class NoiseField {
 public:
  NoiseField(double cell, int octaves, std::uint64_t seed)
      : cell_(cell), octaves_(octaves), seed_(seed) {}

  double operator()(double x, double y) const {
    double sum = 0.0, norm = 0.0, amp = 1.0, cell = cell_;
    for (int o = 0; o < octaves_; ++o) {
      sum += amp * octave(x / cell, y / cell, static_cast<std::uint64_t>(o));
      norm += amp;
      amp *= 0.5;
      cell *= 0.5;
    }
    return sum / norm;
  }

 private:
  double lattice(std::int64_t ix, std::int64_t iy, std::uint64_t octave) const {
    std::uint64_t h = splitmix64(seed_ ^ (octave * 0xD1B54A32D192ED03ull));
    h = splitmix64(h ^ static_cast<std::uint64_t>(ix));
    h = splitmix64(h ^ static_cast<std::uint64_t>(iy) * 0x9E3779B97F4A7C15ull);
    return unit_from_bits(h);
  }

  double octave(double u, double v, std::uint64_t o) const {
    const double fu = std::floor(u), fv = std::floor(v);
    const auto iu = static_cast<std::int64_t>(fu);
    const auto iv = static_cast<std::int64_t>(fv);
    const double tu = smooth(u - fu), tv = smooth(v - fv);
    const double a = lattice(iu, iv, o), b = lattice(iu + 1, iv, o);
    const double c = lattice(iu, iv + 1, o), d = lattice(iu + 1, iv + 1, o);
    return (a + (b - a) * tu) * (1 - tv) + (c + (d - c) * tu) * tv;
  }

  static double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

  double cell_;
  int octaves_;
  std::uint64_t seed_;
};

std::uint8_t to_pixel(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0l, 255l));
}

// Box-Muller on the raw engine output keeps the noise identical across
// standard library implementations.
class GaussianNoise {
 public:
  explicit GaussianNoise(std::uint64_t seed) : gen_(seed) {}
  double operator()() {
    const double u1 = std::max(unit_from_bits(gen_()), 0x1.0p-53);
    const double u2 = unit_from_bits(gen_());
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace

std::vector<double> value_noise(int width, int height, double cell, int octaves,
                                std::uint64_t seed) {
  const NoiseField field(cell, octaves, seed);
  std::vector<double> out(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      out[static_cast<std::size_t>(y) * width + x] = field(x, y);
    }
  }
  return out;
}

FramePair planted_shift_pair(int width, int height, MotionVector shift,
                             std::uint64_t seed) {
  // Fine texture with light grain: one pixel off already costs several grey
  // levels, yet the error surface stays unimodal around the match.
  const NoiseField base(12.0, 3, seed);
  std::mt19937_64 grain(splitmix64(seed + 1));
  std::vector<std::uint8_t> cur(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double g = unit_from_bits(grain()) * 20.0 - 10.0;
      cur[static_cast<std::size_t>(y) * width + x] =
          to_pixel(8.0 + 240.0 * base(x, y) + g);
    }
  }
  std::vector<std::uint8_t> ref(cur.size(), 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int sx = x - shift.dx, sy = y - shift.dy;
      if (sx >= 0 && sy >= 0 && sx < width && sy < height) {
        ref[static_cast<std::size_t>(y) * width + x] =
            cur[static_cast<std::size_t>(sy) * width + sx];
      }
    }
  }
  return {LumaPlane(width, height, std::move(cur)),
          LumaPlane(width, height, std::move(ref))};
}

std::vector<LumaPlane> talking_head_sequence(int frames, std::uint64_t seed,
                                             int width, int height) {
  const NoiseField background(48.0, 4, seed);
  const NoiseField skin(20.0, 3, splitmix64(seed ^ 0x51));
  GaussianNoise sensor(splitmix64(seed ^ 0xA7));
  std::mt19937_64 shake(splitmix64(seed ^ 0x3C));

  const double semi_x = width * 0.17, semi_y = height * 0.26;
  int cam_x = 0, cam_y = 0;
  std::vector<LumaPlane> out;
  out.reserve(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) {
    // Camera jitter: bounded random walk, at most one pixel per axis per frame.
    if (t > 0) {
      cam_x = std::clamp(cam_x + static_cast<int>(shake() % 3) - 1, -3, 3);
      cam_y = std::clamp(cam_y + static_cast<int>(shake() % 3) - 1, -3, 3);
    }
    const double head_x = width * 0.5 + 14.0 * std::sin(t / 6.0);
    const double head_y = height * 0.55 + 6.0 * std::sin(t / 9.0);
    std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const double ex = (x - head_x) / semi_x, ey = (y - head_y) / semi_y;
        double v;
        if (ex * ex + ey * ey <= 1.0) {
          v = 90.0 + 140.0 * skin(x - std::round(head_x), y - std::round(head_y));
        } else {
          v = 40.0 + 170.0 * background(x + cam_x, y + cam_y);
        }
        px[static_cast<std::size_t>(y) * width + x] = to_pixel(v + 1.0 * sensor());
      }
    }
    out.emplace_back(width, height, std::move(px));
  }
  return out;
}

SalientObjectClip salient_object_sequence(int frames, std::uint64_t seed,
                                          int width, int height,
                                          MotionVector velocity, int object_size) {
  const NoiseField object(12.0, 3, splitmix64(seed ^ 0x0B));
  std::vector<double> bg = value_noise(width, height, 40.0, 4, seed);

  SalientObjectClip clip;
  clip.object_size = object_size;
  int ox = width / 4, oy = height / 3;  // top-left corner
  int vx = velocity.dx, vy = velocity.dy;
  for (int t = 0; t < frames; ++t) {
    if (t > 0) {
      if (ox + vx < 0 || ox + vx + object_size > width) vx = -vx;
      if (oy + vy < 0 || oy + vy + object_size > height) vy = -vy;
      ox += vx;
      oy += vy;
    }
    std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const bool inside = x >= ox && x < ox + object_size && y >= oy &&
                            y < oy + object_size;
        const double v =
            inside ? 255.0 * object(x - ox, y - oy)
                   : 60.0 + 120.0 * bg[static_cast<std::size_t>(y) * width + x];
        px[static_cast<std::size_t>(y) * width + x] = to_pixel(v);
      }
    }
    clip.frames.emplace_back(width, height, std::move(px));
    clip.center_x.push_back(ox + object_size / 2.0);
    clip.center_y.push_back(oy + object_size / 2.0);
  }
  return clip;
}

}  // namespace fastme::synth
