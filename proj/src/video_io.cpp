#include "fastme/video_io.hpp"

#include <sstream>
#include <string_view>
#include <vector>

namespace fastme {
namespace {

constexpr std::string_view kY4mSignature = "YUV4MPEG2";
constexpr std::string_view kFrameMarker = "FRAME";
// Y4M header lines are short; anything longer is not a Y4M stream.
constexpr std::size_t kMaxHeaderLine = 4096;

// Reads up to '\n'. Returns false if the stream ends before a newline.
bool read_line(std::istream& in, std::string& line) {
  line.clear();
  char c;
  while (in.get(c)) {
    if (c == '\n') return true;
    line.push_back(c);
    if (line.size() > kMaxHeaderLine) return false;
  }
  return false;
}

int parse_positive(std::string_view token, const char* what) {
  int value = 0;
  std::string s(token);
  std::size_t used = 0;
  try {
    value = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || value <= 0) {
    throw Error(ErrorCode::kFormat,
                std::string("invalid Y4M ") + what + " '" + s + "'");
  }
  return value;
}

std::size_t chroma_420_bytes(int width, int height) {
  return 2 * (static_cast<std::size_t>((width + 1) / 2) *
              static_cast<std::size_t>((height + 1) / 2));
}

// Reads exactly n bytes into dst; returns the number actually read.
std::size_t read_exact(std::istream& in, char* dst, std::size_t n) {
  in.read(dst, static_cast<std::streamsize>(n));
  return static_cast<std::size_t>(in.gcount());
}

bool skip_exact(std::istream& in, std::size_t n) {
  char buf[4096];
  while (n > 0) {
    const std::size_t chunk = std::min(n, sizeof(buf));
    if (read_exact(in, buf, chunk) != chunk) return false;
    n -= chunk;
  }
  return true;
}

Error truncated(std::size_t frame_index, const std::string& detail) {
  return Error(ErrorCode::kTruncation,
               "truncated video: frame " + std::to_string(frame_index) + " " +
                   detail,
               frame_index);
}

}  // namespace

Y4mReader::Y4mReader(std::istream& in) : in_(in) {
  std::string line;
  if (!read_line(in_, line) || line.compare(0, kY4mSignature.size(), kY4mSignature) != 0) {
    throw Error(ErrorCode::kFormat, "missing YUV4MPEG2 signature");
  }
  std::istringstream tokens(line.substr(kY4mSignature.size()));
  std::string tok;
  bool have_w = false, have_h = false;
  while (tokens >> tok) {
    switch (tok[0]) {
      case 'W':
        header_.width = parse_positive(std::string_view(tok).substr(1), "width");
        have_w = true;
        break;
      case 'H':
        header_.height = parse_positive(std::string_view(tok).substr(1), "height");
        have_h = true;
        break;
      case 'C': {
        const std::string tag = tok.substr(1);
        if (tag.rfind("420", 0) != 0) {
          throw Error(ErrorCode::kUnsupportedFormat,
                      "unsupported Y4M chroma format C" + tag +
                          " (only 4:2:0 is supported)");
        }
        header_.chroma = ChromaFormat::k420;
        break;
      }
      default:
        break;  // F, I, A, X parameters are accepted and ignored
    }
  }
  if (!have_w || !have_h) {
    throw Error(ErrorCode::kFormat, "Y4M header lacks W or H parameter");
  }
  if (header_.width % 2 != 0 || header_.height % 2 != 0) {
    throw Error(ErrorCode::kFormat, "4:2:0 Y4M requires even dimensions, got " +
                                        std::to_string(header_.width) + "x" +
                                        std::to_string(header_.height));
  }
}

std::optional<LumaPlane> Y4mReader::next() {
  if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;
  std::string line;
  if (!read_line(in_, line)) {
    throw truncated(frames_read_, "has an incomplete FRAME header");
  }
  if (line.compare(0, kFrameMarker.size(), kFrameMarker) != 0) {
    throw Error(ErrorCode::kFormat, "expected FRAME marker before frame " +
                                        std::to_string(frames_read_));
  }
  const std::size_t luma =
      static_cast<std::size_t>(header_.width) * header_.height;
  std::vector<std::uint8_t> samples(luma);
  const std::size_t got =
      read_exact(in_, reinterpret_cast<char*>(samples.data()), luma);
  if (got != luma) {
    throw truncated(frames_read_, "luma payload has " + std::to_string(got) +
                                      " of " + std::to_string(luma) + " bytes");
  }
  if (!skip_exact(in_, chroma_420_bytes(header_.width, header_.height))) {
    throw truncated(frames_read_, "chroma payload is incomplete");
  }
  ++frames_read_;
  return LumaPlane(header_.width, header_.height, std::move(samples));
}

RawYuvReader::RawYuvReader(std::istream& in, int width, int height,
                           RawFormat format)
    : in_(in), format_(format) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kConfig, "raw video needs positive width and height");
  }
  if (format == RawFormat::kYuv420 && (width % 2 != 0 || height % 2 != 0)) {
    throw Error(ErrorCode::kConfig, "raw 4:2:0 video needs even dimensions");
  }
  header_.width = width;
  header_.height = height;
}

std::optional<LumaPlane> RawYuvReader::next() {
  if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;
  const std::size_t luma =
      static_cast<std::size_t>(header_.width) * header_.height;
  const std::size_t chroma = format_ == RawFormat::kYuv420
                                 ? chroma_420_bytes(header_.width, header_.height)
                                 : 0;
  std::vector<std::uint8_t> samples(luma);
  const std::size_t got =
      read_exact(in_, reinterpret_cast<char*>(samples.data()), luma);
  if (got != luma || !skip_exact(in_, chroma)) {
    throw truncated(frames_read_,
                    "is incomplete: stream length is not a multiple of the " +
                        std::to_string(luma + chroma) + "-byte frame size");
  }
  ++frames_read_;
  return LumaPlane(header_.width, header_.height, std::move(samples));
}

VideoFormat parse_video_format(const std::string& name) {
  if (name == "y4m") return VideoFormat::kY4m;
  if (name == "yuv420") return VideoFormat::kYuv420;
  if (name == "luma") return VideoFormat::kLumaOnly;
  throw Error(ErrorCode::kConfig,
              "unknown video format '" + name + "' (expected y4m, yuv420, luma)");
}

VideoFile::VideoFile(const std::string& path, VideoFormat format, int width,
                     int height)
    : stream_(std::make_unique<std::ifstream>(path, std::ios::binary)) {
  if (!*stream_) {
    throw Error(ErrorCode::kIo, "cannot open video file '" + path + "'");
  }
  switch (format) {
    case VideoFormat::kY4m:
      reader_ = std::make_unique<Y4mReader>(*stream_);
      break;
    case VideoFormat::kYuv420:
      reader_ = std::make_unique<RawYuvReader>(*stream_, width, height,
                                               RawFormat::kYuv420);
      break;
    case VideoFormat::kLumaOnly:
      reader_ = std::make_unique<RawYuvReader>(*stream_, width, height,
                                               RawFormat::kLumaOnly);
      break;
  }
}

std::vector<LumaPlane> read_all(FrameReader& reader,
                                std::optional<std::size_t> max_frames) {
  std::vector<LumaPlane> frames;
  while (!max_frames || frames.size() < *max_frames) {
    auto frame = reader.next();
    if (!frame) break;
    frames.push_back(std::move(*frame));
  }
  return frames;
}

void write_y4m(std::ostream& out, std::span<const LumaPlane> frames,
               int fps_num, int fps_den) {
  if (frames.empty()) {
    throw Error(ErrorCode::kPrecondition, "cannot write an empty Y4M sequence");
  }
  const int w = frames.front().width();
  const int h = frames.front().height();
  if (w % 2 != 0 || h % 2 != 0) {
    throw Error(ErrorCode::kDimension, "4:2:0 Y4M requires even dimensions");
  }
  out << kY4mSignature << " W" << w << " H" << h << " F" << fps_num << ':'
      << fps_den << " Ip A1:1 C420\n";
  const std::string chroma(chroma_420_bytes(w, h), static_cast<char>(128));
  for (const auto& f : frames) {
    if (f.width() != w || f.height() != h) {
      throw Error(ErrorCode::kDimension, "Y4M frames must share dimensions");
    }
    out << kFrameMarker << '\n';
    out.write(reinterpret_cast<const char*>(f.samples().data()),
              static_cast<std::streamsize>(f.samples().size()));
    out.write(chroma.data(), static_cast<std::streamsize>(chroma.size()));
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing Y4M stream");
}

void write_raw_luma(std::ostream& out, std::span<const LumaPlane> frames) {
  for (const auto& f : frames) {
    out.write(reinterpret_cast<const char*>(f.samples().data()),
              static_cast<std::streamsize>(f.samples().size()));
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing raw luma stream");
}

}  // namespace fastme
