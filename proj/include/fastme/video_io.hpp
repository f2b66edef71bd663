#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "fastme/frame.hpp"

namespace fastme {

enum class ChromaFormat { k420 };

struct VideoHeader {
  int width = 0;
  int height = 0;
  std::optional<std::size_t> frame_count;  // unknown for Y4M streams
  ChromaFormat chroma = ChromaFormat::k420;
};

// Frame-at-a-time source of luma planes. next() returns nullopt at a clean
// end of stream and throws kTruncation when a frame is cut short.
class FrameReader {
 public:
  virtual ~FrameReader() = default;
  virtual std::optional<LumaPlane> next() = 0;
  virtual const VideoHeader& header() const = 0;
  // Number of frames returned so far.
  virtual std::size_t frames_read() const = 0;
};

// YUV4MPEG2 reader. Only 4:2:0 chroma is accepted; chroma samples are skipped.
class Y4mReader : public FrameReader {
 public:
  explicit Y4mReader(std::istream& in);

  std::optional<LumaPlane> next() override;
  const VideoHeader& header() const override { return header_; }
  std::size_t frames_read() const override { return frames_read_; }

 private:
  std::istream& in_;
  VideoHeader header_;
  std::size_t frames_read_ = 0;
};

enum class RawFormat { kYuv420, kLumaOnly };

// Headerless planar reader; dimensions come from the caller.
class RawYuvReader : public FrameReader {
 public:
  RawYuvReader(std::istream& in, int width, int height, RawFormat format);

  std::optional<LumaPlane> next() override;
  const VideoHeader& header() const override { return header_; }
  std::size_t frames_read() const override { return frames_read_; }

 private:
  std::istream& in_;
  VideoHeader header_;
  RawFormat format_;
  std::size_t frames_read_ = 0;
};

enum class VideoFormat { kY4m, kYuv420, kLumaOnly };

// Parses "y4m", "yuv420" or "luma" (case-sensitive); throws kConfig otherwise.
VideoFormat parse_video_format(const std::string& name);

// Owns the file stream behind a reader.
class VideoFile {
 public:
  // width/height are required for the raw formats and ignored for Y4M.
  VideoFile(const std::string& path, VideoFormat format, int width = 0,
            int height = 0);

  FrameReader& reader() { return *reader_; }

 private:
  std::unique_ptr<std::ifstream> stream_;
  std::unique_ptr<FrameReader> reader_;
};

// Reads up to max_frames frames (all when nullopt).
std::vector<LumaPlane> read_all(FrameReader& reader,
                                std::optional<std::size_t> max_frames = {});

// Writes C420 Y4M with neutral (128) chroma. All frames must share dimensions.
void write_y4m(std::ostream& out, std::span<const LumaPlane> frames,
               int fps_num = 25, int fps_den = 1);
void write_raw_luma(std::ostream& out, std::span<const LumaPlane> frames);

}  // namespace fastme
