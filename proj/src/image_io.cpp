#include "rcf/image_io.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <string>

#include "rcf/errors.hpp"

namespace rcf {

namespace fs = std::filesystem;

Frame read_frame(const fs::path& path) {
  cv::Mat img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (img.empty()) throw IngestionError("cannot decode image " + path.string());
  if (img.depth() != CV_8U) img.convertTo(img, CV_8U, img.depth() == CV_16U ? 1.0 / 257 : 1.0);
  if (img.channels() == 4) cv::cvtColor(img, img, cv::COLOR_BGRA2RGB);
  else if (img.channels() == 3) cv::cvtColor(img, img, cv::COLOR_BGR2RGB);
  else if (img.channels() != 1) throw IngestionError("unsupported channel count in " + path.string());

  Frame f(img.rows, img.cols, img.channels());
  const std::size_t row_bytes = static_cast<std::size_t>(img.cols) * img.channels();
  for (int r = 0; r < img.rows; ++r) std::memcpy(&f.pixels[r * row_bytes], img.ptr<std::uint8_t>(r), row_bytes);
  return f;
}

void write_frame(const fs::path& path, const Frame& frame) {
  frame.validate();
  cv::Mat img(frame.height, frame.width, frame.channels == 1 ? CV_8UC1 : CV_8UC3,
              const_cast<std::uint8_t*>(frame.pixels.data()));
  cv::Mat out = img;
  if (frame.channels == 3) cv::cvtColor(img, out, cv::COLOR_RGB2BGR);
  if (!cv::imwrite(path.string(), out)) throw IngestionError("cannot write image " + path.string());
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IngestionError("not a directory: " + dir.string());
  static const char* kExt[] = {".png", ".jpg", ".jpeg", ".bmp", ".pgm", ".ppm", ".pnm"};
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (std::find(std::begin(kExt), std::end(kExt), ext) != std::end(kExt)) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return out;
}

}  // namespace rcf
