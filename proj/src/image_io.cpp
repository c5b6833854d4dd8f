#include "het/image_io.hpp"

#include <cctype>
#include <fstream>
#include <string>

#include "het/errors.hpp"

#ifdef HET_WITH_OPENCV
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#endif

namespace het {

namespace {

// Reads one PGM header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      while ((c = in.peek()) != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(in.get()));
      }
      return tok;
    }
  }
  throw ParseError("unexpected end of PGM header");
}

int parse_header_int(std::istream& in, const char* what) {
  const std::string tok = next_token(in);
  try {
    std::size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("bad PGM ") + what + ": '" + tok + "'");
  }
}

}  // namespace

Frame read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  if (next_token(in) != "P5") throw ParseError("not a binary PGM (P5): " + path.string());
  const int width = parse_header_int(in, "width");
  const int height = parse_header_int(in, "height");
  const int maxval = parse_header_int(in, "maxval");
  if (maxval != 255) throw ParseError("unsupported PGM maxval (want 255): " + path.string());
  in.get();  // single whitespace byte before the payload
  std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (static_cast<std::size_t>(in.gcount()) != data.size()) {
    throw ParseError("truncated PGM payload: " + path.string());
  }
  return Frame(width, height, std::move(data));
}

void write_pgm(const Frame& frame, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << frame.width() << " " << frame.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.data().data()),
            static_cast<std::streamsize>(frame.data().size()));
  if (!out) throw IoError("failed writing " + path.string());
}

Frame load_frame(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".pgm") return read_pgm(path);
#ifdef HET_WITH_OPENCV
  cv::Mat img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (img.empty()) throw IoError("cannot decode " + path.string());
  if (img.channels() == 1) {
    cv::Mat gray;
    img.convertTo(gray, CV_8U);
    Frame f(gray.cols, gray.rows);
    for (int y = 0; y < gray.rows; ++y) {
      const std::uint8_t* row = gray.ptr<std::uint8_t>(y);
      for (int x = 0; x < gray.cols; ++x) f.at(x, y) = row[x];
    }
    return f;
  }
  cv::Mat bgr;
  if (img.channels() == 4) {
    cv::Mat tmp;
    img.convertTo(tmp, CV_8UC4);
    std::vector<cv::Mat> ch;
    cv::split(tmp, ch);
    cv::merge(std::vector<cv::Mat>{ch[0], ch[1], ch[2]}, bgr);
  } else {
    img.convertTo(bgr, CV_8UC3);
  }
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(bgr.cols) * bgr.rows * 3);
  for (int y = 0; y < bgr.rows; ++y) {
    const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * bgr.cols + x) * 3;
      rgb[i] = row[x][2];
      rgb[i + 1] = row[x][1];
      rgb[i + 2] = row[x][0];
    }
  }
  return to_grayscale(rgb, bgr.cols, bgr.rows);
#else
  throw IoError("PNG/JPEG support not built; only PGM available: " + path.string());
#endif
}

bool png_jpeg_supported() {
#ifdef HET_WITH_OPENCV
  return true;
#else
  return false;
#endif
}

}  // namespace het
