#include "proedscan/image.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <cctype>
#include <cstring>

namespace proedscan {

namespace {

bool starts_with(std::span<const std::uint8_t> bytes, std::initializer_list<int> magic) {
    if (bytes.size() < magic.size()) return false;
    std::size_t i = 0;
    for (int b : magic) {
        if (bytes[i++] != std::uint8_t(b)) return false;
    }
    return true;
}

} // namespace

std::optional<std::string> sniff_image_extension(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 3) return std::nullopt;
    if (bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6') && std::isspace(bytes[2])) {
        return bytes[1] == '5' ? std::string("pgm") : std::string("ppm");
    }
    if (starts_with(bytes, {0x89, 'P', 'N', 'G'})) return "png";
    if (starts_with(bytes, {0xFF, 0xD8, 0xFF})) return "jpg";
    if (starts_with(bytes, {'G', 'I', 'F', '8'})) return "gif";
    if (starts_with(bytes, {'B', 'M'})) return "bmp";
    if (bytes.size() >= 12 && starts_with(bytes, {'R', 'I', 'F', 'F'}) &&
        bytes[8] == 'W' && bytes[9] == 'E' && bytes[10] == 'B' && bytes[11] == 'P') {
        return "webp";
    }
    return std::nullopt;
}

namespace {

// Reads one PNM token, skipping whitespace and '#' comments.
bool next_pnm_token(std::span<const std::uint8_t> bytes, std::size_t& pos, std::string& token) {
    while (pos < bytes.size()) {
        if (bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(bytes[pos])) {
            ++pos;
        } else {
            break;
        }
    }
    token.clear();
    while (pos < bytes.size() && !std::isspace(bytes[pos]) && bytes[pos] != '#') {
        token.push_back(char(bytes[pos++]));
    }
    return !token.empty();
}

} // namespace

std::optional<Image> decode_pnm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
        return std::nullopt;
    }
    const int channels = bytes[1] == '5' ? 1 : 3;
    std::size_t pos = 2;
    std::string tok;
    long dims[3];
    for (long& d : dims) {
        if (!next_pnm_token(bytes, pos, tok)) return std::nullopt;
        char* end = nullptr;
        d = std::strtol(tok.c_str(), &end, 10);
        if (end != tok.c_str() + tok.size() || d <= 0) return std::nullopt;
    }
    if (dims[2] > 255 || dims[0] > 1 << 20 || dims[1] > 1 << 20) return std::nullopt;
    // exactly one whitespace byte separates the header from the raster
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) return std::nullopt;
    ++pos;
    Image img;
    img.width = int(dims[0]);
    img.height = int(dims[1]);
    img.channels = channels;
    const std::size_t need = std::size_t(img.width) * std::size_t(img.height) * std::size_t(channels);
    if (bytes.size() - pos < need) return std::nullopt;
    img.pixels.assign(bytes.begin() + long(pos), bytes.begin() + long(pos + need));
    return img;
}

std::vector<std::uint8_t> encode_ppm(const Image& img) {
    std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    if (img.channels == 3) {
        out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    } else {
        for (std::uint8_t g : img.pixels) {
            out.push_back(g);
            out.push_back(g);
            out.push_back(g);
        }
    }
    return out;
}

std::optional<Image> decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) return std::nullopt;
    if (bytes[0] == 'P' && bytes.size() > 1 && (bytes[1] == '5' || bytes[1] == '6')) {
        return decode_pnm(bytes);
    }
    cv::Mat raw(1, int(bytes.size()), CV_8UC1, const_cast<std::uint8_t*>(bytes.data()));
    cv::Mat mat = cv::imdecode(raw, cv::IMREAD_COLOR); // BGR
    if (mat.empty()) {
        mat = cv::imdecode(raw, cv::IMREAD_GRAYSCALE);
        if (mat.empty()) return std::nullopt;
        Image img;
        img.width = mat.cols;
        img.height = mat.rows;
        img.channels = 1;
        img.pixels.resize(std::size_t(mat.cols) * std::size_t(mat.rows));
        for (int y = 0; y < mat.rows; ++y) {
            std::memcpy(img.pixels.data() + std::size_t(y) * std::size_t(mat.cols), mat.ptr(y),
                        std::size_t(mat.cols));
        }
        return img;
    }
    Image img;
    img.width = mat.cols;
    img.height = mat.rows;
    img.channels = 3;
    img.pixels.resize(std::size_t(mat.cols) * std::size_t(mat.rows) * 3);
    for (int y = 0; y < mat.rows; ++y) {
        const std::uint8_t* row = mat.ptr(y);
        for (int x = 0; x < mat.cols; ++x) {
            const std::size_t o = (std::size_t(y) * std::size_t(mat.cols) + std::size_t(x)) * 3;
            img.pixels[o + 0] = row[x * 3 + 2]; // BGR -> RGB
            img.pixels[o + 1] = row[x * 3 + 1];
            img.pixels[o + 2] = row[x * 3 + 0];
        }
    }
    return img;
}

std::vector<double> box_resample(const Image& img, int out_w, int out_h) {
    std::vector<double> out(std::size_t(out_w) * std::size_t(out_h) * std::size_t(img.channels));
    for (int oy = 0; oy < out_h; ++oy) {
        int y0 = int(std::int64_t(oy) * img.height / out_h);
        int y1 = int(std::int64_t(oy + 1) * img.height / out_h);
        if (y1 <= y0) y1 = y0 + 1;
        for (int ox = 0; ox < out_w; ++ox) {
            int x0 = int(std::int64_t(ox) * img.width / out_w);
            int x1 = int(std::int64_t(ox + 1) * img.width / out_w);
            if (x1 <= x0) x1 = x0 + 1;
            for (int c = 0; c < img.channels; ++c) {
                std::uint64_t sum = 0;
                for (int y = y0; y < y1; ++y) {
                    for (int x = x0; x < x1; ++x) {
                        sum += img.at(x, y, c);
                    }
                }
                out[(std::size_t(oy) * std::size_t(out_w) + std::size_t(ox)) * std::size_t(img.channels) +
                    std::size_t(c)] = double(sum) / (double(y1 - y0) * double(x1 - x0));
            }
        }
    }
    return out;
}

} // namespace proedscan
