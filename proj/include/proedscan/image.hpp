#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace proedscan {

// Decoded pixel grid, 8-bit, row-major, interleaved. channels is 1 (gray)
// or 3 (RGB).
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(int x, int y, int c) const {
        return pixels[std::size_t(y) * std::size_t(width) * std::size_t(channels) +
                      std::size_t(x) * std::size_t(channels) + std::size_t(c)];
    }
};

// Magic-byte sniff of common raster formats. Returns a file extension
// ("ppm", "png", ...) or nullopt for anything that is not an image.
std::optional<std::string> sniff_image_extension(std::span<const std::uint8_t> bytes);

// PPM (P6) / PGM (P5), binary, maxval <= 255.
std::optional<Image> decode_pnm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_ppm(const Image& img);

// PNM natively, everything else through OpenCV. GIF and other formats the
// decoder cannot handle come back nullopt and are excluded upstream.
std::optional<Image> decode_image(std::span<const std::uint8_t> bytes);

// Box-filter reduction to out_w x out_h, per channel, double output in
// [0,255]. Cell boundaries are floor(i*src/out); empty cells borrow one
// source pixel so 1xN inputs stay well defined.
std::vector<double> box_resample(const Image& img, int out_w, int out_h);

} // namespace proedscan
