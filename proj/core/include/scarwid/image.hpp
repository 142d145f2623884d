#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace scarwid {

/// Row-major H x W x 3 image, float channels in [0, 1].
struct Image {
    int height = 0;
    int width = 0;
    std::vector<float> data;  // size = height * width * 3

    Image() = default;
    Image(int h, int w, float fill = 0.0f)
        : height(h), width(w), data(static_cast<std::size_t>(h) * w * 3, fill) {}

    float& at(int y, int x, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    float at(int y, int x, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }

    bool empty() const { return data.empty(); }
};

/// Bilinear resize (half-pixel centers). Same-size input is copied exactly.
Image resize_bilinear(const Image& src, int out_h, int out_w);

/// Clamp all channels into [0, 1] in place.
void clamp01(Image& img);

/// PNG I/O, 8-bit RGB. Gray and alpha inputs are expanded/stripped on read.
Image read_png(const std::filesystem::path& path);
void write_png(const Image& img, const std::filesystem::path& path);

/// Quantize to the 8-bit grid so a PNG round trip is lossless.
void quantize_u8(Image& img);

/// Stable fingerprint of pixel content (quantized to 8-bit).
std::uint64_t image_hash(const Image& img);

}  // namespace scarwid
