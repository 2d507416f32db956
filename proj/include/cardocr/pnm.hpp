#pragma once

// Binary PGM (P5) and PPM (P6) with maxval 255.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cardocr/image.hpp"

namespace cardocr {

class PnmError : public Error {
public:
    enum class Kind { malformed_header, truncated, unsupported_maxval, io };

    PnmError(Kind kind, const std::string& what) : Error("pnm: " + what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

using AnyImage = std::variant<GrayImage, ColorImage>;

namespace detail {

class PnmHeaderReader {
public:
    explicit PnmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    void skip_separators() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    long read_number(const char* field) {
        skip_separators();
        long value = 0;
        std::size_t digits = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000) throw PnmError(PnmError::Kind::malformed_header, std::string(field) + " too large");
            ++pos_;
            ++digits;
        }
        if (digits == 0) throw PnmError(PnmError::Kind::malformed_header, std::string("missing ") + field);
        return value;
    }

    // Exactly one whitespace byte separates maxval from the payload.
    void expect_single_whitespace() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
            throw PnmError(PnmError::Kind::malformed_header, "expected whitespace after maxval");
        ++pos_;
    }

    std::size_t position() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline AnyImage load_pnm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
        throw PnmError(PnmError::Kind::malformed_header, "expected magic P5 or P6");
    const bool color = bytes[1] == '6';

    detail::PnmHeaderReader in(bytes);
    in.advance(2);
    const long width = in.read_number("width");
    const long height = in.read_number("height");
    const long maxval = in.read_number("maxval");
    if (width <= 0 || height <= 0) throw PnmError(PnmError::Kind::malformed_header, "zero dimension");
    if (maxval != 255) throw PnmError(PnmError::Kind::unsupported_maxval, "maxval " + std::to_string(maxval));
    in.expect_single_whitespace();

    const std::size_t channels = color ? 3 : 1;
    const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels;
    const std::size_t have = bytes.size() - in.position();
    if (have < need)
        throw PnmError(PnmError::Kind::truncated,
                       "payload has " + std::to_string(have) + " bytes, expected " + std::to_string(need));

    auto payload = bytes.subspan(in.position(), need);
    if (!color) {
        return GrayImage(static_cast<int>(width), static_cast<int>(height),
                         std::vector<std::uint8_t>(payload.begin(), payload.end()));
    }
    ColorImage img(static_cast<int>(width), static_cast<int>(height));
    auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = {payload[3 * i], payload[3 * i + 1], payload[3 * i + 2]};
    return img;
}

namespace detail {

inline std::vector<std::uint8_t> pnm_header(char magic, int w, int h) {
    const std::string head = std::string("P") + magic + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    return {head.begin(), head.end()};
}

}  // namespace detail

inline std::vector<std::uint8_t> save_pnm(const GrayImage& img) {
    auto out = detail::pnm_header('5', img.width(), img.height());
    out.insert(out.end(), img.pixels().begin(), img.pixels().end());
    return out;
}

inline std::vector<std::uint8_t> save_pnm(const BinaryImage& img) { return save_pnm(to_gray(img)); }

inline std::vector<std::uint8_t> save_pnm(const ColorImage& img) {
    auto out = detail::pnm_header('6', img.width(), img.height());
    out.reserve(out.size() + img.size() * 3);
    for (const Rgb& p : img.pixels()) {
        out.push_back(p.r);
        out.push_back(p.g);
        out.push_back(p.b);
    }
    return out;
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw PnmError(PnmError::Kind::io, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw PnmError(PnmError::Kind::io, "cannot write " + path.string());
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw PnmError(PnmError::Kind::io, "short write to " + path.string());
}

inline AnyImage load_pnm_file(const std::filesystem::path& path) { return load_pnm(read_file(path)); }

/// Loads either flavour and returns luma (P6 goes through to_grayscale).
inline GrayImage load_gray_file(const std::filesystem::path& path) {
    auto any = load_pnm_file(path);
    if (auto* g = std::get_if<GrayImage>(&any)) return std::move(*g);
    return to_grayscale(std::get<ColorImage>(any));
}

template <class Img>
void save_pnm_file(const std::filesystem::path& path, const Img& img) {
    write_file(path, save_pnm(img));
}

}  // namespace cardocr
