#include "chartmorph/render.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <unordered_map>

namespace chartmorph {

namespace {

using Color = std::array<std::uint8_t, 3>;

std::vector<Color> median_cut(std::vector<Color> colors, std::size_t maxColors)
{
    std::vector<std::pair<std::size_t, std::size_t>> boxes{{0, colors.size()}};
    auto widest = [&](std::size_t b, int& channel) {
        auto [lo, hi] = boxes[b];
        int best = -1;
        for (int c = 0; c < 3; ++c) {
            std::uint8_t mn = 255, mx = 0;
            for (std::size_t i = lo; i < hi; ++i) {
                mn = std::min(mn, colors[i][static_cast<std::size_t>(c)]);
                mx = std::max(mx, colors[i][static_cast<std::size_t>(c)]);
            }
            if (mx - mn > best) {
                best = mx - mn;
                channel = c;
            }
        }
        return best;
    };
    while (boxes.size() < maxColors) {
        std::size_t pick = boxes.size();
        int bestRange = 0, bestChannel = 0;
        for (std::size_t b = 0; b < boxes.size(); ++b) {
            if (boxes[b].second - boxes[b].first < 2)
                continue;
            int channel = 0;
            int range = widest(b, channel);
            if (range > bestRange) {
                bestRange = range;
                bestChannel = channel;
                pick = b;
            }
        }
        if (pick == boxes.size())
            break;
        auto [lo, hi] = boxes[pick];
        auto first = colors.begin() + static_cast<std::ptrdiff_t>(lo);
        auto last = colors.begin() + static_cast<std::ptrdiff_t>(hi);
        std::sort(first, last, [&](const Color& a, const Color& b) {
            return a[static_cast<std::size_t>(bestChannel)] < b[static_cast<std::size_t>(bestChannel)];
        });
        std::size_t mid = lo + (hi - lo) / 2;
        boxes[pick] = {lo, mid};
        boxes.emplace_back(mid, hi);
    }
    std::vector<Color> palette;
    for (auto [lo, hi] : boxes) {
        if (lo == hi)
            continue;
        std::array<unsigned long, 3> sum{};
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t c = 0; c < 3; ++c)
                sum[c] += colors[i][c];
        Color avg;
        for (std::size_t c = 0; c < 3; ++c)
            avg[c] = static_cast<std::uint8_t>((sum[c] + (hi - lo) / 2) / (hi - lo));
        palette.push_back(avg);
    }
    return palette;
}

class BitWriter {
public:
    void write(unsigned code, int bits)
    {
        acc_ |= static_cast<unsigned long>(code) << nbits_;
        nbits_ += bits;
        while (nbits_ >= 8) {
            out_.push_back(static_cast<std::uint8_t>(acc_ & 0xff));
            acc_ >>= 8;
            nbits_ -= 8;
        }
    }
    std::vector<std::uint8_t> finish()
    {
        if (nbits_ > 0)
            out_.push_back(static_cast<std::uint8_t>(acc_ & 0xff));
        return std::move(out_);
    }

private:
    std::vector<std::uint8_t> out_;
    unsigned long acc_ = 0;
    int nbits_ = 0;
};

void put16(std::vector<std::uint8_t>& out, unsigned v)
{
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
}

} // namespace

std::vector<std::uint8_t> gif_lzw(const std::vector<std::uint8_t>& indices, int minCodeSize)
{
    const unsigned clear = 1u << minCodeSize, end = clear + 1;
    BitWriter w;
    int codeSize = minCodeSize + 1;
    unsigned next = end + 1;
    std::unordered_map<std::uint32_t, unsigned> dict; // (prefix << 8 | byte) -> code
    w.write(clear, codeSize);
    if (indices.empty()) {
        w.write(end, codeSize);
        return w.finish();
    }
    unsigned prefix = indices[0];
    for (std::size_t i = 1; i < indices.size(); ++i) {
        std::uint32_t key = (static_cast<std::uint32_t>(prefix) << 8) | indices[i];
        auto it = dict.find(key);
        if (it != dict.end()) {
            prefix = it->second;
            continue;
        }
        w.write(prefix, codeSize);
        if (next < 4096) {
            dict.emplace(key, next++);
            if (next > (1u << codeSize) && codeSize < 12)
                ++codeSize;
        } else {
            w.write(clear, codeSize);
            dict.clear();
            codeSize = minCodeSize + 1;
            next = end + 1;
        }
        prefix = indices[i];
    }
    w.write(prefix, codeSize);
    w.write(end, codeSize);
    return w.finish();
}

std::vector<std::uint8_t> gif_lzw_decode(const std::vector<std::uint8_t>& data, int minCodeSize)
{
    const unsigned clear = 1u << minCodeSize, end = clear + 1;
    std::vector<std::uint8_t> out;
    std::vector<std::vector<std::uint8_t>> table;
    auto reset = [&] {
        table.clear();
        for (unsigned i = 0; i < clear; ++i)
            table.push_back({static_cast<std::uint8_t>(i)});
        table.emplace_back();
        table.emplace_back();
    };
    reset();
    int codeSize = minCodeSize + 1;
    std::size_t bitPos = 0;
    auto read = [&]() -> long {
        if (bitPos + static_cast<std::size_t>(codeSize) > data.size() * 8)
            return -1;
        unsigned v = 0;
        for (int b = 0; b < codeSize; ++b, ++bitPos)
            if (data[bitPos / 8] & (1u << (bitPos % 8)))
                v |= 1u << b;
        return v;
    };
    std::vector<std::uint8_t> prev;
    for (;;) {
        long code = read();
        if (code < 0 || static_cast<unsigned>(code) == end)
            break;
        if (static_cast<unsigned>(code) == clear) {
            reset();
            codeSize = minCodeSize + 1;
            prev.clear();
            continue;
        }
        std::vector<std::uint8_t> entry;
        if (static_cast<std::size_t>(code) < table.size() && (code < static_cast<long>(clear) || !table[static_cast<std::size_t>(code)].empty()))
            entry = table[static_cast<std::size_t>(code)];
        else if (!prev.empty()) {
            entry = prev;
            entry.push_back(prev[0]);
        } else
            break;
        out.insert(out.end(), entry.begin(), entry.end());
        if (!prev.empty() && table.size() < 4096) {
            auto added = prev;
            added.push_back(entry[0]);
            table.push_back(std::move(added));
            if (table.size() == (1u << codeSize) && codeSize < 12)
                ++codeSize;
        }
        prev = std::move(entry);
    }
    return out;
}

std::vector<std::uint8_t> encode_gif(const std::vector<Raster>& frames, int delayCs,
                                     const std::vector<std::size_t>& paletteFrames)
{
    if (frames.empty())
        throw ChartError(ErrorCode::UnsupportedFormat, "no frames to encode");
    const int w = frames.front().width, h = frames.front().height;

    std::map<Color, unsigned> histogram;
    for (std::size_t f : paletteFrames) {
        const Raster& r = frames.at(f);
        for (std::size_t i = 0; i + 2 < r.rgb.size(); i += 3)
            ++histogram[{r.rgb[i], r.rgb[i + 1], r.rgb[i + 2]}];
    }
    std::vector<Color> distinct;
    for (const auto& [c, n] : histogram)
        distinct.push_back(c);
    std::vector<Color> palette = distinct.size() <= 256 ? distinct : median_cut(distinct, 256);
    while (palette.size() < 256)
        palette.push_back({0, 0, 0});

    std::map<Color, std::uint8_t> nearest;
    auto index_of = [&](const Color& c) {
        auto it = nearest.find(c);
        if (it != nearest.end())
            return it->second;
        std::size_t best = 0;
        long bestD = -1;
        for (std::size_t i = 0; i < palette.size(); ++i) {
            long d = 0;
            for (std::size_t k = 0; k < 3; ++k) {
                long diff = static_cast<long>(c[k]) - palette[i][k];
                d += diff * diff;
            }
            if (bestD < 0 || d < bestD) {
                bestD = d;
                best = i;
            }
        }
        nearest.emplace(c, static_cast<std::uint8_t>(best));
        return static_cast<std::uint8_t>(best);
    };

    std::vector<std::uint8_t> out = {'G', 'I', 'F', '8', '9', 'a'};
    put16(out, static_cast<unsigned>(w));
    put16(out, static_cast<unsigned>(h));
    out.push_back(0xF7); // global table, 8 bits, 256 entries
    out.push_back(0);
    out.push_back(0);
    for (const auto& c : palette)
        out.insert(out.end(), c.begin(), c.end());
    // Loop forever.
    const std::uint8_t loop[] = {0x21, 0xFF, 0x0B, 'N', 'E', 'T', 'S', 'C', 'A', 'P', 'E', '2', '.', '0', 0x03, 0x01, 0x00, 0x00, 0x00};
    out.insert(out.end(), std::begin(loop), std::end(loop));

    for (const auto& frame : frames) {
        out.insert(out.end(), {0x21, 0xF9, 0x04, 0x00});
        put16(out, static_cast<unsigned>(delayCs));
        out.insert(out.end(), {0x00, 0x00});
        out.push_back(0x2C);
        put16(out, 0);
        put16(out, 0);
        put16(out, static_cast<unsigned>(w));
        put16(out, static_cast<unsigned>(h));
        out.push_back(0);
        std::vector<std::uint8_t> indices;
        indices.reserve(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
        for (std::size_t i = 0; i + 2 < frame.rgb.size(); i += 3)
            indices.push_back(index_of({frame.rgb[i], frame.rgb[i + 1], frame.rgb[i + 2]}));
        out.push_back(8);
        auto data = gif_lzw(indices, 8);
        for (std::size_t i = 0; i < data.size(); i += 255) {
            std::size_t n = std::min<std::size_t>(255, data.size() - i);
            out.push_back(static_cast<std::uint8_t>(n));
            out.insert(out.end(), data.begin() + static_cast<std::ptrdiff_t>(i),
                       data.begin() + static_cast<std::ptrdiff_t>(i + n));
        }
        out.push_back(0);
    }
    out.push_back(0x3B);
    return out;
}

} // namespace chartmorph
