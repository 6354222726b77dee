#include "qnet/tag_io.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>

#include "qnet/error.hpp"

namespace qnet::tag_io {
namespace {

template <typename T>
void put_le(std::uint8_t* dst, T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) dst[i] = static_cast<std::uint8_t>(value >> (8 * i));
}

template <typename T>
T get_le(const std::uint8_t* src) {
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(src[i]) << (8 * i);
    return value;
}

}  // namespace

void encode(const TimeTag& tag, std::uint8_t* record) {
    require(tag.time_ps >= 0, "time tags must be non-negative");
    put_le<std::uint64_t>(record, static_cast<std::uint64_t>(tag.time_ps));
    put_le<std::uint32_t>(record + 8, tag.detector_id);
    put_le<std::uint16_t>(record + 12, tag.truth_channel.value_or(kNoTruth));
    put_le<std::uint16_t>(record + 14, 0);
}

TimeTag decode(const std::uint8_t* record, std::uint64_t offset) {
    const auto time = get_le<std::uint64_t>(record);
    if (time > static_cast<std::uint64_t>(INT64_MAX)) throw TagFormatError("time out of range", offset);
    if (get_le<std::uint16_t>(record + 14) != 0) throw TagFormatError("reserved field is not zero", offset);
    TimeTag tag;
    tag.time_ps = static_cast<Picoseconds>(time);
    tag.detector_id = get_le<std::uint32_t>(record + 8);
    const auto truth = get_le<std::uint16_t>(record + 12);
    if (truth != kNoTruth) tag.truth_channel = truth;
    return tag;
}

void write(std::ostream& out, std::span<const TimeTag> tags) {
    std::array<std::uint8_t, kRecordSize> buf{};
    for (const auto& tag : tags) {
        encode(tag, buf.data());
        out.write(reinterpret_cast<const char*>(buf.data()), kRecordSize);
    }
    if (!out) throw IoError("failed writing time tags");
}

std::vector<TimeTag> read(std::istream& in) {
    std::vector<TimeTag> tags;
    std::array<std::uint8_t, kRecordSize> buf{};
    std::uint64_t offset = 0;
    while (true) {
        in.read(reinterpret_cast<char*>(buf.data()), kRecordSize);
        const auto got = static_cast<std::size_t>(in.gcount());
        if (got == 0) break;
        if (got < kRecordSize) throw TagFormatError("truncated record", offset);
        tags.push_back(decode(buf.data(), offset));
        offset += kRecordSize;
    }
    return tags;
}

void write_file(const std::filesystem::path& path, std::span<const TimeTag> tags) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write(out, tags);
}

std::vector<TimeTag> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read(in);
}

}  // namespace qnet::tag_io
