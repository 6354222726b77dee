#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "qnet/detection.hpp"

// Binary time-tag stream: little-endian 16-byte records
//   u64 time_ps | u32 detector_id | u16 truth_channel (0xFFFF = none) | u16 reserved = 0
namespace qnet::tag_io {

inline constexpr std::size_t kRecordSize = 16;
inline constexpr std::uint16_t kNoTruth = 0xFFFF;

void encode(const TimeTag& tag, std::uint8_t* record);
// Throws TagFormatError (with `offset`) on a non-zero reserved field or a
// negative time.
TimeTag decode(const std::uint8_t* record, std::uint64_t offset);

void write(std::ostream& out, std::span<const TimeTag> tags);
std::vector<TimeTag> read(std::istream& in);

void write_file(const std::filesystem::path& path, std::span<const TimeTag> tags);
std::vector<TimeTag> read_file(const std::filesystem::path& path);

}  // namespace qnet::tag_io
