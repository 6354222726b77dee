#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "qnet/error.hpp"
#include "qnet/tag_io.hpp"

using namespace qnet;

TEST_CASE("round trip through a stream") {
    const std::vector<TimeTag> tags{{0, 1, 2}, {12345678901234, 4, {}}, {7, 0, 0}};
    std::stringstream buf;
    tag_io::write(buf, tags);
    CHECK(buf.str().size() == tags.size() * tag_io::kRecordSize);
    CHECK(tag_io::read(buf) == tags);
}

TEST_CASE("record layout is little endian") {
    std::uint8_t rec[16];
    tag_io::encode({0x0102030405060708, 0x0A0B0C0D, 0x1122}, rec);
    CHECK(rec[0] == 0x08);
    CHECK(rec[7] == 0x01);
    CHECK(rec[8] == 0x0D);
    CHECK(rec[12] == 0x22);
    CHECK(rec[13] == 0x11);
    CHECK(rec[14] == 0);
    CHECK(rec[15] == 0);
}

TEST_CASE("truncated record reports its offset") {
    std::stringstream buf;
    tag_io::write(buf, std::vector<TimeTag>{{1, 0, {}}, {2, 0, {}}});
    std::string bytes = buf.str();
    bytes.resize(bytes.size() - 3);
    std::stringstream cut(bytes);
    try {
        tag_io::read(cut);
        FAIL("expected TagFormatError");
    } catch (const TagFormatError& e) {
        CHECK(e.offset() == 16);
    }
}

TEST_CASE("non-zero reserved field is rejected") {
    std::uint8_t rec[16];
    tag_io::encode({1, 0, {}}, rec);
    rec[15] = 1;
    CHECK_THROWS_AS(tag_io::decode(rec, 32), TagFormatError);
}

TEST_CASE("files") {
    const auto path = std::filesystem::temp_directory_path() / "qnet_tag_io_test.bin";
    const std::vector<TimeTag> tags{{5, 2, 1}};
    tag_io::write_file(path, tags);
    CHECK(tag_io::read_file(path) == tags);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(tag_io::read_file(path), IoError);
    tag_io::write_file(path, {});
    CHECK(tag_io::read_file(path).empty());
    std::filesystem::remove(path);
}
