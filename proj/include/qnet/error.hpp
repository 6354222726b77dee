#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qnet {

// Bad input such as a broken precondition or config value. The CLI maps
// these to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& message, std::string path = {})
        : std::invalid_argument(path.empty() ? message : path + ": " + message),
          path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// Malformed binary time-tag stream; `offset` is the byte offset of the bad record.
class TagFormatError : public ValidationError {
public:
    TagFormatError(const std::string& message, std::uint64_t offset)
        : ValidationError(message + " at byte offset " + std::to_string(offset)),
          offset_(offset) {}

    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

// Filesystem failure. Exit code 1.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message, const std::string& path = {}) {
    if (!condition) throw ValidationError(message, path);
}

}  // namespace qnet
