#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace proedscan {

// Temp file + rename, same directory. An interrupted writer never leaves a
// partial file under the final name.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);
void atomic_write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

std::optional<std::string> read_text_file(const std::filesystem::path& path);
std::optional<std::vector<std::uint8_t>> read_binary_file(const std::filesystem::path& path);

// Splits text into lines; a trailing newline does not produce an empty
// final line.
std::vector<std::string> split_lines(const std::string& text);

// Directory lock (O_CREAT|O_EXCL). A lock whose recorded pid is dead is
// stolen with a warning on stderr.
class DirectoryLock {
public:
    explicit DirectoryLock(const std::filesystem::path& directory);
    ~DirectoryLock();

    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    std::filesystem::path lock_path_;
    bool held_ = false;
};

} // namespace proedscan
