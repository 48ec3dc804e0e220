#include "proedscan/artifacts.hpp"

#include <atomic>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <fcntl.h>
#include <signal.h>
#include <unistd.h>

namespace proedscan {

namespace {

std::atomic<std::uint64_t> temp_counter{0};

std::filesystem::path temp_name_for(const std::filesystem::path& path) {
    auto n = temp_counter.fetch_add(1);
    return path.parent_path() /
           (path.filename().string() + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(n));
}

void write_then_rename(const std::filesystem::path& path, const void* data, std::size_t size) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto tmp = temp_name_for(path);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(static_cast<const char*>(data), std::streamsize(size));
        out.flush();
        if (!out.good()) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    write_then_rename(path, content.data(), content.size());
}

void atomic_write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    write_then_rename(path, bytes.data(), bytes.size());
}

std::optional<std::string> read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

std::optional<std::vector<std::uint8_t>> read_binary_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') {
            std::size_t end = i;
            if (end > begin && text[end - 1] == '\r') --end;
            lines.push_back(text.substr(begin, end - begin));
            begin = i + 1;
        }
    }
    if (begin < text.size()) lines.push_back(text.substr(begin));
    return lines;
}

DirectoryLock::DirectoryLock(const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    lock_path_ = directory / ".lock";
    for (int attempt = 0; attempt < 2; ++attempt) {
        int fd = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd >= 0) {
            const std::string pid = std::to_string(::getpid()) + "\n";
            [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
            ::close(fd);
            held_ = true;
            return;
        }
        // stale lock: holder no longer alive
        auto content = read_text_file(lock_path_);
        if (content) {
            long pid = std::strtol(content->c_str(), nullptr, 10);
            if (pid > 0 && ::kill(pid_t(pid), 0) != 0) {
                std::cerr << "warning: removing stale lock " << lock_path_ << " (pid " << pid
                          << " is gone)\n";
                std::error_code ec;
                std::filesystem::remove(lock_path_, ec);
                continue;
            }
        }
        throw std::runtime_error("directory is locked by another run: " + lock_path_.string());
    }
    throw std::runtime_error("could not acquire lock: " + lock_path_.string());
}

DirectoryLock::~DirectoryLock() {
    if (held_) {
        std::error_code ec;
        std::filesystem::remove(lock_path_, ec);
    }
}

} // namespace proedscan
