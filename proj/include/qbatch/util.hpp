#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace qbatch {

// gzip-compresses a byte string (RFC 1952 framing).
std::string gzip_compress(const std::string& data);

// Inflates gzip or raw zlib data. Throws IntegrityError on malformed input.
std::string gzip_decompress(const std::string& data, std::size_t max_size = 256u << 20);

std::string base64_encode(const std::string& data);
std::string base64_decode(const std::string& data);

std::uint32_t crc32_of(const std::string& data);

// Wall-clock stopwatch used by benchmarks and backend selection.
class Stopwatch {
public:
    Stopwatch() : start_(clock::now()) {}
    void reset() { start_ = clock::now(); }
    double seconds() const {
        return std::chrono::duration<double>(clock::now() - start_).count();
    }
    double millis() const { return seconds() * 1e3; }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_;
};

// Formats a double with enough digits to round-trip exactly.
std::string format_double(double v);

std::vector<std::string> split(const std::string& s, char sep);

}  // namespace qbatch
