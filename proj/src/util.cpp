#include "korn/util.hpp"

#include <array>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <thread>

namespace korn {

std::string format17(double x) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                           std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

double parse17(const std::string& s) {
  double x = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError("not a number: '" + s + "'");
  }
  return x;
}

namespace {

inline std::uint32_t rol(std::uint32_t v, int s) {
  return (v << s) | (v >> (32 - s));
}

}  // namespace

std::string sha1_hex(const std::string& data) {
  std::uint32_t h0 = 0x67452301, h1 = 0xEFCDAB89, h2 = 0x98BADCFE,
                h3 = 0x10325476, h4 = 0xC3D2E1F0;
  std::string msg = data;
  const std::uint64_t bit_len = static_cast<std::uint64_t>(msg.size()) * 8;
  msg.push_back(static_cast<char>(0x80));
  while (msg.size() % 64 != 56) msg.push_back('\0');
  for (int i = 7; i >= 0; --i) {
    msg.push_back(static_cast<char>((bit_len >> (8 * i)) & 0xFF));
  }
  for (std::size_t chunk = 0; chunk < msg.size(); chunk += 64) {
    std::uint32_t w[80];
    for (int i = 0; i < 16; ++i) {
      w[i] = (static_cast<std::uint8_t>(msg[chunk + 4 * i]) << 24) |
             (static_cast<std::uint8_t>(msg[chunk + 4 * i + 1]) << 16) |
             (static_cast<std::uint8_t>(msg[chunk + 4 * i + 2]) << 8) |
             static_cast<std::uint8_t>(msg[chunk + 4 * i + 3]);
    }
    for (int i = 16; i < 80; ++i) {
      w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
    }
    std::uint32_t a = h0, b = h1, c = h2, d = h3, e = h4;
    for (int i = 0; i < 80; ++i) {
      std::uint32_t f, k;
      if (i < 20) {
        f = (b & c) | ((~b) & d);
        k = 0x5A827999;
      } else if (i < 40) {
        f = b ^ c ^ d;
        k = 0x6ED9EBA1;
      } else if (i < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8F1BBCDC;
      } else {
        f = b ^ c ^ d;
        k = 0xCA62C1D6;
      }
      std::uint32_t t = rol(a, 5) + f + e + k + w[i];
      e = d;
      d = c;
      c = rol(b, 30);
      b = a;
      a = t;
    }
    h0 += a;
    h1 += b;
    h2 += c;
    h3 += d;
    h4 += e;
  }
  std::array<std::uint32_t, 5> hs{h0, h1, h2, h3, h4};
  std::string out;
  out.reserve(40);
  const char* hex = "0123456789abcdef";
  for (std::uint32_t h : hs) {
    for (int i = 7; i >= 0; --i) out.push_back(hex[(h >> (4 * i)) & 0xF]);
  }
  return out;
}

int thread_cap() {
  if (const char* env = std::getenv("KORN_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace korn
