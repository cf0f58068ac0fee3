#include "mitl/rational.hpp"

namespace mitl {

Rat parse_rat(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    long long n = std::stoll(text.substr(0, slash));
    long long d = std::stoll(text.substr(slash + 1));
    return Rat(n, d);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
    if (fp.empty()) return Rat(std::stoll(ip));
    long long den = 1;
    for (size_t i = 0; i < fp.size(); ++i) den *= 10;
    bool neg = !ip.empty() && ip[0] == '-';
    long long whole = ip.empty() || ip == "-" ? 0 : std::stoll(ip);
    long long frac = std::stoll(fp);
    long long num = (neg ? -1 : 1) * ((neg ? -whole : whole) * den + frac);
    return Rat(num, den);
  }
  return Rat(std::stoll(text));
}

}  // namespace mitl
