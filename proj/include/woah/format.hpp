#ifndef WOAH_FORMAT_HPP
#define WOAH_FORMAT_HPP

#include <cstdio>
#include <string>

namespace woah {

// Shortest representation with up to 12 significant digits. Used everywhere
// a real number is serialized, so identical runs serialize identically.
inline std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

// Same, but guaranteed to read back as a JSON number with a fractional
// part ("1" becomes "1.0").
inline std::string format_real_json(double value) {
    std::string s = format_real(value);
    if (s.find('.') == std::string::npos &&
        s.find('e') == std::string::npos &&
        s.find('n') == std::string::npos &&  // nan/inf guards
        s.find('i') == std::string::npos)
        s += ".0";
    return s;
}

}  // namespace woah

#endif  // WOAH_FORMAT_HPP
