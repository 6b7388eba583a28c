#ifndef AFS_TOUCHSTONE_HPP
#define AFS_TOUCHSTONE_HPP

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "afs/core.hpp"

namespace afs {

/// Touchstone 1.x subset: .sNp files with an option line
/// "# <unit> S <RI|MA|DB> R <ref>" and row-major per-frequency blocks
/// (2-port files use the standard S21-before-S12 ordering). Values are
/// returned as complex regardless of storage format.
namespace touchstone {

enum class Format { RI, MA, DB };

struct File {
    int ports = 0;
    double reference_ohm = 50.0;
    SampleSet samples;  // frequencies ascending, s = j*2*pi*f
};

namespace detail {

inline int ports_from_extension(const std::string& path) {
    auto dot = path.rfind('.');
    if (dot == std::string::npos) return 0;
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(c));
    if (ext.size() < 3 || ext.front() != 's' || ext.back() != 'p') return 0;
    try {
        return std::stoi(ext.substr(1, ext.size() - 2));
    } catch (...) {
        return 0;
    }
}

inline Complex decode(Format fmt, double a, double b) {
    switch (fmt) {
        case Format::RI: return {a, b};
        case Format::MA: return std::polar(a, b * std::numbers::pi / 180.0);
        case Format::DB: return std::polar(std::pow(10.0, a / 20.0), b * std::numbers::pi / 180.0);
    }
    throw std::logic_error("touchstone: unknown format");
}

}  // namespace detail

inline File parse(std::istream& in, int ports) {
    if (ports < 1) throw std::invalid_argument("touchstone: invalid port count");
    File out;
    out.ports = ports;

    Format fmt = Format::MA;  // Touchstone default
    double unit = 1e9;        // default GHz
    bool have_options = false;

    std::vector<double> numbers;  // pending numeric stream
    std::string line;
    while (std::getline(in, line)) {
        if (auto bang = line.find('!'); bang != std::string::npos) line.erase(bang);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "#") {
            if (have_options) throw std::runtime_error("touchstone: repeated option line");
            have_options = true;
            std::string tok;
            bool have_param = false;
            while (ls >> tok) {
                std::string u = tok;
                for (char& c : u) c = static_cast<char>(std::toupper(c));
                if (u == "HZ") unit = 1.0;
                else if (u == "KHZ") unit = 1e3;
                else if (u == "MHZ") unit = 1e6;
                else if (u == "GHZ") unit = 1e9;
                else if (u == "S") have_param = true;
                else if (u == "RI") fmt = Format::RI;
                else if (u == "MA") fmt = Format::MA;
                else if (u == "DB") fmt = Format::DB;
                else if (u == "R") {
                    if (!(ls >> out.reference_ohm))
                        throw std::runtime_error("touchstone: missing reference impedance");
                } else {
                    throw std::runtime_error("touchstone: unknown option token '" + tok + "'");
                }
            }
            if (!have_param) throw std::runtime_error("touchstone: only S-parameters supported");
            continue;
        }
        // data line: plain numbers
        std::istringstream ds(line);
        double x;
        while (ds >> x) numbers.push_back(x);
        if (!ds.eof()) throw std::runtime_error("touchstone: malformed data line '" + line + "'");
    }

    const std::size_t per_block = 1 + 2 * static_cast<std::size_t>(ports) * ports;
    if (numbers.empty() || numbers.size() % per_block != 0)
        throw std::runtime_error("touchstone: truncated matrix block");

    double prev_freq = -1.0;
    for (std::size_t off = 0; off < numbers.size(); off += per_block) {
        const double f_hz = numbers[off] * unit;
        if (f_hz <= prev_freq) throw std::runtime_error("touchstone: non-ascending frequency");
        prev_freq = f_hz;
        CMatrix v(ports, ports);
        std::size_t k = off + 1;
        if (ports == 2) {
            // S11 S21 S12 S22
            v(0, 0) = detail::decode(fmt, numbers[k], numbers[k + 1]);
            v(1, 0) = detail::decode(fmt, numbers[k + 2], numbers[k + 3]);
            v(0, 1) = detail::decode(fmt, numbers[k + 4], numbers[k + 5]);
            v(1, 1) = detail::decode(fmt, numbers[k + 6], numbers[k + 7]);
        } else {
            for (int i = 0; i < ports; ++i)
                for (int j = 0; j < ports; ++j, k += 2)
                    v(i, j) = detail::decode(fmt, numbers[k], numbers[k + 1]);
        }
        out.samples.add(Complex(0.0, kTwoPi * f_hz), std::move(v));
    }
    return out;
}

inline File load(const std::string& path) {
    const int ports = detail::ports_from_extension(path);
    if (ports < 1)
        throw std::invalid_argument("touchstone: cannot infer port count from '" + path + "'");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("touchstone: cannot open '" + path + "'");
    return parse(in, ports);
}

}  // namespace touchstone

/// Touchstone playback entry point named per the data-flow role: recorded
/// S-parameters become an in-memory sample set.
inline SampleSet load_touchstone(const std::string& path) { return touchstone::load(path).samples; }

}  // namespace afs

#endif  // AFS_TOUCHSTONE_HPP
