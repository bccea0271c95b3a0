#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include "correlations.hpp"
#include "spectra.hpp"

namespace sswm {

inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 1469598103934665603ull) {
    const unsigned char* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= b[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// %.17g: enough digits that reading the text back reproduces the double bit
// for bit, and the bytes are stable across runs.
inline void append_g17(std::string& s, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    s += buf;
}

struct OutputRecord {
    std::string path;
    std::string checksum;  // fnv1a64 of the bytes, hex
    std::size_t bytes = 0;
};

inline OutputRecord write_text_file(const std::string& path, const std::string& body) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw ConfigError("cannot open '" + path + "' for writing");
    const std::size_t n = std::fwrite(body.data(), 1, body.size(), fp);
    std::fclose(fp);
    if (n != body.size()) throw ConfigError("short write to '" + path + "'");
    return {path, hex64(fnv1a64(body.data(), body.size())), body.size()};
}

// Exports keep at most `cap` samples per axis; the stride is recorded by the
// caller so downstream tools know the decimation.
inline int export_stride(int n, int cap = 512) { return n <= cap ? 1 : n / cap; }

inline std::string spectra_csv(const SpectralField2D& f, int stride1, int stride2) {
    std::string s = "nu1,nu2,re,im,abs\n";
    s.reserve(64 + f.values.size() / std::size_t(stride1) / std::size_t(stride2) * 80);
    for (int i = 0; i < f.grid.n1; i += stride1) {
        for (int j = 0; j < f.grid.n2; j += stride2) {
            const cd v = f.at(i, j);
            append_g17(s, f.grid.nu1(i));
            s += ',';
            append_g17(s, f.grid.nu2(j));
            s += ',';
            append_g17(s, v.real());
            s += ',';
            append_g17(s, v.imag());
            s += ',';
            append_g17(s, std::abs(v));
            s += '\n';
        }
    }
    return s;
}

inline std::string r3_csv(const CorrelationSurface& surf, int stride1, int stride2) {
    std::string s = "tau31,tau32,r3\n";
    s.reserve(64 + surf.r3.size() / std::size_t(stride1) / std::size_t(stride2) * 56);
    for (int i = 0; i < surf.n1; i += stride1) {
        for (int j = 0; j < surf.n2; j += stride2) {
            append_g17(s, surf.tau1[std::size_t(i)]);
            s += ',';
            append_g17(s, surf.tau2[std::size_t(j)]);
            s += ',';
            append_g17(s, surf.at(i, j));
            s += '\n';
        }
    }
    return s;
}

inline std::string r2_csv(const ConditionalTrace& t) {
    std::string s = "tau,r2,traced_over\n";
    s.reserve(64 + t.r2.size() * 48);
    for (std::size_t k = 0; k < t.r2.size(); ++k) {
        append_g17(s, t.tau[k]);
        s += ',';
        append_g17(s, t.r2[k]);
        s += ',';
        s += t.traced_over;
        s += '\n';
    }
    return s;
}

inline std::string landscape_csv(const EitLandscape& l) {
    std::string s = "nu3,re,im\n";
    for (std::size_t k = 0; k < l.nu3.size(); ++k) {
        append_g17(s, l.nu3[k]);
        s += ',';
        append_g17(s, l.re[k]);
        s += ',';
        append_g17(s, l.im[k]);
        s += '\n';
    }
    return s;
}

}
