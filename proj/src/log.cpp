#include "chemoblow/log.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace chemoblow::log {

Level level() {
    static const Level lvl = [] {
        const char* env = std::getenv("CHEMOBLOW_LOG");
        if (env == nullptr) return Level::error;
        if (std::strcmp(env, "debug") == 0) return Level::debug;
        if (std::strcmp(env, "info") == 0) return Level::info;
        return Level::error;
    }();
    return lvl;
}

void write(Level lvl, const char* fmt, ...) {
    if (static_cast<int>(lvl) > static_cast<int>(level())) return;
    const char* tag = lvl == Level::error ? "error" : (lvl == Level::info ? "info" : "debug");
    std::fprintf(stderr, "[chemoblow %s] ", tag);
    std::va_list args;
    va_start(args, fmt);
    std::vfprintf(stderr, fmt, args);
    va_end(args);
    std::fputc('\n', stderr);
}

} // namespace chemoblow::log
