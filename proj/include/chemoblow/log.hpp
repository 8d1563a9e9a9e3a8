#pragma once

// Minimal stderr logger gated by the CHEMOBLOW_LOG environment variable
// (error, info, debug). Default level is error.

namespace chemoblow::log {

enum class Level { error = 0, info = 1, debug = 2 };

Level level();

void write(Level lvl, const char* fmt, ...)
#if defined(__GNUC__)
    __attribute__((format(printf, 2, 3)))
#endif
    ;

} // namespace chemoblow::log

#define CB_LOG_ERROR(...) ::chemoblow::log::write(::chemoblow::log::Level::error, __VA_ARGS__)
#define CB_LOG_INFO(...) ::chemoblow::log::write(::chemoblow::log::Level::info, __VA_ARGS__)
#define CB_LOG_DEBUG(...) ::chemoblow::log::write(::chemoblow::log::Level::debug, __VA_ARGS__)
