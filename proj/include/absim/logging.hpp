#pragma once

#include <string>

namespace absim {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Diagnostics go to stderr; verbosity comes from the ABSIM_LOG environment
// variable (error, warn, info, debug), default warn.
LogLevel log_level();
void set_log_level(LogLevel level);

void log(LogLevel level, const std::string& msg);

inline void log_error(const std::string& msg) { log(LogLevel::Error, msg); }
inline void log_warn(const std::string& msg) { log(LogLevel::Warn, msg); }
inline void log_info(const std::string& msg) { log(LogLevel::Info, msg); }
inline void log_debug(const std::string& msg) { log(LogLevel::Debug, msg); }

} // namespace absim
