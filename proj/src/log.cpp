#include "giso/error.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace giso {
namespace {
std::atomic<bool> g_enabled{true};
std::mutex g_mutex;
}  // namespace

void warn(const std::string& message) {
  if (!g_enabled.load(std::memory_order_relaxed)) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_enabled.store(enabled); }

bool warnings_enabled() { return g_enabled.load(); }

}  // namespace giso
