#pragma once

namespace tetsplat
{
    inline constexpr const char * kVersion = "0.1.0";

    /// Worker threads used for per-view evaluation; no-op without OpenMP.
    void set_thread_count(int threads);
    int thread_count();
}
