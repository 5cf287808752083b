#include "tetsplat/parallel.hpp"

#if defined(TETSPLAT_HAVE_OPENMP)
#include <omp.h>
#endif

namespace tetsplat
{
    void set_thread_count(int threads)
    {
#if defined(TETSPLAT_HAVE_OPENMP)
        if (threads > 0)
            omp_set_num_threads(threads);
#else
        (void)threads;
#endif
    }

    int thread_count()
    {
#if defined(TETSPLAT_HAVE_OPENMP)
        return omp_get_max_threads();
#else
        return 1;
#endif
    }
}
