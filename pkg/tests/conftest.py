"""Pin BLAS to one thread before numpy loads: the per-step matrix products
are small enough that thread fan-out roughly doubles their cost on small
machines, and a fixed thread count keeps results reproducible."""

import os

for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(_var, "1")
