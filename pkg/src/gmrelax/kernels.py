"""Kernel backend selection.

The compiled extension ``gmrelax._kernels`` is used when it imports; the
numpy fallback ``gmrelax._kernels_py`` is used otherwise.  ``BACKEND`` names
the active one.  ``get_backend`` returns either module explicitly, which is
how the tests and the benchmark compare them.
"""

from gmrelax import _kernels_py

try:
    from gmrelax import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

if _compiled is not None:
    _active = _compiled
    BACKEND = "compiled"
else:
    _active = _kernels_py
    BACKEND = "python"

SIMPLEX_OPTIMAL = _kernels_py.SIMPLEX_OPTIMAL
SIMPLEX_UNBOUNDED = _kernels_py.SIMPLEX_UNBOUNDED
SIMPLEX_ITERATION_LIMIT = _kernels_py.SIMPLEX_ITERATION_LIMIT


def available_backends():
    return ["compiled", "python"] if _compiled is not None else ["python"]


def get_backend(name=None):
    """Return the kernel module for ``name`` ("compiled" or "python")."""
    if name is None:
        return _active
    if name == "python":
        return _kernels_py
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def jacobi_eigh(a, tol=1e-14, max_sweeps=100):
    return _active.jacobi_eigh(a, tol, max_sweeps)


def hungarian(cost):
    return _active.hungarian(cost)


def simplex_iterate(tableau, basis, n_enter, max_iter, tol, bland_after=50, stall=0):
    return _active.simplex_iterate(tableau, basis, n_enter, max_iter, tol, bland_after, stall)


def pivot(tableau, r, j):
    _active.pivot(tableau, r, j)
