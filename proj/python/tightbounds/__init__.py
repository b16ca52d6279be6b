try:
    from ._tightbounds import *  # noqa: F401,F403  (installed layout)
except ImportError:
    from _tightbounds import *  # noqa: F401,F403  (build-tree layout)
