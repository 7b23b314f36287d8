"""Python bindings for the absim simulation core.

The heavy lifting lives in the _absim extension module; this package
re-exports its surface. See run_scenario_file() for the one-call entry
point and plan_route() for standalone chart planning.
"""

try:
    from ._absim import *  # noqa: F401,F403  (wheel layout)
except ImportError:  # pragma: no cover - source/build-tree layout
    from _absim import *  # noqa: F401,F403
