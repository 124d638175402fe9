"""Quantum Prisoners' Dilemma on cluster states.

Subpackages and modules:

* ``qsim``     - dense state-vector / density-matrix simulator
* ``game``     - circuit-model game, payoff surfaces, equilibrium search
* ``cluster``  - measurement-based backends and convention calibration
* ``noise``    - angle-noise and mixed-input imperfection studies
* ``kernels``  - batch evaluation (compiled core with numpy fallback)
* ``backends`` - round dispatch across circuit/box/wafer
* ``service``  - stateless JSON API
* ``cli``      - command-line entry point
"""

from . import backends, cluster, game, kernels, noise, qsim, verify  # noqa: F401

__version__ = "0.1.0"
