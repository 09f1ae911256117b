"""casloop: Casimir dispersion forces from closed scattering loops.

Library and CLI for multiple-scattering dispersion forces between
magneto-dielectric spheres on the imaginary frequency axis, plus the
closed-geodesic loop machinery of the exactly solvable 2D toy model.
"""

__version__ = "0.1.0"

from .media import (                                        # noqa: F401,E402
    SphereSystem,
    MaterialModel,
    VACUUM,
    constant_material,
    drude_lorentz_material,
    effective_metric,
    christoffel,
)
from .scattering import mie_coefficients, born_coefficients  # noqa: F401
from .translation import (                                   # noqa: F401
    scalar_translation,
    vector_translation,
    translation_oracle,
)
from .loopalgebra import (                                    # noqa: F401
    LoopWord,
    enumerate_loop_words,
    path_ordered_product,
    z_function,
)
from .force import casimir_force, thermal_weight              # noqa: F401
from .geodesic import (                                       # noqa: F401
    ToyModelSpec,
    solve_closed_geodesic,
    toy_orbit,
    orbit_length,
    winding_sum,
    toy_z,
    toy_force,
)
