"""Riesz bases of exponentials for regions that tile multiply by a lattice.

Typical use::

    from riesz_tiler import instances, tiling, riesz

    region = instances.hexagon3()
    table = tiling.profiles(region)
    shifts = riesz.select_shifts(table.profiles, seed=0)
    report = riesz.riesz_bounds(table.profiles, shifts)
"""

from .errors import (
    DegenerateCellError,
    DimensionError,
    NonAxisAlignedError,
    NotATilingError,
    OverlapError,
    ResolutionError,
    RieszTilerError,
    SelectionFailure,
    SingularProfileError,
    ValidationError,
)
from .geometry import (
    BoxUnion,
    Cell,
    CellComplex,
    HalfOpenBox,
    Polygon2D,
    cell_decompose,
    normalize_box_union,
    reduce_mod_unit_lattice,
    region_measure,
)
from .lattice import Lattice, NormalizationMap, density_check, dual_lattice, normalize_instance
from .riesz import (
    ProfileMatrix,
    RieszReport,
    ShiftVectors,
    build_profile_matrix,
    det_as_function_of_shifts,
    riesz_bounds,
    select_shifts,
    spectrum,
)
from .tiling import MultiplicityReport, Splitting, TranslateProfile, profiles, split, verify_tiling
from .transform import (
    SampleGrid,
    analyze,
    build_grid,
    decompose,
    empirical_frame_bounds,
    synthesize,
)

__version__ = "0.1.0"
