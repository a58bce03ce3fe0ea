from ._families import (
    Hexagon,
    Hoelder,
    PathologicalA,
    PolygonSphere,
    Product,
    RadialTable,
    WeightFamily,
    format_extended,
    parse_extended,
)
from .descriptor import (
    SpaceDescriptor,
    hexagon,
    hoelder,
    line,
    parse_space,
    pathological,
    polygon,
    product_space,
    radial_table,
    space_from_dict,
    space_to_dict,
)
from .weights import (
    SphereSample,
    eval_weight,
    normalize,
    radius,
    sample_unit_sphere,
    sphere_polyline,
    unit_points,
)
from .structure import StructureReport, structure_report
