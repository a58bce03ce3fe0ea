import importlib.metadata
import logging

from ._logging import configure_logger

__version__ = importlib.metadata.version("bwangle")

log = logging.getLogger("bwangle")
configure_logger(log)

from ._settings import settings
from . import space
from . import geometry
from . import csb
from . import classify
from . import corners
from . import axioms
from . import io
from .space import SpaceDescriptor, hexagon, hoelder, line, parse_space, pathological, polygon, product_space
from .geometry import rho_angle, rho_product
from .csb import csb_sup, has_angle
from .classify import upsilon
