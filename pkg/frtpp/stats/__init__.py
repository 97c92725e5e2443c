from ..helper import module_parser
from .rng import *
from .dist import *

__all__ = module_parser(globals())
