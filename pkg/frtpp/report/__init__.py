from ..helper import module_parser
from .figure import *
from .table import *
from .svg import *
from .build import *

__all__ = module_parser(globals())
