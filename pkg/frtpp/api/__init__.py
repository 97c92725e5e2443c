from ..helper import module_parser
from .executor import *
from .grid import *
from .checkpoint import *
from .harness import *

__all__ = module_parser(globals())
