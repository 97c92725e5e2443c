from ..helper import module_parser
from .dgp import *
from .gibbs import *

__all__ = module_parser(globals())
