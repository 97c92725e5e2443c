from ..helper import module_parser
from .statistic import *
from .pvalue import *
from .exact import *

__all__ = module_parser(globals())
