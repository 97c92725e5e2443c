from ..helper import module_parser
from .reference import *
from .params import *
from .scenario import *
from .dataset import *
from .items import *
from .io import *

__all__ = module_parser(globals())
