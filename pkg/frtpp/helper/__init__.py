from .path import *
from .output import *
from .module import *
from .digest import *


__all__ = module_parser(globals())
