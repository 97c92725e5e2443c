import types

__ignores__ = ['re', 'os', 'sys', 'types', 'math', 'json', 'logging', 'warnings', 'np', 'pd']

def module_parser(objects, class_only: bool = False):
    # parse package namespace into the names worth exporting
    package = objects.get('__name__', '')
    _functions = []
    _classes = []
    _modules = []

    for k, v in dict(objects).items():
        if k.startswith('_') or k in __ignores__:
            continue
        if isinstance(v, types.ModuleType):
            # only submodules of this package, never third party imports
            if v.__name__.startswith(f"{package}."):
                _modules.append(k)
        elif isinstance(v, (type, types.FunctionType)):
            if getattr(v, '__module__', '').startswith(f"{package}."):
                if isinstance(v, type):
                    _classes.append(k)
                elif k != 'module_parser':
                    _functions.append(k)

    if class_only:
        return _classes
    else:
        return _functions + _classes + _modules
