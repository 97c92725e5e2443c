import sys
from contextlib import contextmanager
from typing import Iterator, Tuple, Union


def colored(string: str, color: Union[str, Tuple[int, int, int]] = 'red') -> str:
    # Define color codes for the few colors the CLI uses
    color_codes = {
        'red': '0;31',
        'green': '0;32',
        'yellow': '0;33',
        'blue': '0;34',
        'reset': '0',
    }

    # If color is specified as an RGB tuple (r, g, b)
    if isinstance(color, tuple) and len(color) == 3:
        r, g, b = color
        color_code = f'38;2;{r};{g};{b}'
    else:
        color_code = color_codes.get(color.lower(), color_codes['red'])

    # plain text when the stream is not a terminal, keeps redirected logs clean
    if not sys.stderr.isatty():
        return string
    return f'\033[{color_code}m{string}\033[0m'


def message(string: str, io: str = 'stderr'):
    stream = sys.stdout if io == 'stdout' else sys.stderr
    stream.write(string)
    stream.flush()


@contextmanager
def status(label: str) -> Iterator[None]:
    """
    Print a `+ label...` progress line to stderr and close it with done/failed.
    """
    message(f"+ {label}...")
    try:
        yield
    except BaseException:
        message(colored("failed\n", color='red'))
        raise
    message(colored("done\n", color='blue'))
