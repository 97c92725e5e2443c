import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Tuple, Hashable

logger = logging.getLogger(__name__)


# DataClasses
@dataclass
class Task:
    """
    A picklable unit of work.

    Attributes:
        function (Callable): Module level function, so it can cross process boundaries.
        args (tuple): Positional arguments.
        kwargs (dict): Keyword arguments.
        key (Hashable): Identifies the result when outputs arrive out of order.
        desc (str): Optional label for logs.
    """
    function: Callable
    args: Tuple = ()
    kwargs: Dict = field(default_factory=dict)
    key: Optional[Hashable] = None
    desc: Optional[str] = None

    def partial(self):
        return partial(self.function, *self.args, **self.kwargs)

    def __repr__(self):
        if self.desc:
            string = f'<Task: {self.desc}>'
        else:
            string = f"<Task: '{self.function.__name__}'>"
        return string


@dataclass
class Output:
    task: Task
    returned: Any

    @property
    def key(self) -> Optional[Hashable]:
        return self.task.key

    def __repr__(self):
        return f"Output(task={str(self.task)}, returned={self.returned is not None})"


# MainClasses
class Executor:
    """
    Runs tasks inline or over a process pool and yields their outputs.

    Outputs arrive in completion order; callers merge them by `Output.key`.
    With a single worker tasks run in submission order in this process.

    Methods:
    - run: Execute tasks and yield one Output each.
    - clear: Drop the recorded history.
    """
    def __init__(self, max_workers: int = 1):
        if max_workers < 1:
            raise ValueError(f"max_workers must be positive, got {max_workers}")
        self.max_workers = max_workers
        self.history: List[Output] = []

    def run(self, tasks: Iterable[Task]) -> Iterator[Output]:
        tasks = list(tasks)
        if not tasks:
            return
        logger.debug("executing %d tasks on %d worker(s)", len(tasks), self.max_workers)
        if self.max_workers == 1 or len(tasks) == 1:
            for task in tasks:
                yield self._record(Output(task=task, returned=task.partial()()))
            return
        with ProcessPoolExecutor(max_workers=self.max_workers) as pool:
            futures = {pool.submit(task.partial()): task for task in tasks}
            for future in as_completed(futures):
                yield self._record(Output(task=futures[future], returned=future.result()))

    def _record(self, output: Output) -> Output:
        self.history.append(output)
        return output

    def clear(self):
        while len(self.history):
            output = self.history.pop()
            del output
