import json
import logging
import os
from pathlib import Path
from typing import Dict, Tuple, Union
from ..dataobj import ReplicationOutcome
from ..error import ChecksumMismatchError, InvalidFormatError
from ..helper import ensure_parent

logger = logging.getLogger(__name__)

CellKey = Tuple[str, str, int]


class Checkpoint:
    """
    Append-only JSON lines record of finished cells.

    The first line holds the grid checksum, every further line one
    (scenario, method, replication) outcome. A truncated last line, left by an
    interrupted write, is ignored.

    Methods:
    - load: Return the outcomes recorded so far, writing the header on a fresh file.
    - append: Record one finished cell.
    """
    def __init__(self, path: Union[str, os.PathLike], checksum: str):
        self.path = Path(path)
        self.checksum = checksum

    def load(self) -> Dict[CellKey, ReplicationOutcome]:
        if not self.path.exists() or self.path.stat().st_size == 0:
            with open(ensure_parent(self.path), "w", encoding="utf-8") as f:
                f.write(json.dumps({"checksum": self.checksum}) + "\n")
            return {}

        with open(self.path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()
        try:
            header = json.loads(lines[0])
        except (json.JSONDecodeError, IndexError) as err:
            raise InvalidFormatError([f"checkpoint-header: {err}"], context=str(self.path))
        if header.get("checksum") != self.checksum:
            raise ChecksumMismatchError(
                f"{self.path} was written for grid {header.get('checksum')}, not {self.checksum}")

        done = {}
        for number, line in enumerate(lines[1:], start=2):
            try:
                record = json.loads(line)
            except json.JSONDecodeError:
                if number == len(lines):
                    logger.warning("%s: dropping truncated last line", self.path)
                    self._rewrite(lines[:-1])
                    continue
                raise InvalidFormatError([f"checkpoint-line {number}: not JSON"], context=str(self.path))
            key = (record["scenario"], record["method"], int(record["rep"]))
            done[key] = ReplicationOutcome(int(record["rep"]), record["p_value"], record["reject"],
                                           int(record["degenerate"]))
        logger.info("resuming from %s: %d cells already done", self.path, len(done))
        return done

    def _rewrite(self, lines):
        with open(self.path, "w", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")

    def append(self, key: CellKey, outcome: ReplicationOutcome):
        scenario, method, rep = key
        record = {"scenario": scenario, "method": method, "rep": rep, "p_value": outcome.p_value,
                  "reject": outcome.reject, "degenerate": outcome.degenerate_draws}
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(json.dumps(record) + "\n")
