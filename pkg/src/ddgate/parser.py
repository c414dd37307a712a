"""Line-oriented text formats: sequence records and flat config files.

Sequence text is one record per line::

    QUBITS 2
    EVOLVE 1
    PULSE +XX
    EVOLVE 2

Config text is ``key = value`` per line with ``#`` comments.
"""

from typing import Optional

from .exceptions import ConfigError
from .pauli import PauliString


class SequenceParser:
    """Parser for ``QUBITS`` / ``PULSE`` / ``EVOLVE`` records."""

    __slots__ = ('n_qubits', 'steps', '_line_no')

    _QUBITS = 'QUBITS'
    _PULSE = 'PULSE'
    _EVOLVE = 'EVOLVE'

    def __init__(self) -> None:
        self.n_qubits: Optional[int] = None
        self.steps: list = []
        self._line_no = 0

    @classmethod
    def parse(cls, text: str, name: str = "custom"):
        """Parse sequence text into a ``DDSequence``."""
        from .sequence import DDSequence

        parser = cls()
        for line in text.splitlines():
            parser.feed_line(line)
        return DDSequence(parser.n_qubits or 1, tuple(parser.steps), name)

    def feed_line(self, line: str) -> None:
        from .sequence import Interval, Pulse

        self._line_no += 1
        line = line.split('#', 1)[0].strip()
        if not line:
            return
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"Line {self._line_no}: expected '<RECORD> <value>', got {line!r}")
        record, value = parts[0].upper(), parts[1]

        if record == self._QUBITS:
            self.n_qubits = int(value)
        elif record == self._PULSE:
            pauli = PauliString.parse(value)
            if self.n_qubits is None:
                self.n_qubits = pauli.n_qubits
            self.steps.append(Pulse(pauli))
        elif record == self._EVOLVE:
            self.steps.append(Interval(int(value)))
        else:
            raise ValueError(f"Line {self._line_no}: unknown record {parts[0]!r}")


class SequenceTextBuilder:
    """Inverse of ``SequenceParser``."""

    _HEADER = 'QUBITS {n}'
    _PULSE = 'PULSE {p}'
    _EVOLVE = 'EVOLVE {k}'

    @staticmethod
    def build(seq) -> str:
        from .sequence import Pulse

        lines = [SequenceTextBuilder._HEADER.format(n=seq.n_qubits)]
        for step in seq.steps:
            if isinstance(step, Pulse):
                lines.append(SequenceTextBuilder._PULSE.format(p=step.pauli))
            else:
                lines.append(SequenceTextBuilder._EVOLVE.format(k=step.index))
        return '\n'.join(lines) + '\n'


class ConfigParser:
    """Flat ``key = value`` parser; keys are case-sensitive, duplicates rejected."""

    __slots__ = ('values', '_line_no')

    _SEPARATOR = '='
    _COMMENT = '#'

    def __init__(self) -> None:
        self.values: dict[str, str] = {}
        self._line_no = 0

    @classmethod
    def parse(cls, text: str) -> dict[str, str]:
        parser = cls()
        for line in text.splitlines():
            parser.feed_line(line)
        return parser.values

    def feed_line(self, line: str) -> None:
        self._line_no += 1
        line = line.split(self._COMMENT, 1)[0].strip()
        if not line:
            return
        sep = line.find(self._SEPARATOR)
        if sep <= 0:
            raise ConfigError(f"Line {self._line_no}: expected 'key = value', got {line!r}")
        key = line[:sep].strip()
        value = line[sep + 1:].strip()
        if key in self.values:
            raise ConfigError(f"Line {self._line_no}: duplicate key {key!r}", key)
        self.values[key] = value


class ConfigTextBuilder:
    _LINE = '{key} = {value}'

    @staticmethod
    def build(values: dict[str, str]) -> str:
        return ''.join(ConfigTextBuilder._LINE.format(key=k, value=v) + '\n' for k, v in values.items())
