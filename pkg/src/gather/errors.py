"""Exception hierarchy shared by all modules."""


class GatherError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(GatherError, ValueError):
    """A caller passed something outside an operation's precondition."""


class PatternError(GatherError, ValueError):
    """The pattern-definition file is malformed or violates a library invariant."""

    def __init__(self, message: str, pattern_id: str | None = None, line: int | None = None):
        where = []
        if pattern_id is not None:
            where.append(f"pattern {pattern_id!r}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.pattern_id = pattern_id
        self.line = line


class AmbiguityError(GatherError):
    """A robot's uninhibited matches point at more than one target cell."""

    def __init__(self, message: str, robot=None):
        super().__init__(f"robot at {tuple(robot)}: {message}" if robot is not None else message)
        self.robot = robot


class InvariantError(GatherError):
    """An engine tripwire fired, e.g. the swarm lost 4-connectivity after a round."""


class LemmaViolation(GatherError):
    """A progress measure broke one of the monotonicity lemmas."""

    def __init__(self, round_index: int, measure: str, before, after):
        super().__init__(f"round {round_index}: {measure} violated ({before} -> {after})")
        self.round_index = round_index
        self.measure = measure
        self.before = before
        self.after = after
