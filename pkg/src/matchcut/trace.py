"""Role annotations linking constructed vertices back to their source.

Every construction in the package returns a :class:`ReductionTrace` next to the
graph it built.  Traces are what make witness transport possible: a colouring
of the constructed graph is pulled back by reading the colours of the vertices
tagged ``original`` (or ``hub``), and pushed forward by walking the roles of
the gadget vertices.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

ROLE_KINDS = frozenset(
    {
        "original",
        "hub",
        "cycle-port",
        "clause-port",
        "aux-a",
        "aux-b",
        "clause-vertex",
        "star-vertex",
        "immune-internal",
        "strip-u",
        "strip-v",
        "column-top",
        "column-bottom",
        "subdivision-point",
    }
)


@dataclass(frozen=True)
class Role:
    """What a single constructed vertex stands for.

    ``origin`` names the source object (a source vertex, a source edge ``(u, v)``,
    a clause index, a copy index); ``index`` locates the vertex inside the
    gadget that was built for that object.
    """

    kind: str
    origin: tuple[int, ...] = ()
    index: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ROLE_KINDS:
            raise ValueError(f"unknown role kind {self.kind!r}")


@dataclass
class ReductionTrace:
    """One role per vertex plus free-form layout data for witness transport."""

    roles: list[Role] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.roles)

    def __iter__(self) -> Iterator[Role]:
        return iter(self.roles)

    def role(self, v: int) -> Role:
        return self.roles[v]

    def set(self, v: int, role: Role) -> None:
        if v < len(self.roles):
            self.roles[v] = role
        elif v == len(self.roles):
            self.roles.append(role)
        else:
            raise IndexError(f"role for vertex {v} set before vertex {len(self.roles)}")

    def vertices(self, kind: str) -> list[int]:
        return [v for v, r in enumerate(self.roles) if r.kind == kind]

    def by_kind(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = defaultdict(list)
        for v, r in enumerate(self.roles):
            out[r.kind].append(v)
        return dict(out)

    def originals(self, copy: int | None = None) -> dict[int, int]:
        """Map source vertex -> constructed vertex for ``original`` roles.

        Constructions holding several copies of the source tag each copy with
        ``index = (copy,)``; ``copy=None`` selects the untagged originals.
        """
        want = () if copy is None else (copy,)
        out = {}
        for v, r in enumerate(self.roles):
            if r.kind == "original" and r.index == want:
                out[r.origin[0]] = v
        return out

    def validate(self, n: int) -> None:
        if len(self.roles) != n:
            raise ValueError(f"trace has {len(self.roles)} roles for {n} vertices")
        seen: set[tuple[int, tuple[int, ...]]] = set()
        for r in self.roles:
            if r.kind == "original":
                key = (r.origin[0], r.index)
                if key in seen:
                    raise ValueError(f"source vertex {r.origin[0]} tagged original twice")
                seen.add(key)


def format_roles(roles: Iterable[Role]) -> str:
    """Sidecar text: one ``r <id> <kind> <origin> <index>`` line per vertex.

    Ids are 1-based; origin and index are comma-joined integers, ``-`` if empty.
    """

    def ints(t: tuple[int, ...]) -> str:
        return ",".join(str(x) for x in t) if t else "-"

    lines = [f"r {v + 1} {r.kind} {ints(r.origin)} {ints(r.index)}" for v, r in enumerate(roles)]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_roles(text: str) -> list[Role]:
    roles: dict[int, Role] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] != "r" or len(parts) != 5:
            raise ValueError(f"line {lineno}: malformed role line {line!r}")

        def ints(tok: str) -> tuple[int, ...]:
            return () if tok == "-" else tuple(int(x) for x in tok.split(","))

        roles[int(parts[1]) - 1] = Role(parts[2], ints(parts[3]), ints(parts[4]))
    if sorted(roles) != list(range(len(roles))):
        raise ValueError("role ids are not contiguous")
    return [roles[v] for v in range(len(roles))]
