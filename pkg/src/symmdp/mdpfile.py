"""Line-oriented MDP file format.

::

    # comment and blank lines are allowed anywhere
    mdp <n> <m>
    v <id> <P1|R> [priority]
    e <u> <v>

Vertex ids must be dense in [0, n); edges must be unique, free of
self-loops, and every vertex needs at least one outgoing edge.  Priorities
are all-or-nothing: either every vertex record carries one or none does.
"""

from __future__ import annotations

from .generators import MdpModel


class MdpParseError(Exception):
    """Parse or validation failure, carrying a line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


def parse_mdp_text(text, name="<string>"):
    n = None
    m_declared = None
    players = {}
    priorities = {}
    edges = []
    seen_edges = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "mdp":
            if n is not None:
                raise MdpParseError("duplicate header", lineno)
            if len(parts) != 3:
                raise MdpParseError("header must be 'mdp <n> <m>'", lineno)
            try:
                n, m_declared = int(parts[1]), int(parts[2])
            except ValueError:
                raise MdpParseError("header counts must be integers", lineno)
            if n < 0 or m_declared < 0:
                raise MdpParseError("header counts must be non-negative", lineno)
        elif kind == "v":
            if n is None:
                raise MdpParseError("vertex record before header", lineno)
            if len(parts) not in (3, 4):
                raise MdpParseError("vertex record must be 'v <id> <P1|R> [priority]'", lineno)
            try:
                vid = int(parts[1])
            except ValueError:
                raise MdpParseError("vertex id must be an integer", lineno)
            if not 0 <= vid < n:
                raise MdpParseError(f"vertex id {vid} outside [0,{n})", lineno)
            if vid in players:
                raise MdpParseError(f"duplicate vertex record for {vid}", lineno)
            if parts[2] not in ("P1", "R"):
                raise MdpParseError("player must be P1 or R", lineno)
            players[vid] = parts[2]
            if len(parts) == 4:
                try:
                    prio = int(parts[3])
                except ValueError:
                    raise MdpParseError("priority must be an integer", lineno)
                if prio < 0:
                    raise MdpParseError("priority must be non-negative", lineno)
                priorities[vid] = prio
        elif kind == "e":
            if n is None:
                raise MdpParseError("edge record before header", lineno)
            if len(parts) != 3:
                raise MdpParseError("edge record must be 'e <u> <v>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise MdpParseError("edge endpoints must be integers", lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise MdpParseError(f"edge ({u},{v}) outside [0,{n})", lineno)
            if u == v:
                raise MdpParseError(f"self-loop on vertex {u} (self-loops are not allowed)", lineno)
            if (u, v) in seen_edges:
                raise MdpParseError(f"duplicate edge ({u},{v})", lineno)
            seen_edges.add((u, v))
            edges.append((u, v))
        else:
            raise MdpParseError(f"unknown record kind {kind!r}", lineno)

    if n is None:
        raise MdpParseError(f"{name}: missing 'mdp <n> <m>' header")
    missing = [v for v in range(n) if v not in players]
    if missing:
        raise MdpParseError(f"missing vertex records for ids {missing[:5]}"
                            + ("..." if len(missing) > 5 else ""))
    if m_declared != len(edges):
        raise MdpParseError(f"header declares {m_declared} edges, file has {len(edges)}")
    if priorities and len(priorities) != n:
        raise MdpParseError("priorities must be given for all vertices or none")
    out_deg = [0] * n
    for (u, _) in edges:
        out_deg[u] += 1
    for v in range(n):
        if out_deg[v] == 0:
            raise MdpParseError(f"vertex {v} has no outgoing edge")

    random_vertices = [v for v in range(n) if players[v] == "R"]
    prio_list = [priorities[v] for v in range(n)] if priorities else None
    return MdpModel(n, edges, random_vertices, prio_list, {"source": name})


def parse_mdp(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_mdp_text(fh.read(), name=str(path))


def format_mdp(model, header_comment=None):
    lines = []
    if header_comment:
        for c in header_comment.splitlines():
            lines.append(f"# {c}")
    lines.append(f"mdp {model.n} {model.m}")
    rand = set(model.random_vertices)
    for v in range(model.n):
        player = "R" if v in rand else "P1"
        if model.priorities is not None:
            lines.append(f"v {v} {player} {model.priorities[v]}")
        else:
            lines.append(f"v {v} {player}")
    for (u, v) in model.edges:
        lines.append(f"e {u} {v}")
    return "\n".join(lines) + "\n"


def write_mdp(model, path, header_comment=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_mdp(model, header_comment))
