"""Line-oriented filter scripts: the batch equivalent of the interactive
filter queue.

Grammar (one statement per line, '#' starts a comment):

    remove             cc  ID...
    remove_complement  cc  ID...
    add                cc  ID...
    fix                cc  ID...
    remove             ppe P Q            # configurations where P and Q touch
    remove_complement  ppe P Q
    remove             ppc P Q CC...      # specific pair interfaces
    remove             aap P:SEQ Q:SEQ [P:SEQ Q:SEQ ...]
    remove_complement  aap P:SEQ Q:SEQ
    remove             aa  P:SEQ...
    remove_complement  aa  P:SEQ...
    range              cc  PROPERTY MIN MAX
    range              aa  PROPERTY MIN MAX [scope P]
    range              aap PROPERTY MIN MAX [scope P Q]
    primary_protein    P
    primary_ppe        P Q
    primary_cc         CC
    primary_ppc        P Q CC

Amino-acid tokens are `PROTEIN:SEQ`; a residue-letter prefix before the
sequence number is tolerated (`A:R299` == `A:299`). MIN/MAX accept `-inf`
and `inf`. Statements execute in order; filter statements append to the
queue exactly like interactive filter creation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import InputError
from .filters import KINDS, FilterQueue, SubjectSpec
from .hierarchy import aap_key, pair_key
from .session import Session

__all__ = ["Statement", "parse_script", "run_script", "script_from_queue"]

_AA_TOKEN = re.compile(r"^(?P<protein>.+):(?:[A-Za-z]{0,3})?(?P<seq>-?\d+)$")

FILTER_KINDS = tuple(k for k in KINDS if k != "range")
PRIMARY_KINDS = ("primary_protein", "primary_ppe", "primary_cc", "primary_ppc")


@dataclass(frozen=True)
class Statement:
    line_number: int
    kind: str  # filter kind, 'range', or a primary_* directive
    subject: SubjectSpec | None = None
    args: tuple[str, ...] = ()


def _parse_aa(token: str, line_no: int) -> tuple[str, int]:
    match = _AA_TOKEN.match(token)
    if not match:
        raise InputError(
            f"script line {line_no}: bad amino-acid token {token!r} "
            "(expected PROTEIN:SEQ)"
        )
    return (match.group("protein"), int(match.group("seq")))


def _parse_bound(token: str, line_no: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise InputError(f"script line {line_no}: bad range bound {token!r}") from None


def _parse_subject(level: str, args: list[str], line_no: int) -> SubjectSpec:
    if not args:
        raise InputError(f"script line {line_no}: empty selector")
    if level == "cc":
        return SubjectSpec.ccs(args)
    if level == "ppe":
        if len(args) != 2:
            raise InputError(f"script line {line_no}: ppe selector needs two proteins")
        return SubjectSpec.pair_contact(args[0], args[1])
    if level == "ppc":
        if len(args) < 3:
            raise InputError(
                f"script line {line_no}: ppc selector needs two proteins plus cc ids"
            )
        pair = pair_key(args[0], args[1])
        return SubjectSpec.ppcs((pair, cc) for cc in args[2:])
    if level == "aap":
        if len(args) % 2 != 0:
            raise InputError(
                f"script line {line_no}: aap selector needs amino-acid token pairs"
            )
        keys = [
            aap_key(_parse_aa(args[i], line_no), _parse_aa(args[i + 1], line_no))
            for i in range(0, len(args), 2)
        ]
        return SubjectSpec.aaps(keys)
    if level == "aa":
        return SubjectSpec.aas(_parse_aa(tok, line_no) for tok in args)
    raise InputError(f"script line {line_no}: unknown level {level!r}")


def _parse_range(args: list[str], line_no: int) -> SubjectSpec:
    if len(args) < 4:
        raise InputError(
            f"script line {line_no}: range needs LEVEL PROPERTY MIN MAX"
        )
    level, prop = args[0], args[1]
    lo = _parse_bound(args[2], line_no)
    hi = _parse_bound(args[3], line_no)
    scope: tuple[str, ...] | None = None
    rest = args[4:]
    if rest:
        if rest[0] != "scope":
            raise InputError(f"script line {line_no}: unexpected token {rest[0]!r}")
        scope = tuple(rest[1:])
        if not scope:
            raise InputError(f"script line {line_no}: empty scope")
    return SubjectSpec.property_range(prop, lo, hi, level=level, scope=scope)


def parse_script(text: str) -> list[Statement]:
    statements: list[Statement] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        word, args = tokens[0], tokens[1:]
        if word in PRIMARY_KINDS:
            expected = {"primary_protein": 1, "primary_ppe": 2, "primary_cc": 1, "primary_ppc": 3}
            if len(args) != expected[word]:
                raise InputError(
                    f"script line {line_no}: {word} needs {expected[word]} argument(s)"
                )
            statements.append(Statement(line_no, word, args=tuple(args)))
        elif word == "range":
            statements.append(Statement(line_no, "range", _parse_range(args, line_no)))
        elif word in FILTER_KINDS:
            if not args:
                raise InputError(f"script line {line_no}: missing level")
            statements.append(
                Statement(line_no, word, _parse_subject(args[0], args[1:], line_no))
            )
        else:
            raise InputError(f"script line {line_no}: unknown statement {word!r}")
    return statements


def run_script(session: Session, text: str) -> None:
    """Execute a script against a session, statement by statement."""
    for stmt in parse_script(text):
        if stmt.kind == "primary_protein":
            session.set_primary(protein=stmt.args[0])
        elif stmt.kind == "primary_ppe":
            session.set_primary(ppe=(stmt.args[0], stmt.args[1]))
        elif stmt.kind == "primary_cc":
            session.set_primary(cc=stmt.args[0])
        elif stmt.kind == "primary_ppc":
            session.set_primary(ppc=((stmt.args[0], stmt.args[1]), stmt.args[2]))
        else:
            session.add_filter(stmt.kind, stmt.subject)


def _subject_text(spec: SubjectSpec) -> str:
    if spec.prop is not None:
        scope = f" scope {' '.join(spec.scope)}" if spec.scope else ""
        return f"{spec.level} {spec.prop} {spec.lo:g} {spec.hi:g}{scope}"
    if spec.level == "cc":
        return "cc " + " ".join(sorted(spec.cc_ids))
    if spec.level == "ppe":
        return "ppe " + " ".join(sorted(spec.pairs)[0])
    if spec.level == "ppc":
        by_pair = sorted(spec.ppc_ids)
        pair = by_pair[0][0]
        return f"ppc {pair[0]} {pair[1]} " + " ".join(cc for _, cc in by_pair)
    if spec.level == "aap":
        toks = []
        for a, b in sorted(spec.aap_keys):
            toks += [f"{a[0]}:{a[1]}", f"{b[0]}:{b[1]}"]
        return "aap " + " ".join(toks)
    return "aa " + " ".join(f"{p}:{s}" for p, s in sorted(spec.aa_ids))


def script_from_queue(queue: FilterQueue) -> str:
    """Serialize the current queue back to the script grammar (evaluation
    order). Disabled filters are emitted as comments."""
    lines = []
    for record in queue.in_eval_order():
        kind = "range" if record.kind == "range" else record.kind
        line = f"{kind} {_subject_text(record.subject)}"
        lines.append(line if record.enabled else f"# disabled: {line}")
    return "\n".join(lines) + ("\n" if lines else "")
