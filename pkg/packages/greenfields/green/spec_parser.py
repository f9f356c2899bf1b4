"""
Functor spec strings, e.g. ``cut(shift(burnside(Q),C2xC2),eTop)``.
"""

from __future__ import annotations

import re
import threading

import structlog

from algebra.errors import SpecSyntaxError
from algebra.groups import make_group
from algebra.scalars import field_from_token
from green.functors import (
    Burnside,
    ConstantField,
    GreenFunctor,
    IdempotentCut,
    LinRepC,
    LinRepQSpan,
    Shift,
    top_idempotent,
)

logger = structlog.get_logger()

_functors: dict[str, GreenFunctor] = {}
_functors_lock = threading.RLock()

_CALL = re.compile(r"([A-Za-z]+)\((.*)\)")


def clear_functor_cache():
    with _functors_lock:
        _functors.clear()


def _split_args(body: str) -> list[str]:
    """Split on top-level commas."""
    args, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise SpecSyntaxError(f"unbalanced parentheses in {body!r}")
        elif ch == "," and depth == 0:
            args.append(body[start:i].strip())
            start = i + 1
    if depth:
        raise SpecSyntaxError(f"unbalanced parentheses in {body!r}")
    args.append(body[start:].strip())
    return args


def _build(text: str) -> GreenFunctor:
    m = _CALL.fullmatch(text)
    if not m:
        raise SpecSyntaxError(f"cannot parse functor spec {text!r}")
    name, body = m.groups()
    args = _split_args(body)

    def expect(n: int):
        if len(args) != n:
            raise SpecSyntaxError(f"{name}(...) takes {n} argument(s), got {len(args)}")

    if name == "burnside":
        expect(1)
        return Burnside(field_from_token(args[0]))
    if name in ("repC", "repQ"):
        expect(1)
        fld = field_from_token(args[0])
        if name == "repQ" and fld.characteristic:
            raise SpecSyntaxError("repQ needs a field of characteristic 0")
        return LinRepC(fld) if name == "repC" else LinRepQSpan(fld)
    if name == "const":
        expect(1)
        if not args[0].isdigit():
            raise SpecSyntaxError(f"const(q) needs an integer prime, got {args[0]!r}")
        return ConstantField(int(args[0]))
    if name == "shift":
        expect(2)
        return Shift(parse_spec(args[0]), make_group(args[1]))
    if name == "cut":
        expect(2)
        inner = parse_spec(args[0])
        token = args[1]
        if token == "eTop":
            e = top_idempotent(inner)
        elif re.fullmatch(r"e\d+", token):
            e = top_idempotent(inner, int(token[1:]))
        else:
            raise SpecSyntaxError(f"unknown idempotent {token!r} (expected eTop or e<index>)")
        return IdempotentCut(inner, e, token)
    raise SpecSyntaxError(f"unknown functor {name!r}")


def parse_spec(text: str) -> GreenFunctor:
    """The functor named by ``text``; equal strings give the same instance."""
    key = re.sub(r"\s+", "", text)
    with _functors_lock:
        functor = _functors.get(key)
        if functor is None:
            functor = _build(key)
            _functors[key] = functor
            logger.debug("Parsed functor spec", spec=key, canonical=functor.spec)
    return functor
