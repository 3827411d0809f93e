"""JSON automaton specs: parsing, validation and table export.

See ``docs/spec-format.md`` for the schema. Output permutations are cycle
strings in display letters (0-based letters plus ``display_offset``).
"""
import json
from pathlib import Path

from . import perms
from .alphabet import ChangingAlphabet, ParamSeq
from .automaton import ConstantProgram, LevelTables, TVAutomaton, check_tables, from_level_tables
from .errors import BadPermutation, SpecError, TVError
from .presets import preset

TOP_KEYS = {"name", "alphabet", "display_offset", "states", "constant", "levels", "preset"}
PRESET_KEYS = {"name", "seq", "n", "r", "free_rank", "torsion", "seed"}
TABLE_KEYS = {"transitions", "outputs"}


def _reject_unknown(obj, allowed, where):
    if not isinstance(obj, dict):
        raise SpecError("expected a JSON object", where)
    extra = sorted(set(obj) - allowed)
    if extra:
        raise SpecError(f"unknown field(s) {', '.join(extra)}", where)


def parse_alphabet(obj, display_offset=0, where="alphabet"):
    _reject_unknown(obj, {"kind", "size", "sizes", "seq", "scale", "offset"}, where)
    kind = obj.get("kind")
    try:
        if kind == "constant":
            return ChangingAlphabet.constant(int(obj["size"]), display_offset)
        if kind == "horizon":
            return ChangingAlphabet.explicit([int(s) for s in obj["sizes"]], display_offset)
        if kind == "parametric":
            seq = ParamSeq.parse(str(obj["seq"]))
            return ChangingAlphabet.parametric(
                seq, int(obj.get("scale", 1)), int(obj.get("offset", 0)), display_offset
            )
    except KeyError as exc:
        raise SpecError(f"missing field {exc.args[0]!r}", where) from None
    except TVError as exc:
        raise SpecError(str(exc), where) from None
    raise SpecError(f"alphabet kind must be constant, horizon or parametric, not {kind!r}", f"{where}.kind")


def _parse_tables(obj, states, size, offset, where):
    _reject_unknown(obj, TABLE_KEYS, where)
    for key in TABLE_KEYS:
        if key not in obj:
            raise SpecError(f"missing field {key!r}", where)
    transitions, outputs = obj["transitions"], obj["outputs"]
    idx = {q: i for i, q in enumerate(states)}
    phi, psi = [], []
    for q in states:
        row = transitions.get(q)
        if not isinstance(row, list) or len(row) != size:
            raise SpecError(f"need {size} target states", f"{where}.transitions.{q}")
        try:
            phi.append(tuple(idx[t] for t in row))
        except KeyError as exc:
            raise SpecError(f"unknown state {exc.args[0]!r}", f"{where}.transitions.{q}") from None
        text = outputs.get(q)
        if not isinstance(text, str):
            raise SpecError("output must be a cycle-notation string", f"{where}.outputs.{q}")
        try:
            psi.append(perms.parse_cycle_text(text, size, offset))
        except BadPermutation as exc:
            raise BadPermutation(f"{exc} (at {where}.outputs.{q})") from None
    for extra in (set(transitions) | set(outputs)) - set(states):
        raise SpecError(f"unknown state {extra!r}", where)
    return check_tables(LevelTables(tuple(phi), tuple(psi)), len(states), size)


def load_spec(obj):
    """Build ``(automaton, preset_or_None)`` from a parsed JSON document."""
    _reject_unknown(obj, TOP_KEYS, "$")
    modes = [k for k in ("constant", "levels", "preset") if k in obj]
    if len(modes) != 1:
        raise SpecError("exactly one of 'constant', 'levels' or 'preset' is required", "$")
    if "preset" in obj:
        p = obj["preset"]
        _reject_unknown(p, PRESET_KEYS, "preset")
        if "name" not in p:
            raise SpecError("missing field 'name'", "preset")
        kwargs = {k: p[k] for k in ("seq", "n", "r", "free_rank", "seed") if k in p}
        if "torsion" in p:
            kwargs["torsion"] = tuple(p["torsion"])
        pre = preset(p["name"], **kwargs)
        return pre.automaton, pre
    offset = int(obj.get("display_offset", 0))
    if "alphabet" not in obj or "states" not in obj:
        raise SpecError("'alphabet' and 'states' are required for table specs", "$")
    alphabet = parse_alphabet(obj["alphabet"], offset)
    states = tuple(obj["states"])
    name = obj.get("name", "")
    if "constant" in obj:
        if not alphabet.is_constant:
            raise SpecError("constant tables need a constant alphabet", "alphabet")
        tables = _parse_tables(obj["constant"], states, alphabet.size_at(0), offset, "constant")
        return TVAutomaton(alphabet, states, ConstantProgram(tables), name=name), None
    levels = obj["levels"]
    if not isinstance(levels, list):
        raise SpecError("'levels' must be a list", "levels")
    tables = [
        _parse_tables(lv, states, alphabet.size_at(i), offset, f"levels[{i}]") for i, lv in enumerate(levels)
    ]
    if alphabet.horizon is None or alphabet.horizon > len(tables):
        alphabet = ChangingAlphabet.explicit([alphabet.size_at(i) for i in range(len(tables))], offset)
    return from_level_tables(alphabet, states, tables, name=name), None


def load_spec_file(path):
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from None
    return load_spec(obj)


def _tables_obj(aut, level, offset):
    t = aut.tables(level)
    return {
        "transitions": {q: [aut.states[p] for p in t.phi[i]] for i, q in enumerate(aut.states)},
        "outputs": {q: perms.to_cycle_text(t.psi[i], offset) for i, q in enumerate(aut.states)},
    }


def export_tables(aut, levels):
    """Spec document with explicit tables for levels ``0..levels-1``."""
    offset = aut.alphabet.display_offset
    return {
        "name": aut.name,
        "alphabet": {"kind": "horizon", "sizes": [aut.size_at(i) for i in range(levels)]},
        "display_offset": offset,
        "states": list(aut.states),
        "levels": [_tables_obj(aut, i, offset) for i in range(levels)],
    }


def export_constant(aut):
    offset = aut.alphabet.display_offset
    return {
        "name": aut.name,
        "alphabet": {"kind": "constant", "size": aut.size_at(0)},
        "display_offset": offset,
        "states": list(aut.states),
        "constant": _tables_obj(aut, 0, offset),
    }
