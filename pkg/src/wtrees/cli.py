"""Command line front end.

Every subcommand builds a JSON payload, validates it against a small
schema and prints it (compact and key-sorted, so identical inputs give
byte-identical output).  ``--pretty`` prints a human-readable report
instead.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from contextlib import redirect_stderr, redirect_stdout
from importlib import resources
from pathlib import Path

import jsonschema

from .abelian import DimensionError, NotWellDefined
from .decorations import FiniteGroup
from .forest import (
    ForestError,
    SignedForest,
    is_order_n_framed,
    is_order_n_twisted,
    load_forest,
    parse_forest,
    print_forest,
    tau_n_extract,
)
from .lie import bracket_map, leaf_bracket, rooted_to_lie
from .milnor import (
    EtaError,
    MilnorError,
    WordSyntaxError,
    arf_kernel,
    d_coordinates,
    eta,
    eta_hom,
    eta_tree,
    format_free_word,
    magnus_expand,
    mu_n,
    parse_free_word,
)
from .moves import (
    Certificate,
    MoveError,
    boundary_twist,
    cancel_pair,
    certify_vanishing,
    ihx_move,
    interior_twist,
    move_along_tree_identity,
    normalize_to_order,
    realize_recipe,
    recipe_matches,
    replay,
    split_twisted,
    twisted_ihx_move,
)
from .tree_groups import (
    KINDS,
    CapExceeded,
    ForestKindError,
    GroupSpec,
    GroupSpecError,
    build_presentation,
    class_of_forest,
    int_relator,
)
from .trees import (
    TreeSyntaxError,
    TwistedTree,
    UnrootedTree,
    canonical_form,
    labels,
    leaves,
    order,
    parse_tree,
    print_tree,
    symmetric_body,
)

GRAMMAR_HINT = (
    "tree grammar: label := integer; rooted := label | (rooted,rooted); "
    "unrooted := <rooted,rooted>; twisted := rooted^inf; leaf decoration: 1{g}.  "
    "forest: signed sum such as '+2*<(1,2),3> -1*(1,1)^inf'.  "
    "free word: 'x1 x2 X1 X2' or '[x1,x2]'."
)

MOVE_OPS = (
    "boundary-twist",
    "interior-twist",
    "split",
    "ihx",
    "twisted-ihx",
    "cancel",
    "normalize",
    "move-root",
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# schemas

_INT = {"type": "integer"}
_INTS = {"type": "array", "items": _INT}
_STRUCT = {
    "type": "object",
    "required": ["rank", "torsion"],
    "properties": {"rank": _INT, "torsion": _INTS},
}
_TENSOR = {
    "type": "object",
    "required": ["degree", "terms"],
    "properties": {
        "degree": _INT,
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["leaf", "word", "coef"],
                "properties": {"leaf": _INT, "word": {"type": "string"}, "coef": _INT},
            },
        },
    },
}
_ENTRIES = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["coef", "tree"],
        "properties": {"coef": _INT, "tree": {"type": "string"}},
    },
}
_FOREST = {
    "type": "object",
    "required": ["m", "framed", "twisted"],
    "properties": {"m": _INT, "framed": _ENTRIES, "twisted": _ENTRIES},
}


def _obj(required: dict) -> dict:
    return {"type": "object", "required": sorted(required), "properties": required}


SCHEMAS = {
    "parse": _obj({"input": {"type": "string"}, "type": {"type": "string"}}),
    "group": _obj({"group": {"type": "string"}, "generators": _INT, "relations": _INT, "structure": _STRUCT}),
    "class": _obj({"group": {"type": "string"}, "class": {"type": "object"}, "zero": {"type": "boolean"}}),
    "certify": _obj({"group": {"type": "string"}, "vanishes": {"type": "boolean"}}),
    "eta": _obj({"n": _INT, "eta": _TENSOR, "in_D": {"type": "boolean"}}),
    "eta-hom": _obj({"group": {"type": "string"}, "hom": {"type": "object"}, "isomorphism": {"type": "boolean"}}),
    "mu": _obj({"n": _INT, "m": _INT, "mu": _TENSOR, "in_D": {"type": "boolean"}}),
    "magnus": _obj({"word": {"type": "string"}, "series": {"type": "object"}}),
    "move": _obj({"op": {"type": "string"}, "forest": _FOREST, "log": {"type": "array"}}),
    "realize": _obj({"steps": {"type": "array", "items": {"type": "string"}}, "matches": {"type": "boolean"}}),
    "arf-kernel": _obj({"j": _INT, "m": _INT, "kernel": _STRUCT, "isomorphism": {"type": "boolean"}}),
    "check-corpus": _obj({"total": _INT, "passed": _INT, "failed": {"type": "array"}}),
}


# ---------------------------------------------------------------------------
# input helpers


def _read_json_arg(text: str):
    if text.startswith("@"):
        return json.loads(Path(text[1:]).read_text())
    return json.loads(text)


def _spec_from_args(a) -> GroupSpec:
    if a.n is None or a.m is None:
        raise UsageError("--n and --m are required")
    group = FiniteGroup.from_json(_read_json_arg(a.group_table)) if a.group_table else None
    ints: tuple = ()
    if a.int:
        ints = tuple(_int_rows(_read_json_arg(a.int), group, a.m))
    return GroupSpec(a.kind, a.n, a.m, group, ints)


def _int_rows(data, group, m) -> list[tuple]:
    """INT file: a list of explicit relators or int_relator recipes."""
    if not isinstance(data, list):
        raise GroupSpecError("INT file must hold a JSON list")
    rows = []
    for item in data:
        if "terms" in item:
            row: dict[str, int] = {}
            for t in item["terms"]:
                k = parse_tree(t["tree"], m).key
                row[k] = row.get(k, 0) + int(t["coef"])
            rows.append(tuple(sorted((k, c) for k, c in row.items() if c)))
        else:
            rel = int_relator(
                str(item["a"]),
                [(int(s), str(g)) for s, g in item.get("lambda0", [])],
                int(item.get("w2", 0)),
                bool(item.get("rp2", False)),
                group,
            )
            rows.extend(rel.rows())
    return rows


def _forest(a) -> SignedForest:
    if a.forest is None:
        raise UsageError("--forest is required")
    return load_forest(a.forest, a.m)


def _entry(text: str | None, m: int | None):
    if text is None:
        raise UsageError("--tree is required for this operation")
    return parse_tree(text, m)


def _body(text: str | None, m: int | None):
    t = _entry(text, m)
    return t.body if isinstance(t, TwistedTree) else t


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, report lines)


def cmd_parse(a):
    if a.tree is not None:
        t = parse_tree(a.tree, a.m)
        out = {"input": a.tree, "printed": print_tree(t), "order": order(t), "labels": labels(t)}
        if isinstance(t, UnrootedTree):
            rep, sign = canonical_form(t)
            out["type"] = "unrooted"
            out["canonical"] = {"tree": print_tree(rep), "sign": sign}
            out["key"] = t.key
            if not any(_decos(t)):
                out["leaf_brackets"] = [
                    {"position": v, "leaf": i, "bracket": str(leaf_bracket(t, v))}
                    for v, i in enumerate(labels(t))
                ]
                out["eta"] = eta_tree(t).to_json()
        elif isinstance(t, TwistedTree):
            out["type"] = "twisted"
            out["body"] = print_tree(t.body)
            out["symmetric_body"] = print_tree(symmetric_body(t.body))
        else:
            out["type"] = "rooted"
            if not any(_decos(t)):
                out["lie"] = str(rooted_to_lie(t))
        lines = [f"{k}: {out[k]}" for k in ("type", "printed", "order")]
        return out, lines
    if a.forest is not None:
        f = _forest(a)
        out = {"input": a.forest, "type": "forest", "forest": f.to_json(), "printed": print_forest(f)}
        if a.n is not None:
            out["order_n_twisted"] = is_order_n_twisted(f, a.n)
            out["order_n_framed"] = is_order_n_framed(f, a.n)
            if out["order_n_twisted"]:
                out["tau"] = print_forest(tau_n_extract(f, a.n))
        return out, [print_forest(f)]
    if a.word is not None:
        w = parse_free_word(a.word, a.m)
        return {"input": a.word, "type": "word", "printed": format_free_word(w)}, [format_free_word(w)]
    raise UsageError("parse needs --tree, --forest or --word")


def _decos(t):
    return [l.deco for l in leaves(t)]


def cmd_group(a):
    spec = _spec_from_args(a)
    p = build_presentation(spec)
    s = p.structure()
    out = {
        "group": spec.describe(),
        "generators": p.ngens,
        "relations": len(p.relations),
        "structure": s.to_json(),
    }
    if a.presentation:
        out["presentation"] = p.to_json()
    tors = " + ".join(f"Z/{d}" for d in s.torsion)
    return out, [f"{spec.describe()}: Z^{s.rank}" + (f" + {tors}" if tors else "")]


def cmd_class(a):
    spec = _spec_from_args(a)
    c = class_of_forest(spec, _forest(a))
    return {"group": spec.describe(), "class": c.to_json(), "zero": c.is_zero}, [
        f"class in {spec.describe()}: {'zero' if c.is_zero else c.flat()}"
    ]


def cmd_certify(a):
    spec = _spec_from_args(a)
    res = certify_vanishing(spec, _forest(a))
    if isinstance(res, Certificate):
        out = {"group": spec.describe(), **res.to_json(build_presentation(spec))}
        lines = [f"vanishes in {spec.describe()} via {len(res.rows)} relator{'' if len(res.rows) == 1 else 's'}"] + [
            f"  {c:+d} * {k} #{i}" for i, k, c in res.rows
        ]
        return out, lines
    return {"group": spec.describe(), "vanishes": False, "verdict": res}, [res]


def cmd_eta(a):
    if a.n is None:
        raise UsageError("--n is required")
    if a.hom:
        if a.m is None:
            raise UsageError("--m is required with --hom")
        spec = GroupSpec(a.kind, a.n, a.m)
        h = eta_hom(spec)
        return {"group": spec.describe(), "hom": h.to_json(), "isomorphism": h.isomorphism}, [
            f"eta on {spec.describe()}: injective={h.injective} surjective={h.surjective}"
        ]
    f = _forest(a)
    e = eta(a.n, f)
    inside = not bracket_map(e)
    out = {"n": a.n, "m": f.m, "eta": e.to_json(), "printed": str(e), "in_D": inside}
    if inside:
        out["d_coordinates"] = d_coordinates(e, f.m)
    return out, [str(e), f"in D_{a.n}: {inside}"]


def cmd_mu(a):
    if a.n is None or a.longitudes is None:
        raise UsageError("--n and --longitudes are required")
    ls = [s.strip() for s in a.longitudes.split(";")]
    m = len(ls)
    mu = mu_n(ls, a.n)
    out = {
        "n": a.n,
        "m": m,
        "longitudes": [format_free_word(parse_free_word(s, m)) for s in ls],
        "mu": mu.to_json(),
        "printed": str(mu),
        "in_D": not bracket_map(mu),
        "d_coordinates": d_coordinates(mu, m),
    }
    return out, [str(mu), "in D_n: True"]


def cmd_magnus(a):
    if a.word is None or a.order is None:
        raise UsageError("--word and --order are required")
    w = parse_free_word(a.word, a.m)
    s = magnus_expand(w, a.order)
    return {"word": format_free_word(w), "series": s.to_json(), "printed": str(s)}, [str(s)]


def cmd_move(a):
    f = _forest(a)
    m = f.m
    op = a.op
    sign = a.sign
    if op == "boundary-twist":
        if a.i is None:
            raise UsageError("--i is required for boundary-twist")
        r = boundary_twist(f, a.i, _body(a.tree, m), sign)
    elif op == "interior-twist":
        r = interior_twist(f, _body(a.tree, m), sign)
    elif op == "split":
        r = split_twisted(f, _body(a.tree, m))
    elif op == "ihx":
        t = _entry(a.tree, m)
        if not isinstance(t, UnrootedTree):
            raise MoveError("ihx needs an unrooted entry; use twisted-ihx for J^inf")
        r = ihx_move(f, t, a.edge, a.coef)
    elif op == "twisted-ihx":
        r = twisted_ihx_move(f, _body(a.tree, m), a.edge)
    elif op == "cancel":
        r = cancel_pair(f, _entry(a.tree, m))
    elif op == "normalize":
        if a.n is None:
            raise UsageError("--n is required for normalize")
        r = normalize_to_order(f, a.n)
    else:
        r = move_along_tree_identity(f, _entry(a.tree, m))
    out = {"op": op, **r.to_json(), "printed": print_forest(r.forest)}
    return out, [print_forest(r.forest)] + r.log


def cmd_realize(a):
    t = _entry(a.tree, a.m)
    if isinstance(t, TwistedTree):
        target = (a.omega, t)
    elif isinstance(t, UnrootedTree):
        target = t
    else:
        raise MoveError("realize needs an unrooted tree or J^inf")
    steps = realize_recipe(target)
    res = replay(steps)
    shown = print_tree(res[-1]) if res[0] == "framed" else f"{res[1]:+d}*{print_tree(res[2])}"
    out = {"steps": [str(s) for s in steps], "replay": shown, "matches": recipe_matches(target, steps)}
    return out, [str(s) for s in steps] + [f"replay: {shown}"]


def cmd_arf(a):
    if a.j is None or a.m is None:
        raise UsageError("--j and --m are required")
    r = arf_kernel(a.j, a.m)
    return r.to_json(), [
        f"Ker eta_{4 * a.j - 2} (m={a.m}): rank {r.kernel_rank}, torsion {r.kernel_torsion}; "
        f"isomorphism={r.isomorphism}"
    ]


def corpus_path() -> Path:
    return Path(str(resources.files("wtrees") / "corpus" / "golden.json"))


def contains(actual, expected) -> bool:
    """Recursive subset match of an output against a corpus expectation.

    Dicts match key-wise, lists element-wise.  Two special forms:
    ``{"$forest": literal}`` compares a forest JSON with a literal up to
    forest equality, ``{"$nonempty": true}`` asks for a nonempty value.
    """
    if isinstance(expected, dict) and "$forest" in expected:
        try:
            f = SignedForest.from_json(actual)
            return f == parse_forest(expected["$forest"], f.m)
        except (ValueError, TypeError, KeyError):
            return False
    if isinstance(expected, dict) and "$nonempty" in expected:
        return bool(actual) == bool(expected["$nonempty"])
    if isinstance(expected, list):
        return (
            isinstance(actual, list)
            and len(actual) == len(expected)
            and all(contains(x, y) for x, y in zip(actual, expected))
        )
    if isinstance(expected, dict):
        return isinstance(actual, dict) and all(
            k in actual and contains(actual[k], v) for k, v in expected.items()
        )
    return actual == expected


def cmd_check_corpus(a):
    path = Path(a.corpus) if a.corpus else corpus_path()
    cases = json.loads(path.read_text())
    failed, lines = [], []
    for case in cases:
        buf, err = io.StringIO(), io.StringIO()
        with redirect_stdout(buf), redirect_stderr(err):
            code = run(case["argv"])
        ok = code == case.get("exit", 0)
        if ok and "expect" in case:
            try:
                ok = contains(json.loads(buf.getvalue()), case["expect"])
            except json.JSONDecodeError:
                ok = False
        if ok and "stderr" in case:
            ok = case["stderr"] in err.getvalue()
        lines.append(f"{'PASS' if ok else 'FAIL'} {case['id']}")
        if not ok:
            failed.append(case["id"])
    out = {"total": len(cases), "passed": len(cases) - len(failed), "failed": failed}
    return out, lines


COMMANDS = {
    "parse": cmd_parse,
    "group": cmd_group,
    "class": cmd_class,
    "certify": cmd_certify,
    "eta": cmd_eta,
    "mu": cmd_mu,
    "magnus": cmd_magnus,
    "move": cmd_move,
    "realize": cmd_realize,
    "arf-kernel": cmd_arf,
    "check-corpus": cmd_check_corpus,
}


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--m", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--kind", choices=KINDS, default="twisted")
    common.add_argument("--forest")
    common.add_argument("--group-table", dest="group_table")
    common.add_argument("--int")
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true", help="compact JSON output (default)")
    out.add_argument("--pretty", action="store_true", help="human-readable report")

    p = _Parser(prog="wtrees", description="Exact calculator for Whitney tower tree groups.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sp = sub.add_parser("parse", parents=[common])
    sp.add_argument("--tree")
    sp.add_argument("--word")
    sp = sub.add_parser("group", parents=[common])
    sp.add_argument("--presentation", action="store_true")
    sub.add_parser("class", parents=[common])
    sub.add_parser("certify", parents=[common])
    sp = sub.add_parser("eta", parents=[common])
    sp.add_argument("--hom", action="store_true", help="report eta_n as a map of groups")
    sp = sub.add_parser("mu", parents=[common])
    sp.add_argument("--longitudes", help="';'-separated free words, one per component")
    sp = sub.add_parser("magnus", parents=[common])
    sp.add_argument("--word")
    sp.add_argument("--order", type=int)
    sp = sub.add_parser("move", parents=[common])
    sp.add_argument("--op", choices=MOVE_OPS, required=True)
    sp.add_argument("--tree")
    sp.add_argument("--i", type=int)
    sp.add_argument("--sign", type=int, choices=(1, -1), default=1)
    sp.add_argument("--edge", type=int, default=0)
    sp.add_argument("--coef", type=int)
    sp = sub.add_parser("realize", parents=[common])
    sp.add_argument("--tree")
    sp.add_argument("--omega", type=int, default=1)
    sp = sub.add_parser("arf-kernel", parents=[common])
    sp.add_argument("--j", type=int)
    sp = sub.add_parser("check-corpus", parents=[common])
    sp.add_argument("--corpus")
    return p


DOMAIN_ERRORS = (
    ForestError,
    ForestKindError,
    GroupSpecError,
    CapExceeded,
    EtaError,
    MilnorError,
    MoveError,
    NotWellDefined,
    DimensionError,
    jsonschema.ValidationError,
    OSError,
    ValueError,
    KeyError,
)


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # accept --check-corpus as a spelling of the subcommand
    argv = ["check-corpus" if x == "--check-corpus" else x for x in argv]
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        if a.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        payload, lines = COMMANDS[a.command](a)
    except (UsageError, TreeSyntaxError, WordSyntaxError) as e:
        print(f"wtrees: error: {e}", file=sys.stderr)
        print(GRAMMAR_HINT, file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as e:
        print(f"wtrees: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    schema = "eta-hom" if a.command == "eta" and "hom" in payload else a.command
    jsonschema.validate(payload, SCHEMAS[schema])
    if a.pretty:
        print("\n".join(str(x) for x in lines))
    else:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    if a.command == "check-corpus" and payload["failed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
