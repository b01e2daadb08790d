"""First-order translation and closed-world truth over finite mini worlds.

Statements become formulas with counting quantifiers; truth is decided by
finite-domain evaluation where quantifiers range over every individual shown
and atoms are settled by lookup.  `ground_oracle` is a deliberately separate
decision procedure (full grounding, subset counting, no short-circuiting)
used to cross-check `evaluate`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from . import cnl
from .world import FormatError, Lexicon, Ontograph


class VocabularyError(Exception):
    """A formula names a type, relation, or individual the world does not declare."""


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str         # the individual's proper-name label


Term = Var | Const


@dataclass(frozen=True)
class TypeAtom:
    type_name: str
    term: Term


@dataclass(frozen=True)
class RelAtom:
    relation: str
    source: Term
    target: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Implies:
    antecedent: "Formula"
    consequent: "Formula"


@dataclass(frozen=True)
class ForAll:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class CountAtMost:
    n: int
    var: str
    body: "Formula"


@dataclass(frozen=True)
class CountAtLeast:
    n: int
    var: str
    body: "Formula"


@dataclass(frozen=True)
class CountExactly:
    n: int
    var: str
    body: "Formula"


Formula = (TypeAtom | RelAtom | Not | And | Or | Implies | ForAll | Exists
           | CountAtMost | CountAtLeast | CountExactly)


# --- translation ---------------------------------------------------------------

class _Fresh:
    _NAMES = ("x", "y", "z")

    def __init__(self):
        self.count = 0

    def __call__(self) -> str:
        name = self._NAMES[self.count] if self.count < 3 else f"v{self.count}"
        self.count += 1
        return name


def to_formula(statement: cnl.Statement, lexicon: Lexicon) -> Formula:
    """Translate a parsed statement into its first-order form.

    Fixed reading: subject quantifier outermost, then the predicate
    coordination, then each object's own quantifier; "does not" negates the
    whole verb phrase; "or" is inclusive; conditionals are material.  When the
    predicate uses "it", the subject clause's "something" is pulled out to the
    subject level so the pronoun stays bound.
    """
    fresh = _Fresh()
    if isinstance(statement, cnl.Conditional):
        return Implies(_simple(statement.antecedent, lexicon, fresh),
                       _simple(statement.consequent, lexicon, fresh))
    return _simple(statement, lexicon, fresh)


def _simple(simple: cnl.Simple, lexicon: Lexicon, fresh: _Fresh) -> Formula:
    subject = simple.subject
    coord = simple.predicates

    if isinstance(subject, cnl.ProperName):
        term = Const(lexicon.label_for(subject.word))
        return _coord(coord, term, None, term, lexicon, fresh)

    if isinstance(subject, cnl.DetNoun):
        x = fresh()
        tx = Var(x)
        restrictor = TypeAtom(lexicon.type_for_noun(subject.noun), tx)
        body = _coord(coord, tx, None, tx, lexicon, fresh)
        if subject.det == "a":
            return Exists(x, And((restrictor, body)))
        if subject.det == "every":
            return ForAll(x, Implies(restrictor, body))
        return ForAll(x, Implies(restrictor, Not(body)))

    x = fresh()
    tx = Var(x)
    clause = subject.relclause
    if clause is None:
        body = _coord(coord, tx, None, tx, lexicon, fresh)
        return _quantify(subject.quant, x, None, body)

    relation = lexicon.relation_for_verb(clause.verb)
    flip = clause.voice == "passive"
    if _uses_it(coord):
        # "it" promotes the clause's "something" to the subject's level.
        y = fresh()
        ty = Var(y)
        restrictor = RelAtom(relation, ty, tx) if flip else RelAtom(relation, tx, ty)
        body = _coord(coord, tx, ty, tx, lexicon, fresh)
        return _quantify(subject.quant, x, y, body, restrictor)
    restrictor = _object_formula(relation, tx, clause.obj, flip, None, tx, lexicon, fresh)
    body = _coord(coord, tx, None, tx, lexicon, fresh)
    return _quantify(subject.quant, x, None, body, restrictor)


def _quantify(quant: str, x: str, y: str | None, body: Formula,
              restrictor: Formula | None = None) -> Formula:
    if quant == "nothing":
        body = Not(body)
    if restrictor is not None:
        inner = And((restrictor, body)) if quant == "something" else Implies(restrictor, body)
    else:
        inner = body
    if quant == "something":
        inner = Exists(y, inner) if y else inner
        return Exists(x, inner)
    inner = ForAll(y, inner) if y else inner
    return ForAll(x, inner)


def _uses_it(coord: cnl.PredCoord) -> bool:
    return any(isinstance(p, (cnl.VerbPred, cnl.NegVerbPred)) and isinstance(p.obj, cnl.ItObject)
               for p in coord.preds)


def _coord(coord: cnl.PredCoord, term: Term, it_term: Term | None, self_term: Term,
           lexicon: Lexicon, fresh: _Fresh) -> Formula:
    parts = tuple(_pred(p, term, it_term, self_term, lexicon, fresh) for p in coord.preds)
    if len(parts) == 1:
        return parts[0]
    return And(parts) if coord.conn == "and" else Or(parts)


def _pred(pred: cnl.Pred, term: Term, it_term: Term | None, self_term: Term,
          lexicon: Lexicon, fresh: _Fresh) -> Formula:
    if isinstance(pred, cnl.IsA):
        atom = TypeAtom(lexicon.type_for_noun(pred.noun), term)
        return Not(atom) if pred.negated else atom
    relation = lexicon.relation_for_verb(pred.verb)
    inner = _object_formula(relation, term, pred.obj, False, it_term, self_term, lexicon, fresh)
    return Not(inner) if isinstance(pred, cnl.NegVerbPred) else inner


def _object_formula(relation: str, term: Term, obj: cnl.Object, flip: bool,
                    it_term: Term | None, self_term: Term,
                    lexicon: Lexicon, fresh: _Fresh) -> Formula:
    def atom(target: Term) -> Formula:
        return RelAtom(relation, target, term) if flip else RelAtom(relation, term, target)

    if isinstance(obj, cnl.ProperName):
        return atom(Const(lexicon.label_for(obj.word)))
    if isinstance(obj, cnl.ItObject):
        if it_term is None:
            raise ValueError("'it' outside a binding subject")
        return atom(it_term)
    if isinstance(obj, cnl.ItselfObject):
        return atom(self_term)
    if isinstance(obj, cnl.NounObject):
        y = fresh()
        return Exists(y, And((TypeAtom(lexicon.type_for_noun(obj.noun), Var(y)), atom(Var(y)))))
    if isinstance(obj, cnl.QuantObject):
        y = fresh()
        if obj.quant == "something":
            return Exists(y, atom(Var(y)))
        if obj.quant == "nothing":
            return Not(Exists(y, atom(Var(y))))
        return ForAll(y, atom(Var(y)))
    if isinstance(obj, cnl.NothingBut):
        y = fresh()
        return ForAll(y, Implies(atom(Var(y)), TypeAtom(lexicon.type_for_noun(obj.noun_pl), Var(y))))
    y = fresh()
    if obj.noun is None:
        body: Formula = atom(Var(y))
    else:
        body = And((TypeAtom(lexicon.type_for_noun(obj.noun), Var(y)), atom(Var(y))))
    ctor = {"at_most": CountAtMost, "at_least": CountAtLeast, "exactly": CountExactly}[obj.mode]
    return ctor(obj.n, y, body)


# --- evaluation ------------------------------------------------------------------

def _vocabulary(formula: Formula) -> tuple[set[str], set[str], set[str]]:
    types: set[str] = set()
    relations: set[str] = set()
    constants: set[str] = set()

    def walk(f: Formula) -> None:
        if isinstance(f, TypeAtom):
            types.add(f.type_name)
            if isinstance(f.term, Const):
                constants.add(f.term.name)
        elif isinstance(f, RelAtom):
            relations.add(f.relation)
            for t in (f.source, f.target):
                if isinstance(t, Const):
                    constants.add(t.name)
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, (And, Or)):
            for p in f.parts:
                walk(p)
        elif isinstance(f, Implies):
            walk(f.antecedent)
            walk(f.consequent)
        else:
            walk(f.body)

    walk(formula)
    return types, relations, constants


def _check_vocabulary(formula: Formula, world: Ontograph) -> None:
    types, relations, constants = _vocabulary(formula)
    for t in sorted(types - world.legend.type_names):
        raise VocabularyError(f"undeclared type {t!r} in ontograph {world.id!r}")
    for r in sorted(relations - world.legend.relation_names):
        raise VocabularyError(f"undeclared relation {r!r} in ontograph {world.id!r}")
    for c in sorted(constants - set(world.by_label)):
        raise VocabularyError(f"no individual labeled {c!r} in ontograph {world.id!r}")


def evaluate(formula: Formula, world: Ontograph) -> bool:
    """Decide a closed formula against a world; always true or false, never unknown."""
    _check_vocabulary(formula, world)
    domain = tuple(sorted(world.by_id))
    labels = {label: ind.id for label, ind in world.by_label.items()}
    types = {ind.id: ind.types for ind in world.individuals}
    edges = world.instance_set

    def term(t: Term, env: dict[str, str]) -> str:
        return env[t.name] if isinstance(t, Var) else labels[t.name]

    def ev(f: Formula, env: dict[str, str]) -> bool:
        if isinstance(f, TypeAtom):
            return f.type_name in types[term(f.term, env)]
        if isinstance(f, RelAtom):
            return (f.relation, term(f.source, env), term(f.target, env)) in edges
        if isinstance(f, Not):
            return not ev(f.body, env)
        if isinstance(f, And):
            return all(ev(p, env) for p in f.parts)
        if isinstance(f, Or):
            return any(ev(p, env) for p in f.parts)
        if isinstance(f, Implies):
            return not ev(f.antecedent, env) or ev(f.consequent, env)
        if isinstance(f, ForAll):
            return all(ev(f.body, env | {f.var: d}) for d in domain)
        if isinstance(f, Exists):
            return any(ev(f.body, env | {f.var: d}) for d in domain)
        count = sum(1 for d in domain if ev(f.body, env | {f.var: d}))
        if isinstance(f, CountAtMost):
            return count <= f.n
        if isinstance(f, CountAtLeast):
            return count >= f.n
        return count == f.n

    return ev(formula, {})


def ground_oracle(formula: Formula, world: Ontograph) -> bool:
    """Independent decision procedure for cross-checking `evaluate`.

    Expands every quantifier into explicit finite con/disjunctions and every
    counting quantifier into exhaustive subset checks; folds fully materialized
    truth lists with no short-circuiting.
    """
    _check_vocabulary(formula, world)
    domain = tuple(sorted(world.by_id))
    labels = {label: ind.id for label, ind in world.by_label.items()}
    types = {ind.id: ind.types for ind in world.individuals}
    edges = world.instance_set

    def term(t: Term, env: dict[str, str]) -> str:
        return env[t.name] if isinstance(t, Var) else labels[t.name]

    def fold_and(values: list[bool]) -> bool:
        out = True
        for v in values:
            out = out and v
        return out

    def fold_or(values: list[bool]) -> bool:
        out = False
        for v in values:
            out = out or v
        return out

    def sat_all(members: tuple[str, ...], var: str, body: Formula, env: dict[str, str]) -> bool:
        return fold_and([ex(body, env | {var: d}) for d in members])

    def at_least(n: int, var: str, body: Formula, env: dict[str, str]) -> bool:
        return fold_or([sat_all(subset, var, body, env) for subset in combinations(domain, n)])

    def at_most(n: int, var: str, body: Formula, env: dict[str, str]) -> bool:
        return fold_and([not sat_all(subset, var, body, env)
                         for subset in combinations(domain, n + 1)])

    def ex(f: Formula, env: dict[str, str]) -> bool:
        if isinstance(f, TypeAtom):
            return f.type_name in types[term(f.term, env)]
        if isinstance(f, RelAtom):
            return (f.relation, term(f.source, env), term(f.target, env)) in edges
        if isinstance(f, Not):
            return not ex(f.body, env)
        if isinstance(f, And):
            return fold_and([ex(p, env) for p in f.parts])
        if isinstance(f, Or):
            return fold_or([ex(p, env) for p in f.parts])
        if isinstance(f, Implies):
            a = ex(f.antecedent, env)
            b = ex(f.consequent, env)
            return (not a) or b
        if isinstance(f, ForAll):
            return fold_and([ex(f.body, env | {f.var: d}) for d in domain])
        if isinstance(f, Exists):
            return fold_or([ex(f.body, env | {f.var: d}) for d in domain])
        if isinstance(f, CountAtMost):
            return at_most(f.n, f.var, f.body, env)
        if isinstance(f, CountAtLeast):
            return at_least(f.n, f.var, f.body, env)
        lower = at_least(f.n, f.var, f.body, env)
        upper = at_most(f.n, f.var, f.body, env)
        return lower and upper

    return ex(formula, {})


def formula_text(formula: Formula) -> str:
    """Plain-text rendering: atoms bare, every composite parenthesized."""
    if isinstance(formula, TypeAtom):
        return f"{formula.type_name}({formula.term.name})"
    if isinstance(formula, RelAtom):
        return f"{formula.relation}({formula.source.name}, {formula.target.name})"
    if isinstance(formula, Not):
        return f"(not {formula_text(formula.body)})"
    if isinstance(formula, And):
        return "(" + " & ".join(formula_text(p) for p in formula.parts) + ")"
    if isinstance(formula, Or):
        return "(" + " | ".join(formula_text(p) for p in formula.parts) + ")"
    if isinstance(formula, Implies):
        return f"({formula_text(formula.antecedent)} -> {formula_text(formula.consequent)})"
    if isinstance(formula, ForAll):
        return f"(forall {formula.var} {formula_text(formula.body)})"
    if isinstance(formula, Exists):
        return f"(exists {formula.var} {formula_text(formula.body)})"
    word = {CountAtMost: "atmost", CountAtLeast: "atleast", CountExactly: "exactly"}[type(formula)]
    return f"({word} {formula.n} {formula.var} {formula_text(formula.body)})"


# --- answer keys ------------------------------------------------------------------

@dataclass(frozen=True)
class AnswerKey:
    ontograph: str
    entries: tuple[tuple[str, bool], ...]

    def truth_map(self) -> dict[str, bool]:
        return dict(self.entries)


class AnswerKeyError(Exception):
    """Key generation failed on one statement; carries the offending id."""

    def __init__(self, statement_id: str, cause: Exception):
        super().__init__(f"statement {statement_id!r}: {cause}")
        self.statement_id = statement_id
        self.cause = cause


def generate_answer_key(world: Ontograph, statements: list[tuple[str, str]],
                        lexicon: Lexicon) -> AnswerKey:
    """Mechanically decide every statement against the world, preserving order."""
    entries: list[tuple[str, bool]] = []
    seen: set[str] = set()
    for sid, text in statements:
        if sid in seen:
            raise AnswerKeyError(sid, ValueError("duplicate statement id"))
        seen.add(sid)
        try:
            ast = cnl.parse_text(text, lexicon)
            verdict = evaluate(to_formula(ast, lexicon), world)
        except (cnl.ParseError, VocabularyError, KeyError) as exc:
            raise AnswerKeyError(sid, exc) from exc
        entries.append((sid, verdict))
    return AnswerKey(world.id, tuple(entries))


def answer_key_to_dict(key: AnswerKey) -> dict:
    return {"ontograph": key.ontograph,
            "entries": [{"id": sid, "truth": "true" if truth else "false"}
                        for sid, truth in key.entries]}


def answer_key_from_dict(doc: dict) -> AnswerKey:
    if not isinstance(doc, dict) or set(doc) != {"ontograph", "entries"}:
        raise FormatError("answer key: expected {ontograph, entries}")
    if not isinstance(doc["ontograph"], str) or not isinstance(doc["entries"], list):
        raise FormatError("answer key: bad field types")
    entries: list[tuple[str, bool]] = []
    seen: set[str] = set()
    for entry in doc["entries"]:
        if not isinstance(entry, dict) or set(entry) != {"id", "truth"}:
            raise FormatError("answer key: entries must be {id, truth}")
        sid, truth = entry["id"], entry["truth"]
        if not isinstance(sid, str) or truth not in ("true", "false"):
            raise FormatError("answer key: truth must be \"true\" or \"false\"")
        if sid in seen:
            raise FormatError(f"answer key: duplicate id {sid!r}")
        seen.add(sid)
        entries.append((sid, truth == "true"))
    return AnswerKey(doc["ontograph"], tuple(entries))


def answer_key_to_json(key: AnswerKey) -> str:
    return json.dumps(answer_key_to_dict(key), indent=2) + "\n"


def load_answer_key(path: str | Path) -> AnswerKey:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return answer_key_from_dict(doc)


def dump_answer_key(key: AnswerKey, path: str | Path) -> None:
    Path(path).write_text(answer_key_to_json(key), encoding="utf-8")
