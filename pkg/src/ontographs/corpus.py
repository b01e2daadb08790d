"""Built-in fixture series and seeded random generators.

The four fixture series mirror the experiment structure: a types-only world,
a world with relation arrows and named individuals, a series whose statements
use domain/range/cardinality restrictions, and a series whose statements talk
only about relations.  The random world/statement generators feed the
differential test between `evaluate` and `ground_oracle`.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import cnl
from .logic import AnswerKey, generate_answer_key
from .world import (Individual, Legend, Lexicon, NameEntry, NounEntry, Ontograph,
                    RelationDef, RelationInstance, TypeDef, VerbEntry)


class XorShift64:
    """xorshift64* generator: fixed algorithm so corpora reproduce across platforms.

    State is 64 bits; a zero seed is remapped to a fixed nonzero constant
    because the all-zero state is a fixpoint of the shift sequence.
    """

    _MASK = (1 << 64) - 1
    _MULT = 0x2545F4914F6CDD1D
    _ZERO_SEED = 0x9E3779B97F4A7C15

    def __init__(self, seed: int):
        self.state = seed & self._MASK
        if self.state == 0:
            self.state = self._ZERO_SEED

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & self._MASK
        x ^= x >> 27
        self.state = x
        return (x * self._MULT) & self._MASK

    def below(self, n: int) -> int:
        return self.next_u64() % n

    def chance(self, p: float) -> bool:
        return (self.next_u64() >> 11) / float(1 << 53) < p

    def choice(self, seq):
        return seq[self.below(len(seq))]


STANDARD_TYPES = (
    TypeDef("woman", "circle_person"),
    TypeDef("man", "triangle"),
    TypeDef("person", "generic"),
    TypeDef("doctor", "star"),
    TypeDef("driver", "diamond"),
    TypeDef("present", "square_object"),
)

STANDARD_RELATIONS = (
    RelationDef("sees", "solid"),
    RelationDef("loves", "dashed"),
    RelationDef("buys", "dotted"),
)

STANDARD_NAMES = ("Mary", "Tom", "John", "Sue", "Bill", "Anna", "Paul", "Lisa")

_NOUNS = (
    NounEntry("woman", "women", "woman"),
    NounEntry("man", "men", "man"),
    NounEntry("person", "persons", "person"),
    NounEntry("doctor", "doctors", "doctor"),
    NounEntry("driver", "drivers", "driver"),
    NounEntry("present", "presents", "present"),
)

_VERBS = (
    VerbEntry("sees", "see", "seen", "sees"),
    VerbEntry("loves", "love", "loved", "loves"),
    VerbEntry("buys", "buy", "bought", "buys"),
)


def standard_lexicon() -> Lexicon:
    """English forms for the whole standard vocabulary plus the stock proper names."""
    return Lexicon(_NOUNS, _VERBS, tuple(NameEntry(n, n) for n in STANDARD_NAMES))


def lexicon_for_world(world: Ontograph) -> Lexicon:
    """Restrict the standard lexicon to a world: its legend plus its labels."""
    nouns = tuple(n for n in _NOUNS if n.type_name in world.legend.type_names)
    verbs = tuple(v for v in _VERBS if v.relation in world.legend.relation_names)
    names = tuple(NameEntry(ind.label, ind.label)
                  for ind in sorted(world.individuals, key=lambda i: i.id) if ind.label)
    return Lexicon(nouns, verbs, names)


def _legend(type_names: tuple[str, ...], relation_names: tuple[str, ...]) -> Legend:
    types = tuple(t for t in STANDARD_TYPES if t.name in type_names)
    rels = tuple(r for r in STANDARD_RELATIONS if r.name in relation_names)
    return Legend(types, rels)


# --- fixture series ---------------------------------------------------------------

@dataclass(frozen=True)
class FixtureSeries:
    family: str
    world: Ontograph
    statements: tuple[tuple[str, str], ...]
    key: AnswerKey


def _t1() -> tuple[Ontograph, tuple[tuple[str, str], ...]]:
    world = Ontograph(
        "t_one",
        _legend(("woman", "man", "person", "doctor", "driver", "present"), ()),
        (
            Individual("bill", "Bill", {"man", "person"}),
            Individual("john", "John", {"man", "person", "doctor"}),
            Individual("lisa", "Lisa", {"woman", "person", "doctor"}),
            Individual("mary", "Mary", {"woman", "person"}),
            Individual("p_a", None, {"present"}),
            Individual("p_b", None, {"present"}),
            Individual("sue", "Sue", {"woman", "person", "driver"}),
            Individual("tom", "Tom", {"man", "person"}),
        ),
        (),
    )
    statements = (
        ("1/1", "Mary is a woman."),
        ("1/2", "Tom is a doctor."),
        ("1/3", "Lisa is a woman or is a doctor."),
        ("1/4", "Every doctor is a person."),
        ("1/5", "No present is a person."),
        ("1/6", "Every woman is a doctor."),
        ("1/7", "Something is a driver."),
        ("1/8", "No man is a doctor."),
        ("1/9", "Sue is a woman or is a man."),
        ("1/10", "If Bill is a doctor then Bill is a woman."),
    )
    return world, statements


def _t2() -> tuple[Ontograph, tuple[tuple[str, str], ...]]:
    world = Ontograph(
        "t_two",
        _legend(("woman", "man", "person", "present"), ("sees", "loves", "buys")),
        (
            Individual("john", "John", {"man", "person"}),
            Individual("mary", "Mary", {"woman", "person"}),
            Individual("p_a", None, {"present"}),
            Individual("p_b", None, {"present"}),
            Individual("p_c", None, {"present"}),
            Individual("sue", "Sue", {"woman", "person"}),
            Individual("tom", "Tom", {"man", "person"}),
        ),
        (
            RelationInstance("sees", "tom", "mary"),
            RelationInstance("sees", "john", "tom"),
            RelationInstance("sees", "sue", "p_c"),
            RelationInstance("loves", "mary", "tom"),
            RelationInstance("loves", "tom", "mary"),
            RelationInstance("buys", "john", "p_a"),
            RelationInstance("buys", "john", "p_b"),
        ),
        {
            "mary": (0, 0), "tom": (2, 0), "john": (0, 2), "sue": (2, 2),
            "p_a": (1, 1), "p_b": (1, 2), "p_c": (3, 2),
        },
    )
    statements = (
        ("2/1", "Tom sees Mary."),
        ("2/2", "Mary does not see Tom."),
        ("2/3", "Mary loves Tom and sees Tom."),
        ("2/4", "John buys a present."),
        ("2/5", "Every woman loves a man."),
        ("2/6", "Something sees a present."),
        ("2/7", "Mary buys nothing but presents."),
        ("2/8", "Mary buys at least 1 present."),
        ("2/9", "Tom buys nothing but presents."),
        ("2/10", "No man sees a woman."),
    )
    return world, statements


def _t3() -> tuple[Ontograph, tuple[tuple[str, str], ...]]:
    world = Ontograph(
        "t_three",
        _legend(("woman", "man", "person", "present"), ("sees", "buys")),
        (
            Individual("john", "John", {"man", "person"}),
            Individual("mary", "Mary", {"woman", "person"}),
            Individual("p_a", None, {"present"}),
            Individual("p_b", None, {"present"}),
            Individual("p_c", None, {"present"}),
            Individual("p_d", None, {"present"}),
            Individual("tom", "Tom", {"man", "person"}),
        ),
        (
            RelationInstance("buys", "mary", "p_a"),
            RelationInstance("buys", "mary", "p_b"),
            RelationInstance("buys", "tom", "p_c"),
            RelationInstance("buys", "john", "p_a"),
            RelationInstance("buys", "john", "p_c"),
            RelationInstance("buys", "john", "p_d"),
            RelationInstance("sees", "mary", "tom"),
        ),
    )
    statements = (
        ("3/1", "Everything that buys something is a person."),
        ("3/2", "Everything that is bought by something is a present."),
        ("3/3", "Every woman buys at most 1 present."),
        ("3/4", "John buys at least 2 presents."),
        ("3/5", "Every man buys exactly 1 present."),
        ("3/6", "Everything that sees something buys at least 1 present."),
        ("3/7", "Tom buys nothing but presents."),
        ("3/8", "Mary buys exactly 2 things."),
        ("3/9", "Something buys at least 4 presents."),
        ("3/10", "Everything that buys a present sees a man."),
    )
    return world, statements


def _t4() -> tuple[Ontograph, tuple[tuple[str, str], ...]]:
    world = Ontograph(
        "t_four",
        _legend((), ("sees", "loves")),
        (
            Individual("ia"),
            Individual("ib"),
            Individual("ic"),
            Individual("id"),
            Individual("ie"),
        ),
        (
            RelationInstance("loves", "ia", "ib"),
            RelationInstance("loves", "ib", "ia"),
            RelationInstance("loves", "ic", "ic"),
            RelationInstance("sees", "ia", "ib"),
            RelationInstance("sees", "ib", "ia"),
            RelationInstance("sees", "ic", "ic"),
            RelationInstance("sees", "id", "ie"),
            RelationInstance("sees", "ie", "id"),
        ),
        {"ia": (0, 0), "ib": (2, 0), "ic": (1, 1), "id": (0, 2), "ie": (2, 2)},
    )
    statements = (
        ("4/1", "Everything that loves something sees it."),
        ("4/2", "Everything that sees something loves it."),
        ("4/3", "Everything that is loved by something loves it."),
        ("4/4", "Nothing sees itself."),
        ("4/5", "Something loves itself."),
        ("4/6", "Everything sees something."),
        ("4/7", "Something sees everything."),
        ("4/8", "Everything that is seen by something sees it."),
        ("4/9", "Everything sees at most 2 things."),
        ("4/10", "If something sees everything then something loves everything."),
    )
    return world, statements


def fixtures() -> list[FixtureSeries]:
    """The four built-in series; the answer keys are computed, never hand-authored."""
    lexicon = standard_lexicon()
    out: list[FixtureSeries] = []
    for family, build in (("T1", _t1), ("T2", _t2), ("T3", _t3), ("T4", _t4)):
        world, statements = build()
        key = generate_answer_key(world, list(statements), lexicon)
        out.append(FixtureSeries(family, world, statements, key))
    return out


EXCLUDED_SPECIAL_CASES = frozenset({"1/3", "1/10", "2/7", "2/9"})


# --- random generators --------------------------------------------------------------

def _alpha(i: int) -> str:
    out = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        out = chr(ord("a") + r) + out
    return out


def gen_random_world(seed: int, n_individuals: int, n_types: int, n_relations: int,
                     edge_density: float) -> Ontograph:
    """Deterministic random world over the standard vocabulary; always validates."""
    if not 0 <= n_types <= len(STANDARD_TYPES):
        raise ValueError(f"n_types must be 0..{len(STANDARD_TYPES)}")
    if not 0 <= n_relations <= len(STANDARD_RELATIONS):
        raise ValueError(f"n_relations must be 0..{len(STANDARD_RELATIONS)}")
    if n_individuals < 0 or not 0.0 <= edge_density <= 1.0:
        raise ValueError("n_individuals must be >= 0 and edge_density in [0, 1]")
    rng = XorShift64(seed)
    legend = Legend(STANDARD_TYPES[:n_types], STANDARD_RELATIONS[:n_relations])
    type_names = [t.name for t in legend.types]

    individuals = []
    for i in range(n_individuals):
        label = STANDARD_NAMES[i] if i < len(STANDARD_NAMES) else "N" + _alpha(i).capitalize()
        members = frozenset(t for t in type_names if rng.chance(0.5))
        individuals.append(Individual(f"ind_{_alpha(i)}", label, members))

    edges = []
    for rel in legend.relations:
        for src in individuals:
            for tgt in individuals:
                if rng.chance(edge_density):
                    edges.append(RelationInstance(rel.name, src.id, tgt.id))

    return Ontograph(f"random_{_alpha(abs(seed) % 702)}", legend, tuple(individuals), tuple(edges))


def gen_random_statement(seed: int, lexicon: Lexicon) -> str:
    """Deterministic random sentence drawn from the grammar; always parses."""
    if not (lexicon.nouns and lexicon.verbs and lexicon.names):
        raise ValueError("lexicon must have at least one noun, verb, and proper name")
    rng = XorShift64(seed)
    if rng.chance(0.15):
        statement: cnl.Statement = cnl.Conditional(_gen_simple(rng, lexicon),
                                                   _gen_simple(rng, lexicon))
    else:
        statement = _gen_simple(rng, lexicon)
    return cnl.unparse(statement)


def _gen_simple(rng: XorShift64, lexicon: Lexicon) -> cnl.Simple:
    subject = _gen_subject(rng, lexicon)
    it_ok = (isinstance(subject, cnl.QuantSubject)
             and subject.relclause is not None
             and subject.relclause.obj == cnl.QuantObject("something"))
    n_preds = 1 + rng.below(3) if rng.chance(0.3) else 1
    conn = rng.choice(("and", "or")) if n_preds > 1 else None
    preds = tuple(_gen_pred(rng, lexicon, it_ok) for _ in range(n_preds))
    return cnl.Simple(subject, cnl.PredCoord(conn, preds))


def _gen_subject(rng: XorShift64, lexicon: Lexicon) -> cnl.Subject:
    kind = rng.below(3)
    if kind == 0:
        return cnl.ProperName(rng.choice(lexicon.names).word)
    if kind == 1:
        return cnl.DetNoun(rng.choice(("a", "every", "no")), rng.choice(lexicon.nouns).singular)
    quant = rng.choice(("everything", "something", "nothing"))
    relclause = _gen_relclause(rng, lexicon) if rng.chance(0.5) else None
    return cnl.QuantSubject(quant, relclause)


def _gen_relclause(rng: XorShift64, lexicon: Lexicon) -> cnl.RelClause:
    verb = rng.choice(lexicon.verbs)
    if rng.chance(0.5):
        return cnl.RelClause("active", verb.third_sg, _gen_object(rng, lexicon, it_ok=False))
    return cnl.RelClause("passive", verb.past_part, _gen_object(rng, lexicon, it_ok=False))


def _gen_pred(rng: XorShift64, lexicon: Lexicon, it_ok: bool) -> cnl.Pred:
    kind = rng.below(4)
    if kind == 0:
        return cnl.IsA(rng.chance(0.3), rng.choice(lexicon.nouns).singular)
    verb = rng.choice(lexicon.verbs)
    obj = _gen_object(rng, lexicon, it_ok)
    if kind == 1:
        return cnl.NegVerbPred(verb.base, obj)
    return cnl.VerbPred(verb.third_sg, obj)


def _gen_object(rng: XorShift64, lexicon: Lexicon, it_ok: bool) -> cnl.Object:
    kind = rng.below(9 if it_ok else 8)
    if kind == 0:
        return cnl.ProperName(rng.choice(lexicon.names).word)
    if kind == 1:
        return cnl.NounObject(rng.choice(lexicon.nouns).singular)
    if kind in (2, 3, 4):
        return cnl.QuantObject(("everything", "something", "nothing")[kind - 2])
    if kind == 5:
        return cnl.ItselfObject()
    if kind == 6:
        return cnl.NothingBut(rng.choice(lexicon.nouns).plural)
    if kind == 7:
        mode = rng.choice(("at_most", "at_least", "exactly"))
        n = rng.below(4)
        if rng.chance(0.25):
            return cnl.Cardinal(mode, n, None)
        entry = rng.choice(lexicon.nouns)
        return cnl.Cardinal(mode, n, entry.singular if n == 1 else entry.plural)
    return cnl.ItObject()
