"""Finite mini worlds and the legend vocabulary that describes them.

An ontograph is a legend (declared types and relations, each with a drawing
hint) plus a completely specified world: individuals, their type memberships,
and relation arrows between them.  The information is complete, so anything
not listed is false and every ground fact has a definite truth value.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

_IDENT = re.compile(r"[a-z_]+\Z")
_LABEL = re.compile(r"[A-Z][A-Za-z]*\Z")


class WorldLookupError(KeyError):
    """A ground-atom lookup named an undeclared type/relation or an unknown individual."""


class FormatError(ValueError):
    """A data file is structurally malformed (bad JSON, wrong shape, unknown keys)."""


@dataclass(frozen=True)
class Violation:
    """One broken invariant: a machine-readable code plus the offending element."""

    code: str
    subject: str
    message: str


@dataclass(frozen=True)
class TypeDef:
    name: str
    icon: str


@dataclass(frozen=True)
class RelationDef:
    name: str
    style: str


@dataclass(frozen=True)
class Legend:
    types: tuple[TypeDef, ...] = ()
    relations: tuple[RelationDef, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(self.types))
        object.__setattr__(self, "relations", tuple(self.relations))

    @cached_property
    def type_names(self) -> frozenset[str]:
        return frozenset(t.name for t in self.types)

    @cached_property
    def relation_names(self) -> frozenset[str]:
        return frozenset(r.name for r in self.relations)


@dataclass(frozen=True)
class Individual:
    id: str
    label: str | None = None
    types: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "types", frozenset(self.types))


@dataclass(frozen=True)
class RelationInstance:
    rel: str
    source: str
    target: str


@dataclass(frozen=True)
class Ontograph:
    id: str
    legend: Legend
    individuals: tuple[Individual, ...] = ()
    relations: tuple[RelationInstance, ...] = ()
    positions: dict[str, tuple[int, int]] | None = None

    def __post_init__(self):
        object.__setattr__(self, "individuals", tuple(self.individuals))
        object.__setattr__(self, "relations", tuple(self.relations))
        if self.positions is not None:
            pos = {i: (int(x), int(y)) for i, (x, y) in self.positions.items()}
            object.__setattr__(self, "positions", pos)

    @cached_property
    def by_id(self) -> dict[str, Individual]:
        return {ind.id: ind for ind in self.individuals}

    @cached_property
    def by_label(self) -> dict[str, Individual]:
        return {ind.label: ind for ind in self.individuals if ind.label}

    @cached_property
    def instance_set(self) -> frozenset[tuple[str, str, str]]:
        return frozenset((r.rel, r.source, r.target) for r in self.relations)


def holds_type(world: Ontograph, type_name: str, individual: str) -> bool:
    """Closed-world truth of one membership atom: listed means true, anything else false."""
    if type_name not in world.legend.type_names:
        raise WorldLookupError(f"undeclared type: {type_name!r}")
    ind = world.by_id.get(individual)
    if ind is None:
        raise WorldLookupError(f"unknown individual: {individual!r}")
    return type_name in ind.types


def holds_relation(world: Ontograph, relation: str, source: str, target: str) -> bool:
    """Closed-world truth of one relation atom; an arrow not drawn does not hold."""
    if relation not in world.legend.relation_names:
        raise WorldLookupError(f"undeclared relation: {relation!r}")
    for ident in (source, target):
        if ident not in world.by_id:
            raise WorldLookupError(f"unknown individual: {ident!r}")
    return (relation, source, target) in world.instance_set


def validate(world: Ontograph) -> list[Violation]:
    """Collect every invariant violation; an empty list means the ontograph is well formed.

    Total on structurally well-formed input: semantic problems are reported,
    never raised.
    """
    out: list[Violation] = []

    def bad(code: str, subject: str, message: str) -> None:
        out.append(Violation(code, subject, message))

    if not _IDENT.match(world.id):
        bad("bad_identifier", f"ontograph:{world.id}", "ontograph id must be lowercase letters/underscore")

    seen_types: set[str] = set()
    for td in world.legend.types:
        if not _IDENT.match(td.name):
            bad("bad_identifier", f"type:{td.name}", "type name must be lowercase letters/underscore")
        if not _IDENT.match(td.icon):
            bad("bad_identifier", f"type:{td.name}", f"icon id {td.icon!r} must be lowercase letters/underscore")
        if td.name in seen_types:
            bad("duplicate_type", f"type:{td.name}", "type declared twice in the legend")
        seen_types.add(td.name)

    seen_rels: set[str] = set()
    for rd in world.legend.relations:
        if not _IDENT.match(rd.name):
            bad("bad_identifier", f"relation:{rd.name}", "relation name must be lowercase letters/underscore")
        if not _IDENT.match(rd.style):
            bad("bad_identifier", f"relation:{rd.name}", f"arrow style {rd.style!r} must be lowercase letters/underscore")
        if rd.name in seen_rels:
            bad("duplicate_relation", f"relation:{rd.name}", "relation declared twice in the legend")
        if rd.name in seen_types:
            bad("name_clash", f"relation:{rd.name}", "name used for both a type and a relation")
        seen_rels.add(rd.name)

    seen_ids: set[str] = set()
    seen_labels: set[str] = set()
    for ind in world.individuals:
        subject = f"individual:{ind.id}"
        if not _IDENT.match(ind.id):
            bad("bad_identifier", subject, "individual id must be lowercase letters/underscore")
        if ind.id in seen_ids:
            bad("duplicate_individual", subject, "individual id listed twice")
        seen_ids.add(ind.id)
        if ind.label is not None:
            if not _LABEL.match(ind.label):
                bad("bad_label", subject, f"label {ind.label!r} must be a capitalized ASCII word")
            if ind.label in seen_labels:
                bad("duplicate_label", subject, f"label {ind.label!r} used twice")
            seen_labels.add(ind.label)
        for t in sorted(ind.types):
            if t not in seen_types:
                bad("undeclared_type", subject, f"membership in undeclared type {t!r}")

    seen_edges: set[tuple[str, str, str]] = set()
    for inst in world.relations:
        subject = f"relation:{inst.rel}({inst.source},{inst.target})"
        if inst.rel not in seen_rels:
            bad("undeclared_relation", subject, f"instance of undeclared relation {inst.rel!r}")
        for end in (inst.source, inst.target):
            if end not in seen_ids:
                bad("unknown_individual", subject, f"endpoint {end!r} is not an individual")
        edge = (inst.rel, inst.source, inst.target)
        if edge in seen_edges:
            bad("duplicate_instance", subject, "relation instance listed twice")
        seen_edges.add(edge)

    if world.positions:
        for ident in world.positions:
            if ident not in seen_ids:
                bad("unknown_individual", f"position:{ident}", f"position for unknown individual {ident!r}")

    return out


# --- lexicon -----------------------------------------------------------------

@dataclass(frozen=True)
class NounEntry:
    singular: str
    plural: str
    type_name: str


@dataclass(frozen=True)
class VerbEntry:
    third_sg: str
    base: str
    past_part: str
    relation: str


@dataclass(frozen=True)
class NameEntry:
    word: str
    label: str


@dataclass(frozen=True)
class Lexicon:
    """Surface English forms for a legend's types and relations, plus proper names."""

    nouns: tuple[NounEntry, ...] = ()
    verbs: tuple[VerbEntry, ...] = ()
    names: tuple[NameEntry, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nouns", tuple(self.nouns))
        object.__setattr__(self, "verbs", tuple(self.verbs))
        object.__setattr__(self, "names", tuple(self.names))

    @cached_property
    def _noun_sg(self) -> dict[str, NounEntry]:
        return {n.singular: n for n in self.nouns}

    @cached_property
    def _noun_pl(self) -> dict[str, NounEntry]:
        return {n.plural: n for n in self.nouns}

    @cached_property
    def _verb_forms(self) -> dict[str, tuple[str, VerbEntry]]:
        forms: dict[str, tuple[str, VerbEntry]] = {}
        for v in self.verbs:
            forms[v.third_sg] = ("third_sg", v)
            forms[v.base] = ("base", v)
            forms[v.past_part] = ("past_part", v)
        return forms

    @cached_property
    def _names(self) -> dict[str, NameEntry]:
        return {n.word: n for n in self.names}

    def noun_sg(self, word: str) -> NounEntry | None:
        return self._noun_sg.get(word)

    def noun_pl(self, word: str) -> NounEntry | None:
        return self._noun_pl.get(word)

    def verb_form(self, word: str) -> tuple[str, VerbEntry] | None:
        return self._verb_forms.get(word)

    def name(self, word: str) -> NameEntry | None:
        return self._names.get(word)

    def type_for_noun(self, word: str) -> str:
        entry = self._noun_sg.get(word) or self._noun_pl.get(word)
        if entry is None:
            raise WorldLookupError(f"noun not in lexicon: {word!r}")
        return entry.type_name

    def relation_for_verb(self, word: str) -> str:
        hit = self._verb_forms.get(word)
        if hit is None:
            raise WorldLookupError(f"verb not in lexicon: {word!r}")
        return hit[1].relation

    def label_for(self, word: str) -> str:
        entry = self._names.get(word)
        if entry is None:
            raise WorldLookupError(f"proper name not in lexicon: {word!r}")
        return entry.label


def validate_lexicon(lexicon: Lexicon, legend: Legend) -> list[Violation]:
    """Check a lexicon against a legend: coverage, casing, and surface-form uniqueness.

    A surface word may play only one lexical role, so token classification is a
    pure function of the lexicon.
    """
    out: list[Violation] = []

    def bad(code: str, subject: str, message: str) -> None:
        out.append(Violation(code, subject, message))

    noun_types = [n.type_name for n in lexicon.nouns]
    for t in sorted(legend.type_names):
        hits = noun_types.count(t)
        if hits == 0:
            bad("missing_noun", f"type:{t}", "legend type has no noun entry")
        elif hits > 1:
            bad("duplicate_noun", f"type:{t}", "legend type has several noun entries")

    verb_rels = [v.relation for v in lexicon.verbs]
    for r in sorted(legend.relation_names):
        hits = verb_rels.count(r)
        if hits == 0:
            bad("missing_verb", f"relation:{r}", "legend relation has no verb entry")
        elif hits > 1:
            bad("duplicate_verb", f"relation:{r}", "legend relation has several verb entries")

    surfaces: dict[str, str] = {}

    def claim(word: str, role: str, subject: str) -> None:
        if not word.islower() or not word.isascii() or not word.isalpha():
            bad("bad_word", subject, f"surface word {word!r} must be lowercase ASCII letters")
            return
        if word in surfaces:
            bad("ambiguous_word", subject, f"{word!r} already used as {surfaces[word]}")
        else:
            surfaces[word] = role

    for n in lexicon.nouns:
        claim(n.singular, "a singular noun", f"noun:{n.type_name}")
        claim(n.plural, "a plural noun", f"noun:{n.type_name}")
    for v in lexicon.verbs:
        claim(v.third_sg, "a verb form", f"verb:{v.relation}")
        claim(v.base, "a verb form", f"verb:{v.relation}")
        claim(v.past_part, "a verb form", f"verb:{v.relation}")

    seen_words: set[str] = set()
    for nm in lexicon.names:
        subject = f"name:{nm.word}"
        if not _LABEL.match(nm.word):
            bad("bad_label", subject, "proper name must be a capitalized ASCII word")
        if not _LABEL.match(nm.label):
            bad("bad_label", subject, f"label {nm.label!r} must be a capitalized ASCII word")
        if nm.word in seen_words:
            bad("duplicate_name", subject, "proper name listed twice")
        seen_words.add(nm.word)

    return out


# --- file formats ------------------------------------------------------------

def _require_keys(obj: dict, required: tuple[str, ...], optional: tuple[str, ...], where: str) -> None:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    for key in required:
        if key not in obj:
            raise FormatError(f"{where}: missing key {key!r}")
    for key in obj:
        if key not in required and key not in optional:
            raise FormatError(f"{where}: unknown key {key!r}")


def _require_str(value, where: str) -> str:
    if not isinstance(value, str):
        raise FormatError(f"{where}: expected a string")
    return value


def ontograph_to_dict(world: Ontograph) -> dict:
    """Canonical dict form: fixed key order, individuals sorted by id, types sorted."""
    doc: dict = {
        "id": world.id,
        "legend": {
            "types": [{"name": t.name, "icon": t.icon} for t in world.legend.types],
            "relations": [{"name": r.name, "style": r.style} for r in world.legend.relations],
        },
        "individuals": [],
        "relations": [{"rel": r.rel, "from": r.source, "to": r.target} for r in world.relations],
    }
    for ind in sorted(world.individuals, key=lambda i: i.id):
        entry: dict = {"id": ind.id}
        if ind.label is not None:
            entry["label"] = ind.label
        entry["types"] = sorted(ind.types)
        doc["individuals"].append(entry)
    if world.positions:
        doc["positions"] = {i: list(world.positions[i]) for i in sorted(world.positions)}
    return doc


def ontograph_from_dict(doc: dict) -> Ontograph:
    _require_keys(doc, ("id", "legend", "individuals", "relations"), ("positions",), "ontograph")
    legend_doc = doc["legend"]
    _require_keys(legend_doc, ("types", "relations"), (), "legend")
    if not isinstance(legend_doc["types"], list) or not isinstance(legend_doc["relations"], list):
        raise FormatError("legend: types and relations must be lists")
    types = []
    for td in legend_doc["types"]:
        _require_keys(td, ("name", "icon"), (), "legend type")
        types.append(TypeDef(_require_str(td["name"], "type name"), _require_str(td["icon"], "icon")))
    rels = []
    for rd in legend_doc["relations"]:
        _require_keys(rd, ("name", "style"), (), "legend relation")
        rels.append(RelationDef(_require_str(rd["name"], "relation name"), _require_str(rd["style"], "style")))

    if not isinstance(doc["individuals"], list):
        raise FormatError("individuals: expected a list")
    individuals = []
    for idoc in doc["individuals"]:
        _require_keys(idoc, ("id", "types"), ("label",), "individual")
        if not isinstance(idoc["types"], list):
            raise FormatError("individual: types must be a list")
        label = None
        if "label" in idoc:
            label = _require_str(idoc["label"], "individual label")
        individuals.append(Individual(
            _require_str(idoc["id"], "individual id"),
            label,
            frozenset(_require_str(t, "type name") for t in idoc["types"]),
        ))

    if not isinstance(doc["relations"], list):
        raise FormatError("relations: expected a list")
    instances = []
    for rdoc in doc["relations"]:
        _require_keys(rdoc, ("rel", "from", "to"), (), "relation instance")
        instances.append(RelationInstance(
            _require_str(rdoc["rel"], "relation name"),
            _require_str(rdoc["from"], "relation source"),
            _require_str(rdoc["to"], "relation target"),
        ))

    positions = None
    if "positions" in doc and doc["positions"]:
        pdoc = doc["positions"]
        if not isinstance(pdoc, dict):
            raise FormatError("positions: expected an object")
        positions = {}
        for ident, xy in pdoc.items():
            if (not isinstance(xy, list) or len(xy) != 2
                    or not all(isinstance(v, int) and not isinstance(v, bool) for v in xy)):
                raise FormatError(f"positions: {ident!r} must map to two integer grid coordinates")
            positions[ident] = (xy[0], xy[1])

    return Ontograph(_require_str(doc["id"], "ontograph id"), Legend(tuple(types), tuple(rels)),
                     tuple(individuals), tuple(instances), positions)


def ontograph_to_json(world: Ontograph) -> str:
    return json.dumps(ontograph_to_dict(world), indent=2) + "\n"


def ontograph_from_json(text: str) -> Ontograph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return ontograph_from_dict(doc)


def load_ontograph(path: str | Path) -> Ontograph:
    return ontograph_from_json(Path(path).read_text(encoding="utf-8"))


def dump_ontograph(world: Ontograph, path: str | Path) -> None:
    Path(path).write_text(ontograph_to_json(world), encoding="utf-8")


def lexicon_to_dict(lexicon: Lexicon) -> dict:
    return {
        "nouns": [{"sg": n.singular, "pl": n.plural, "type": n.type_name} for n in lexicon.nouns],
        "verbs": [{"third_sg": v.third_sg, "base": v.base, "past_part": v.past_part, "rel": v.relation}
                  for v in lexicon.verbs],
        "names": [{"word": n.word, "label": n.label} for n in lexicon.names],
    }


def lexicon_from_dict(doc: dict) -> Lexicon:
    _require_keys(doc, ("nouns", "verbs", "names"), (), "lexicon")
    for key in ("nouns", "verbs", "names"):
        if not isinstance(doc[key], list):
            raise FormatError(f"lexicon: {key} must be a list")
    nouns = []
    for nd in doc["nouns"]:
        _require_keys(nd, ("sg", "pl", "type"), (), "noun entry")
        nouns.append(NounEntry(_require_str(nd["sg"], "sg"), _require_str(nd["pl"], "pl"),
                               _require_str(nd["type"], "type")))
    verbs = []
    for vd in doc["verbs"]:
        _require_keys(vd, ("third_sg", "base", "past_part", "rel"), (), "verb entry")
        verbs.append(VerbEntry(_require_str(vd["third_sg"], "third_sg"), _require_str(vd["base"], "base"),
                               _require_str(vd["past_part"], "past_part"), _require_str(vd["rel"], "rel")))
    names = []
    for md in doc["names"]:
        _require_keys(md, ("word", "label"), (), "name entry")
        names.append(NameEntry(_require_str(md["word"], "word"), _require_str(md["label"], "label")))
    return Lexicon(tuple(nouns), tuple(verbs), tuple(names))


def lexicon_to_json(lexicon: Lexicon) -> str:
    return json.dumps(lexicon_to_dict(lexicon), indent=2) + "\n"


def lexicon_from_json(text: str) -> Lexicon:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return lexicon_from_dict(doc)


def load_lexicon(path: str | Path) -> Lexicon:
    return lexicon_from_json(Path(path).read_text(encoding="utf-8"))


def dump_lexicon(lexicon: Lexicon, path: str | Path) -> None:
    Path(path).write_text(lexicon_to_json(lexicon), encoding="utf-8")
