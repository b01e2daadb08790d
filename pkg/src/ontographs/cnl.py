"""Controlled-English statements: tokenizer, recursive-descent parser, unparser.

Accepted sentences (LL(2)):

    statement   = simple "." | "if" simple "then" simple "." ;
    simple      = subject predcoord ;
    subject     = PROPER | ("a"|"every"|"no") NOUN_SG
                | ("everything"|"something"|"nothing") [relclause] ;
    relclause   = "that" ( VERB_3SG object | "is" VERB_PP "by" object ) ;
    predcoord   = pred { conn pred } ;            all conn alike: "and" xor "or"
    pred        = "is" ["not"] "a" NOUN_SG
                | VERB_3SG object
                | "does" "not" VERB_BASE object ;
    object      = PROPER | "a" NOUN_SG | "everything" | "something" | "nothing"
                | "it" | "itself" | "nothing" "but" NOUN_PL | cardinal ;
    cardinal    = ("at" "most" | "at" "least" | "exactly") NUM
                  ( NOUN_SG if NUM = 1, NOUN_PL otherwise | "things" ) ;

"it" is only available when the subject is a quantifier word carrying a
relative clause whose object is "something"; it denotes that clause's object.
"itself" repeats the subject.  The first word of a sentence may be
capitalized; everything else is lowercase except proper names.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .world import FormatError, Lexicon

KEYWORD = "keyword"
PROPER_NAME = "proper_name"
NOUN_SG = "noun_sg"
NOUN_PL = "noun_pl"
VERB_3SG = "verb_3sg"
VERB_BASE = "verb_base"
VERB_PP = "verb_pp"
NUMBER = "number"
PERIOD = "period"

KEYWORDS = frozenset({
    "if", "then", "a", "every", "no", "everything", "something", "nothing",
    "that", "is", "by", "or", "and", "not", "does", "it", "itself", "but",
    "at", "most", "least", "exactly", "things",
})

_WORD = re.compile(r"[A-Za-z]+")
_NUM = re.compile(r"[0-9]+")


class ParseError(ValueError):
    """Rejection of a sentence, located at a character offset.

    `code` tags the failure kind: unknown_word, bad_character, missing_period,
    syntax, agreement, mixed_connective, unbound_anaphor.
    """

    def __init__(self, message: str, offset: int, code: str = "syntax", expected: tuple[str, ...] = ()):
        detail = f"offset {offset}: {message}"
        if expected:
            detail += " (expected " + " | ".join(expected) + ")"
        super().__init__(detail)
        self.message = message
        self.offset = offset
        self.code = code
        self.expected = tuple(expected)


@dataclass(frozen=True)
class Token:
    kind: str
    surface: str
    offset: int


def tokenize(text: str, lexicon: Lexicon) -> list[Token]:
    """Split a sentence into classified tokens; reject unknown words with their offset."""
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == ".":
            tokens.append(Token(PERIOD, ".", i))
            i += 1
            continue
        m = _NUM.match(text, i)
        if m:
            tokens.append(Token(NUMBER, m.group(), i))
            i = m.end()
            continue
        m = _WORD.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {ch!r}", i, code="bad_character")
        tokens.append(_classify(m.group(), i, lexicon, first=not tokens))
        i = m.end()

    if not tokens:
        raise ParseError("empty sentence", 0, code="missing_period")
    last = tokens[-1]
    if last.kind != PERIOD:
        raise ParseError("sentence must end with '.'", last.offset + len(last.surface), code="missing_period")
    for tok in tokens[:-1]:
        if tok.kind == PERIOD:
            raise ParseError("'.' before the end of the sentence", tok.offset, code="syntax")
    return tokens


def _classify(word: str, offset: int, lexicon: Lexicon, first: bool) -> Token:
    if lexicon.name(word) is not None:
        return Token(PROPER_NAME, word, offset)
    # Only the sentence-initial word may carry a capital that is not a proper name.
    plain = word if word.islower() else None
    if plain is None and first and word[:1].isupper() and (not word[1:] or word[1:].islower()):
        plain = word.lower()
    if plain is not None:
        if plain in KEYWORDS:
            return Token(KEYWORD, plain, offset)
        if lexicon.noun_sg(plain):
            return Token(NOUN_SG, plain, offset)
        if lexicon.noun_pl(plain):
            return Token(NOUN_PL, plain, offset)
        hit = lexicon.verb_form(plain)
        if hit:
            kind = {"third_sg": VERB_3SG, "base": VERB_BASE, "past_part": VERB_PP}[hit[0]]
            return Token(kind, plain, offset)
    raise ParseError(f"unknown word {word!r}", offset, code="unknown_word")


# --- AST ----------------------------------------------------------------------

@dataclass(frozen=True)
class ProperName:
    word: str


@dataclass(frozen=True)
class DetNoun:
    det: str          # "a" | "every" | "no"
    noun: str


@dataclass(frozen=True)
class RelClause:
    voice: str        # "active" | "passive"
    verb: str         # third_sg surface (active) or past participle (passive)
    obj: "Object"


@dataclass(frozen=True)
class QuantSubject:
    quant: str        # "everything" | "something" | "nothing"
    relclause: RelClause | None = None


@dataclass(frozen=True)
class NounObject:
    noun: str


@dataclass(frozen=True)
class QuantObject:
    quant: str


@dataclass(frozen=True)
class ItObject:
    pass


@dataclass(frozen=True)
class ItselfObject:
    pass


@dataclass(frozen=True)
class NothingBut:
    noun_pl: str


@dataclass(frozen=True)
class Cardinal:
    mode: str         # "at_most" | "at_least" | "exactly"
    n: int
    noun: str | None  # surface as written (sg for 1, pl otherwise); None for "things"


@dataclass(frozen=True)
class IsA:
    negated: bool
    noun: str


@dataclass(frozen=True)
class VerbPred:
    verb: str         # third_sg surface
    obj: "Object"


@dataclass(frozen=True)
class NegVerbPred:
    verb: str         # base surface
    obj: "Object"


@dataclass(frozen=True)
class PredCoord:
    conn: str | None  # "and" | "or"; None when a single predicate
    preds: tuple["Pred", ...]


@dataclass(frozen=True)
class Simple:
    subject: "Subject"
    predicates: PredCoord


@dataclass(frozen=True)
class Conditional:
    antecedent: Simple
    consequent: Simple


Subject = ProperName | DetNoun | QuantSubject
Object = ProperName | NounObject | QuantObject | ItObject | ItselfObject | NothingBut | Cardinal
Pred = IsA | VerbPred | NegVerbPred
Statement = Simple | Conditional


# --- parser -------------------------------------------------------------------

_SUBJECT_EXPECTED = ("a proper name", "'a'", "'every'", "'no'", "'everything'", "'something'", "'nothing'")
_OBJECT_EXPECTED = ("a proper name", "'a'", "'everything'", "'something'", "'nothing'",
                    "'it'", "'itself'", "'at'", "'exactly'")
_PRED_EXPECTED = ("'is'", "a verb", "'does not'")


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.it_ok = False

    def peek(self, ahead: int = 0) -> Token | None:
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == KEYWORD and tok.surface in words

    def fail(self, message: str, code: str = "syntax", expected: tuple[str, ...] = ()) -> "ParseError":
        tok = self.peek()
        offset = tok.offset if tok else (self.tokens[-1].offset if self.tokens else 0)
        raise ParseError(message, offset, code=code, expected=expected)

    def expect_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            self.fail(f"expected {word!r}", expected=(f"'{word}'",))
        return self.advance()

    def expect_noun_sg(self, context: str) -> str:
        tok = self.peek()
        if tok is not None and tok.kind == NOUN_SG:
            return self.advance().surface
        if tok is not None and tok.kind == NOUN_PL:
            raise ParseError(f"singular noun required {context}", tok.offset, code="agreement")
        self.fail(f"expected a singular noun {context}", expected=("a singular noun",))

    def statement(self) -> Statement:
        if self.at_keyword("if"):
            self.advance()
            antecedent = self.simple()
            self.expect_keyword("then")
            consequent = self.simple()
            stmt: Statement = Conditional(antecedent, consequent)
        else:
            stmt = self.simple()
        tok = self.peek()
        if tok is None or tok.kind != PERIOD:
            self.fail("expected '.'", expected=("'.'",))
        self.advance()
        if self.pos != len(self.tokens):
            self.fail("text after the final '.'")
        return stmt

    def simple(self) -> Simple:
        subject = self.subject()
        self.it_ok = (isinstance(subject, QuantSubject)
                      and subject.relclause is not None
                      and subject.relclause.obj == QuantObject("something"))
        predicates = self.predcoord()
        return Simple(subject, predicates)

    def subject(self) -> Subject:
        tok = self.peek()
        if tok is None:
            self.fail("expected a subject", expected=_SUBJECT_EXPECTED)
        if tok.kind == PROPER_NAME:
            return ProperName(self.advance().surface)
        if tok.kind == KEYWORD:
            if tok.surface in ("a", "every", "no"):
                det = self.advance().surface
                return DetNoun(det, self.expect_noun_sg(f"after {det!r}"))
            if tok.surface in ("everything", "something", "nothing"):
                quant = self.advance().surface
                relclause = self.relclause() if self.at_keyword("that") else None
                return QuantSubject(quant, relclause)
        self.fail("expected a subject", expected=_SUBJECT_EXPECTED)

    def relclause(self) -> RelClause:
        self.expect_keyword("that")
        tok = self.peek()
        if tok is not None and tok.kind == VERB_3SG:
            verb = self.advance().surface
            return RelClause("active", verb, self.object_(in_relclause=True))
        if tok is not None and tok.kind == VERB_BASE:
            raise ParseError("third-person singular verb required in a relative clause",
                             tok.offset, code="agreement")
        if self.at_keyword("is"):
            self.advance()
            tok = self.peek()
            if tok is None or tok.kind != VERB_PP:
                self.fail("expected a past participle after 'is'", expected=("a past participle",))
            verb = self.advance().surface
            self.expect_keyword("by")
            return RelClause("passive", verb, self.object_(in_relclause=True))
        self.fail("expected a verb in the relative clause", expected=("a verb", "'is'"))

    def predcoord(self) -> PredCoord:
        preds = [self.pred()]
        conn: str | None = None
        while self.at_keyword("and", "or"):
            tok = self.peek()
            if conn is None:
                conn = tok.surface
            elif conn != tok.surface:
                raise ParseError("cannot mix 'and' and 'or' in one sentence",
                                 tok.offset, code="mixed_connective")
            self.advance()
            preds.append(self.pred())
        return PredCoord(conn, tuple(preds))

    def pred(self) -> Pred:
        tok = self.peek()
        if tok is None:
            self.fail("expected a predicate", expected=_PRED_EXPECTED)
        if self.at_keyword("is"):
            self.advance()
            negated = False
            if self.at_keyword("not"):
                self.advance()
                negated = True
            self.expect_keyword("a")
            return IsA(negated, self.expect_noun_sg("after 'a'"))
        if tok.kind == VERB_3SG:
            verb = self.advance().surface
            return VerbPred(verb, self.object_())
        if self.at_keyword("does"):
            self.advance()
            self.expect_keyword("not")
            tok = self.peek()
            if tok is not None and tok.kind == VERB_BASE:
                verb = self.advance().surface
                return NegVerbPred(verb, self.object_())
            if tok is not None and tok.kind == VERB_3SG:
                raise ParseError("base verb required after 'does not'", tok.offset, code="agreement")
            self.fail("expected a base verb after 'does not'", expected=("a base verb",))
        if tok.kind == VERB_BASE:
            raise ParseError("verb must be third-person singular (or use 'does not')",
                             tok.offset, code="agreement")
        self.fail("expected a predicate", expected=_PRED_EXPECTED)

    def object_(self, in_relclause: bool = False) -> Object:
        tok = self.peek()
        if tok is None:
            self.fail("expected an object", expected=_OBJECT_EXPECTED)
        if tok.kind == PROPER_NAME:
            return ProperName(self.advance().surface)
        if tok.kind == KEYWORD:
            if tok.surface == "a":
                self.advance()
                return NounObject(self.expect_noun_sg("after 'a'"))
            if tok.surface in ("everything", "something"):
                return QuantObject(self.advance().surface)
            if tok.surface == "nothing":
                nxt = self.peek(1)
                if nxt is not None and nxt.kind == KEYWORD and nxt.surface == "but":
                    self.advance()
                    self.advance()
                    tok = self.peek()
                    if tok is not None and tok.kind == NOUN_PL:
                        return NothingBut(self.advance().surface)
                    if tok is not None and tok.kind == NOUN_SG:
                        raise ParseError("plural noun required after 'nothing but'",
                                         tok.offset, code="agreement")
                    self.fail("expected a plural noun after 'nothing but'", expected=("a plural noun",))
                self.advance()
                return QuantObject("nothing")
            if tok.surface == "it":
                if in_relclause or not self.it_ok:
                    raise ParseError("'it' does not refer to anything here", tok.offset,
                                     code="unbound_anaphor")
                self.advance()
                return ItObject()
            if tok.surface == "itself":
                self.advance()
                return ItselfObject()
            if tok.surface == "at":
                self.advance()
                if self.at_keyword("most"):
                    self.advance()
                    return self.cardinal("at_most")
                if self.at_keyword("least"):
                    self.advance()
                    return self.cardinal("at_least")
                self.fail("expected 'most' or 'least' after 'at'", expected=("'most'", "'least'"))
            if tok.surface == "exactly":
                self.advance()
                return self.cardinal("exactly")
        self.fail("expected an object", expected=_OBJECT_EXPECTED)

    def cardinal(self, mode: str) -> Cardinal:
        tok = self.peek()
        if tok is None or tok.kind != NUMBER:
            self.fail("expected a number", expected=("a number",))
        n = int(self.advance().surface)
        tok = self.peek()
        if tok is not None and tok.kind == KEYWORD and tok.surface == "things":
            self.advance()
            return Cardinal(mode, n, None)
        if tok is not None and tok.kind == NOUN_SG:
            if n != 1:
                raise ParseError(f"plural noun required after {n}", tok.offset, code="agreement")
            return Cardinal(mode, n, self.advance().surface)
        if tok is not None and tok.kind == NOUN_PL:
            if n == 1:
                raise ParseError("singular noun required after 1", tok.offset, code="agreement")
            return Cardinal(mode, n, self.advance().surface)
        self.fail("expected a noun or 'things' after the number", expected=("a noun", "'things'"))


def parse(tokens: list[Token]) -> Statement:
    """Parse a token list into the unique AST for the sentence, or raise ParseError."""
    return _Parser(tokens).statement()


def parse_text(text: str, lexicon: Lexicon) -> Statement:
    return parse(tokenize(text, lexicon))


# --- unparser -------------------------------------------------------------------

def unparse(statement: Statement) -> str:
    """Render an AST back to its sentence; parsing the result reproduces the AST."""
    words = _statement_words(statement)
    text = " ".join(words) + "."
    return text[0].upper() + text[1:]


def _statement_words(statement: Statement) -> list[str]:
    if isinstance(statement, Conditional):
        return ["if"] + _simple_words(statement.antecedent) + ["then"] + _simple_words(statement.consequent)
    return _simple_words(statement)


def _simple_words(simple: Simple) -> list[str]:
    words = _subject_words(simple.subject)
    coord = simple.predicates
    for i, pred in enumerate(coord.preds):
        if i:
            words.append(coord.conn or "and")
        words.extend(_pred_words(pred))
    return words


def _subject_words(subject: Subject) -> list[str]:
    if isinstance(subject, ProperName):
        return [subject.word]
    if isinstance(subject, DetNoun):
        return [subject.det, subject.noun]
    words = [subject.quant]
    if subject.relclause is not None:
        rc = subject.relclause
        words.append("that")
        if rc.voice == "active":
            words.append(rc.verb)
        else:
            words.extend(["is", rc.verb, "by"])
        words.extend(_object_words(rc.obj))
    return words


def _pred_words(pred: Pred) -> list[str]:
    if isinstance(pred, IsA):
        return ["is", "not", "a", pred.noun] if pred.negated else ["is", "a", pred.noun]
    if isinstance(pred, VerbPred):
        return [pred.verb] + _object_words(pred.obj)
    return ["does", "not", pred.verb] + _object_words(pred.obj)


def _object_words(obj: Object) -> list[str]:
    if isinstance(obj, ProperName):
        return [obj.word]
    if isinstance(obj, NounObject):
        return ["a", obj.noun]
    if isinstance(obj, QuantObject):
        return [obj.quant]
    if isinstance(obj, ItObject):
        return ["it"]
    if isinstance(obj, ItselfObject):
        return ["itself"]
    if isinstance(obj, NothingBut):
        return ["nothing", "but", obj.noun_pl]
    mode = {"at_most": ["at", "most"], "at_least": ["at", "least"], "exactly": ["exactly"]}[obj.mode]
    return mode + [str(obj.n), obj.noun if obj.noun is not None else "things"]


def ast_to_dict(node) -> dict:
    """JSON-friendly view of an AST, for the command line and debugging."""
    if isinstance(node, Conditional):
        return {"kind": "conditional", "if": ast_to_dict(node.antecedent),
                "then": ast_to_dict(node.consequent)}
    if isinstance(node, Simple):
        preds = [ast_to_dict(p) for p in node.predicates.preds]
        return {"kind": "simple", "subject": ast_to_dict(node.subject),
                "connective": node.predicates.conn, "predicates": preds}
    if isinstance(node, ProperName):
        return {"kind": "proper", "word": node.word}
    if isinstance(node, DetNoun):
        return {"kind": "det_noun", "det": node.det, "noun": node.noun}
    if isinstance(node, QuantSubject):
        out = {"kind": "quant", "quant": node.quant}
        if node.relclause is not None:
            out["relclause"] = ast_to_dict(node.relclause)
        return out
    if isinstance(node, RelClause):
        return {"kind": "relclause", "voice": node.voice, "verb": node.verb,
                "object": ast_to_dict(node.obj)}
    if isinstance(node, IsA):
        return {"kind": "is_a", "negated": node.negated, "noun": node.noun}
    if isinstance(node, VerbPred):
        return {"kind": "verb", "verb": node.verb, "object": ast_to_dict(node.obj)}
    if isinstance(node, NegVerbPred):
        return {"kind": "neg_verb", "verb": node.verb, "object": ast_to_dict(node.obj)}
    if isinstance(node, NounObject):
        return {"kind": "a_noun", "noun": node.noun}
    if isinstance(node, QuantObject):
        return {"kind": "quant", "quant": node.quant}
    if isinstance(node, ItObject):
        return {"kind": "it"}
    if isinstance(node, ItselfObject):
        return {"kind": "itself"}
    if isinstance(node, NothingBut):
        return {"kind": "nothing_but", "noun_pl": node.noun_pl}
    if isinstance(node, Cardinal):
        return {"kind": "cardinal", "mode": node.mode, "n": node.n, "noun": node.noun}
    raise TypeError(f"not an AST node: {node!r}")


# --- statement files ------------------------------------------------------------

def load_statements(path: str | Path) -> list[tuple[str, str]]:
    """Read a statement file: a JSON list of {id, text} with unique ids."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, list):
        raise FormatError("statement file: expected a JSON list")
    out: list[tuple[str, str]] = []
    seen: set[str] = set()
    for entry in doc:
        if not isinstance(entry, dict) or set(entry) != {"id", "text"}:
            raise FormatError("statement file: entries must be {id, text}")
        sid, text = entry["id"], entry["text"]
        if not isinstance(sid, str) or not isinstance(text, str):
            raise FormatError("statement file: id and text must be strings")
        if sid in seen:
            raise FormatError(f"statement file: duplicate id {sid!r}")
        seen.add(sid)
        out.append((sid, text))
    return out


def statements_to_json(statements: list[tuple[str, str]]) -> str:
    return json.dumps([{"id": sid, "text": text} for sid, text in statements], indent=2) + "\n"


def dump_statements(statements: list[tuple[str, str]], path: str | Path) -> None:
    Path(path).write_text(statements_to_json(statements), encoding="utf-8")
