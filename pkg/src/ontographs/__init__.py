"""Mini-world diagrams, a controlled-English subset, closed-world truth,
and timed classification experiments."""

from .cnl import ParseError, parse, parse_text, tokenize, unparse
from .corpus import FixtureSeries, fixtures, gen_random_statement, gen_random_world, standard_lexicon
from .logic import (AnswerKey, VocabularyError, evaluate, generate_answer_key,
                    ground_oracle, to_formula)
from .render import RenderConfig, render
from .scoring import ResponseRecord, ScoreReport, score, sign_test
from .world import (Individual, Legend, Lexicon, Ontograph, RelationInstance, Violation,
                    holds_relation, holds_type, validate)

__version__ = "0.1.0"
