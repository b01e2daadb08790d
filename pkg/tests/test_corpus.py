import pytest

from ontographs.cnl import PROPER_NAME, parse_text, tokenize
from ontographs.corpus import (EXCLUDED_SPECIAL_CASES, XorShift64, fixtures,
                               gen_random_statement, gen_random_world,
                               lexicon_for_world, standard_lexicon)
from ontographs.logic import evaluate, ground_oracle, to_formula
from ontographs.world import ontograph_to_json, validate, validate_lexicon

LEX = standard_lexicon()

# Hand-derived truth tables, worked out statement by statement against the
# fixture worlds before the keys were ever generated.
HAND_TABLES = {
    "T1": {"1/1": True, "1/2": False, "1/3": True, "1/4": True, "1/5": True,
           "1/6": False, "1/7": True, "1/8": False, "1/9": True, "1/10": True},
    "T2": {"2/1": True, "2/2": True, "2/3": False, "2/4": True, "2/5": False,
           "2/6": True, "2/7": True, "2/8": False, "2/9": True, "2/10": False},
    "T3": {"3/1": True, "3/2": True, "3/3": False, "3/4": True, "3/5": False,
           "3/6": True, "3/7": True, "3/8": True, "3/9": False, "3/10": False},
    "T4": {"4/1": True, "4/2": False, "4/3": True, "4/4": False, "4/5": True,
           "4/6": True, "4/7": False, "4/8": True, "4/9": True, "4/10": True},
}


class TestFixtures:
    def test_four_series_with_ten_statements_each(self):
        series = fixtures()
        assert [s.family for s in series] == ["T1", "T2", "T3", "T4"]
        for s in series:
            assert len(s.statements) == 10
            assert len(s.key.entries) == 10

    def test_worlds_validate_and_lexicon_covers_them(self):
        for s in fixtures():
            assert validate(s.world) == []
            assert validate_lexicon(LEX, s.world.legend) == []

    def test_t1_has_no_relations(self):
        assert fixtures()[0].world.relations == ()

    def test_t2_has_relations_and_named_individuals(self):
        world = fixtures()[1].world
        assert len(world.relations) >= 1
        assert any(ind.label for ind in world.individuals)

    def test_t3_covers_domain_range_and_cardinality(self):
        texts = [t for _, t in fixtures()[2].statements]
        assert any(t.startswith("Everything that") and "is a" in t for t in texts)
        assert any("that is" in t and "by" in t for t in texts)
        assert any(("at most" in t) or ("at least" in t) or ("exactly" in t) for t in texts)

    def test_t4_statements_avoid_names_and_type_nouns(self):
        nouns = {n.singular for n in LEX.nouns} | {n.plural for n in LEX.nouns}
        for _, text in fixtures()[3].statements:
            tokens = tokenize(text, LEX)
            assert all(t.kind != PROPER_NAME for t in tokens), text
            assert all(t.surface not in nouns for t in tokens), text

    def test_keys_match_hand_tables(self):
        for s in fixtures():
            assert s.key.truth_map() == HAND_TABLES[s.family], s.family

    def test_keys_cross_checked_against_ground_oracle(self):
        for s in fixtures():
            for sid, text in s.statements:
                f = to_formula(parse_text(text, LEX), LEX)
                assert ground_oracle(f, s.world) == HAND_TABLES[s.family][sid], sid

    def test_fixtures_are_deterministic(self):
        first, second = fixtures(), fixtures()
        for a, b in zip(first, second):
            assert ontograph_to_json(a.world) == ontograph_to_json(b.world)
            assert a.statements == b.statements
            assert a.key == b.key

    def test_special_case_ids_exist_in_the_corpus(self):
        ids = {sid for s in fixtures() for sid, _ in s.statements}
        assert EXCLUDED_SPECIAL_CASES <= ids


class TestXorShift:
    def test_deterministic_sequence(self):
        a, b = XorShift64(42), XorShift64(42)
        assert [a.next_u64() for _ in range(8)] == [b.next_u64() for _ in range(8)]

    def test_zero_seed_is_remapped(self):
        rng = XorShift64(0)
        assert rng.state != 0
        assert rng.next_u64() != 0

    def test_outputs_fit_64_bits(self):
        rng = XorShift64(7)
        for _ in range(100):
            assert 0 <= rng.next_u64() < (1 << 64)

    def test_chance_extremes(self):
        rng = XorShift64(5)
        assert all(not rng.chance(0.0) for _ in range(20))
        assert all(rng.chance(1.0) for _ in range(20))


class TestRandomWorlds:
    def test_same_seed_gives_byte_identical_worlds(self):
        a = gen_random_world(42, 5, 3, 2, 0.5)
        b = gen_random_world(42, 5, 3, 2, 0.5)
        assert ontograph_to_json(a) == ontograph_to_json(b)

    def test_zero_individuals_is_a_valid_empty_world(self):
        world = gen_random_world(9, 0, 2, 1, 0.7)
        assert world.individuals == ()
        assert validate(world) == []

    def test_generated_worlds_always_validate(self):
        assert validate(gen_random_world(42, 5, 3, 2, 0.5)) == []
        for seed in range(30):
            world = gen_random_world(seed, seed % 9, seed % 4, seed % 3, (seed % 5) / 4)
            assert validate(world) == [], seed

    def test_density_bounds(self):
        assert gen_random_world(3, 4, 1, 2, 0.0).relations == ()
        full = gen_random_world(3, 4, 1, 2, 1.0)
        assert len(full.relations) == 2 * 4 * 4

    def test_bad_arguments_rejected(self):
        with pytest.raises(ValueError):
            gen_random_world(1, -1, 1, 1, 0.5)
        with pytest.raises(ValueError):
            gen_random_world(1, 1, 99, 1, 0.5)
        with pytest.raises(ValueError):
            gen_random_world(1, 1, 1, 1, 1.5)


class TestRandomStatements:
    def test_same_seed_gives_identical_sentence(self):
        assert gen_random_statement(11, LEX) == gen_random_statement(11, LEX)

    def test_generated_statements_parse(self):
        for seed in range(500):
            text = gen_random_statement(seed, LEX)
            parse_text(text, LEX)  # must not raise

    def test_vocabulary_closure(self):
        world = gen_random_world(1, 2, 1, 1, 0.5)
        lex = lexicon_for_world(world)
        words = set()
        for seed in range(50):
            words.update(gen_random_statement(seed, lex).rstrip(".").split())
        allowed = {"If", "if", "then"} | {w.capitalize() for w in words if w == w.lower()}
        lexical = ({n.singular for n in lex.nouns} | {n.plural for n in lex.nouns}
                   | {v.third_sg for v in lex.verbs} | {v.base for v in lex.verbs}
                   | {v.past_part for v in lex.verbs} | {n.word for n in lex.names})
        keywords = {"a", "every", "no", "everything", "something", "nothing", "that",
                    "is", "by", "or", "and", "not", "does", "it", "itself", "but",
                    "at", "most", "least", "exactly", "things", "if", "then"}
        for word in words:
            plain = word.lower()
            assert (plain in keywords or word in lexical or plain in lexical
                    or plain.isdigit()), word

    def test_degenerate_lexicon_rejected(self):
        from ontographs.world import Lexicon
        with pytest.raises(ValueError):
            gen_random_statement(1, Lexicon((), (), ()))

    def test_statements_evaluate_on_matching_worlds(self):
        for seed in range(60):
            world = gen_random_world(seed, 1 + seed % 6, 1 + seed % 3, 1 + seed % 2, 0.4)
            lex = lexicon_for_world(world)
            f = to_formula(parse_text(gen_random_statement(seed + 1000, lex), lex), lex)
            assert evaluate(f, world) in (True, False)
