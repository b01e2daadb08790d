import pytest

from ontographs.world import (FormatError, Individual, Legend, Lexicon, NameEntry,
                              NounEntry, Ontograph, RelationDef, RelationInstance,
                              TypeDef, VerbEntry, Violation, WorldLookupError,
                              holds_relation, holds_type, lexicon_from_json,
                              lexicon_to_json, ontograph_from_json, ontograph_to_json,
                              validate, validate_lexicon)


def small_legend():
    return Legend(
        (TypeDef("woman", "circle_person"), TypeDef("doctor", "star")),
        (RelationDef("sees", "solid"), RelationDef("loves", "dashed")),
    )


def small_world():
    return Ontograph(
        "clinic",
        small_legend(),
        (
            Individual("mary", "Mary", {"woman"}),
            Individual("tom", "Tom", set()),
        ),
        (RelationInstance("sees", "tom", "mary"),),
    )


class TestValidate:
    def test_empty_world_is_legal(self):
        assert validate(Ontograph("empty", small_legend())) == []

    def test_small_world_is_valid(self):
        assert validate(small_world()) == []

    def test_undeclared_relation(self):
        world = Ontograph("w", small_legend(),
                          (Individual("a"), Individual("b")),
                          (RelationInstance("admires", "a", "b"),))
        codes = [v.code for v in validate(world)]
        assert codes == ["undeclared_relation"]

    def test_duplicate_label(self):
        world = Ontograph("w", small_legend(),
                          (Individual("m_one", "Mary"), Individual("m_two", "Mary")))
        codes = [v.code for v in validate(world)]
        assert codes == ["duplicate_label"]

    def test_duplicate_instance_not_deduplicated(self):
        edge = RelationInstance("sees", "mary", "tom")
        world = Ontograph("w", small_legend(),
                          (Individual("mary"), Individual("tom")), (edge, edge))
        assert [v.code for v in validate(world)] == ["duplicate_instance"]

    def test_undeclared_type_membership(self):
        world = Ontograph("w", small_legend(), (Individual("a", None, {"driver"}),))
        assert [v.code for v in validate(world)] == ["undeclared_type"]

    def test_bad_identifiers_and_unknown_endpoints(self):
        world = Ontograph("Bad-Id", small_legend(),
                          (Individual("Ok-Not", "lowercase"),),
                          (RelationInstance("sees", "ghost", "Ok-Not"),),
                          {"ghost2": (0, 0)})
        codes = {v.code for v in validate(world)}
        assert "bad_identifier" in codes
        assert "bad_label" in codes
        assert "unknown_individual" in codes

    def test_validate_is_total_and_repeatable(self):
        world = Ontograph("w", Legend((TypeDef("woman", "circle_person"),) * 2,
                                      (RelationDef("woman", "solid"),)))
        first = validate(world)
        assert [v.code for v in first] == ["duplicate_type", "name_clash"]
        assert validate(world) == first

    def test_self_edges_are_legal(self):
        world = Ontograph("w", small_legend(), (Individual("tom"),),
                          (RelationInstance("loves", "tom", "tom"),))
        assert validate(world) == []
        assert holds_relation(world, "loves", "tom", "tom") is True

    def test_violation_is_machine_readable(self):
        world = Ontograph("w", small_legend(), (),
                          (RelationInstance("admires", "a", "b"),))
        violation = validate(world)[0]
        assert isinstance(violation, Violation)
        assert violation.subject.startswith("relation:admires")


class TestLookup:
    def test_listed_membership_is_true(self):
        assert holds_type(small_world(), "woman", "mary") is True

    def test_unlisted_membership_is_false(self):
        assert holds_type(small_world(), "doctor", "mary") is False

    def test_unknown_individual_raises(self):
        with pytest.raises(WorldLookupError):
            holds_type(small_world(), "woman", "nobody")

    def test_undeclared_type_raises(self):
        with pytest.raises(WorldLookupError):
            holds_type(small_world(), "driver", "mary")

    def test_missing_edge_is_false(self):
        assert holds_relation(small_world(), "sees", "mary", "tom") is False

    def test_listed_edge_is_true(self):
        assert holds_relation(small_world(), "sees", "tom", "mary") is True

    def test_undeclared_relation_raises(self):
        with pytest.raises(WorldLookupError):
            holds_relation(small_world(), "admires", "mary", "tom")

    def test_lookups_are_pure(self):
        world = small_world()
        results = [holds_relation(world, "sees", "tom", "mary") for _ in range(5)]
        assert results == [True] * 5


class TestSerialization:
    def test_round_trip_is_byte_identical_for_canonical_input(self):
        canonical = ontograph_to_json(small_world())
        assert ontograph_to_json(ontograph_from_json(canonical)) == canonical

    def test_individuals_are_sorted_in_canonical_form(self):
        world = Ontograph("w", small_legend(),
                          (Individual("zeta"), Individual("alpha")))
        text = ontograph_to_json(world)
        assert text.index('"alpha"') < text.index('"zeta"')

    def test_unknown_keys_rejected(self):
        text = ontograph_to_json(small_world()).replace('"id":', '"note": "x", "id":', 1)
        with pytest.raises(FormatError):
            ontograph_from_json(text)

    def test_positions_round_trip(self):
        world = Ontograph("w", small_legend(), (Individual("a"), Individual("b")),
                          (), {"a": (0, 1), "b": (2, 0)})
        again = ontograph_from_json(ontograph_to_json(world))
        assert again.positions == {"a": (0, 1), "b": (2, 0)}

    def test_bad_json_is_a_format_error(self):
        with pytest.raises(FormatError):
            ontograph_from_json("{not json")

    def test_label_omitted_when_absent(self):
        text = ontograph_to_json(Ontograph("w", small_legend(), (Individual("a"),)))
        assert '"label"' not in text


class TestLexicon:
    def lexicon(self):
        return Lexicon(
            (NounEntry("woman", "women", "woman"), NounEntry("doctor", "doctors", "doctor")),
            (VerbEntry("sees", "see", "seen", "sees"), VerbEntry("loves", "love", "loved", "loves")),
            (NameEntry("Mary", "Mary"),),
        )

    def test_valid_lexicon_passes(self):
        assert validate_lexicon(self.lexicon(), small_legend()) == []

    def test_missing_entries_reported(self):
        lex = Lexicon((NounEntry("woman", "women", "woman"),),
                      (VerbEntry("sees", "see", "seen", "sees"),), ())
        codes = {v.code for v in validate_lexicon(lex, small_legend())}
        assert codes == {"missing_noun", "missing_verb"}

    def test_ambiguous_surface_reported(self):
        lex = Lexicon((NounEntry("saw", "saws", "saw_type"),),
                      (VerbEntry("sees", "see", "saw", "sees"),), ())
        legend = Legend((TypeDef("saw_type", "generic"),), (RelationDef("sees", "solid"),))
        codes = {v.code for v in validate_lexicon(lex, legend)}
        assert "ambiguous_word" in codes

    def test_uppercase_surface_rejected(self):
        lex = Lexicon((NounEntry("Woman", "women", "woman"),), (), ())
        codes = {v.code for v in validate_lexicon(lex, Legend((TypeDef("woman", "generic"),), ()))}
        assert "bad_word" in codes

    def test_lookup_helpers(self):
        lex = self.lexicon()
        assert lex.type_for_noun("women") == "woman"
        assert lex.relation_for_verb("seen") == "sees"
        assert lex.label_for("Mary") == "Mary"
        with pytest.raises(WorldLookupError):
            lex.type_for_noun("driver")

    def test_json_round_trip(self):
        lex = self.lexicon()
        assert lexicon_from_json(lexicon_to_json(lex)) == lex
