import pytest

from ontographs.corpus import fixtures
from ontographs.render import DEFAULT_CONFIG, RenderConfig, RenderConfigError, render
from ontographs.world import (Individual, Legend, Ontograph, RelationDef,
                              RelationInstance, TypeDef)


def two_node_world():
    legend = Legend((TypeDef("woman", "circle_person"), TypeDef("man", "triangle")),
                    (RelationDef("sees", "solid"),))
    return Ontograph("pair", legend,
                     (Individual("mary", "Mary", {"woman"}),
                      Individual("tom", "Tom", {"man"})),
                     (RelationInstance("sees", "tom", "mary"),))


class TestRender:
    def test_empty_world_still_shows_the_legend(self):
        legend = Legend((TypeDef("woman", "circle_person"), TypeDef("man", "triangle")), ())
        svg = render(Ontograph("empty", legend))
        assert svg.count('class="legend-entry"') == 2
        assert svg.count('class="individual"') == 0
        assert 'class="world-frame"' in svg

    def test_byte_identical_across_calls(self):
        world = two_node_world()
        assert render(world) == render(world)

    def test_one_arrow_with_marker_between_two_icons(self):
        svg = render(two_node_world())
        assert svg.count('class="arrow"') == 1
        assert svg.count('class="individual"') == 2
        assert 'marker-end="url(#arrowhead)"' in svg

    def test_counts_match_on_all_fixtures(self):
        for series in fixtures():
            svg = render(series.world)
            assert svg.count('class="individual"') == len(series.world.individuals)
            assert svg.count('class="arrow"') == len(series.world.relations)
            expected = len(series.world.legend.types) + len(series.world.legend.relations)
            assert svg.count('class="legend-entry"') == expected

    def test_fixture_rendering_is_deterministic(self):
        for series in fixtures():
            assert render(series.world) == render(series.world)

    def test_comment_carries_the_ontograph_id(self):
        svg = render(two_node_world())
        assert "<!-- ontograph: pair -->" in svg
        assert svg.startswith('<?xml version="1.0" encoding="UTF-8"?>')

    def test_no_timestamps(self):
        svg = render(two_node_world())
        assert "date" not in svg.lower()

    def test_labels_render_under_icons(self):
        svg = render(two_node_world())
        assert ">Mary</text>" in svg
        assert ">Tom</text>" in svg

    def test_self_edge_draws_a_loop(self):
        legend = Legend((), (RelationDef("loves", "dashed"),))
        world = Ontograph("loop", legend, (Individual("tom", "Tom"),),
                          (RelationInstance("loves", "tom", "tom"),))
        svg = render(world)
        assert svg.count('class="arrow"') == 1
        assert " C " in svg.split('class="arrow"')[1][:200]

    def test_untyped_individual_uses_generic_icon(self):
        legend = Legend((), (RelationDef("sees", "solid"),))
        svg = render(Ontograph("anon", legend, (Individual("ia"),)))
        assert svg.count('class="individual"') == 1

    def test_unknown_icon_rejected(self):
        legend = Legend((TypeDef("woman", "hexagon"),), ())
        world = Ontograph("w", legend)
        with pytest.raises(RenderConfigError):
            render(world)

    def test_unknown_arrow_style_rejected(self):
        legend = Legend((), (RelationDef("sees", "wavy"),))
        with pytest.raises(RenderConfigError):
            render(Ontograph("w", legend))

    def test_explicit_positions_are_used(self):
        world = two_node_world()
        moved = Ontograph(world.id, world.legend, world.individuals, world.relations,
                          {"mary": (0, 0), "tom": (4, 0)})
        assert render(world) != render(moved)

    def test_integer_pixel_dimensions(self):
        svg = render(two_node_world())
        head = svg.split("<svg", 1)[1].split(">", 1)[0]
        import re
        m = re.search(r'width="(\d+)" height="(\d+)"', head)
        assert m, head

    def test_cell_size_is_configurable(self):
        world = two_node_world()
        big = RenderConfig(cell_size=200)
        assert render(world, big) != render(world, DEFAULT_CONFIG)

    def test_parallel_and_opposite_edges_get_distinct_paths(self):
        legend = Legend((), (RelationDef("sees", "solid"), RelationDef("loves", "dashed")))
        world = Ontograph("multi", legend,
                          (Individual("ia"), Individual("ib")),
                          (RelationInstance("sees", "ia", "ib"),
                           RelationInstance("loves", "ia", "ib"),
                           RelationInstance("sees", "ib", "ia")))
        svg = render(world)
        assert svg.count('class="arrow"') == 3
        paths = [seg.split('d="')[1].split('"')[0]
                 for seg in svg.split('class="arrow"')[1:]]
        assert len(set(paths)) == 3
