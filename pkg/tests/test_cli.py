import json

import pytest

from ontographs.cli import main
from ontographs.corpus import fixtures, standard_lexicon
from ontographs.logic import load_answer_key
from ontographs.scoring import format_response_line
from ontographs.world import dump_lexicon, dump_ontograph, ontograph_to_json

from synthetic import build_log


@pytest.fixture
def fixture_dir(tmp_path):
    out = tmp_path / "exp"
    assert main(["fixtures", "-o", str(out)]) == 0
    return out


@pytest.fixture
def lexicon_file(tmp_path):
    path = tmp_path / "lexicon.json"
    dump_lexicon(standard_lexicon(), path)
    return str(path)


class TestFixturesCommand:
    def test_layout(self, fixture_dir):
        assert (fixture_dir / "experiment.json").exists()
        assert (fixture_dir / "lexicon.json").exists()
        for family in ("t1", "t2", "t3", "t4"):
            for name in ("ontograph.json", "statements.json", "key.json"):
                assert (fixture_dir / family / name).exists()
        manifest = json.loads((fixture_dir / "experiment.json").read_text())
        assert manifest["exclude"] == ["1/10", "1/3", "2/7", "2/9"]

    def test_emitted_key_matches_fixture_key(self, fixture_dir):
        key = load_answer_key(fixture_dir / "t2" / "key.json")
        assert key == fixtures()[1].key


class TestEval:
    def test_t2_fixture_prints_cwa_line(self, fixture_dir, capsys):
        code = main(["eval", str(fixture_dir / "t2" / "ontograph.json"),
                     str(fixture_dir / "t2" / "statements.json"),
                     "--lexicon", str(fixture_dir / "lexicon.json")])
        assert code == 0
        out = capsys.readouterr().out
        assert "2/2\ttrue" in out.splitlines()
        assert len(out.strip().splitlines()) == 10

    def test_byte_identical_across_runs(self, fixture_dir, capsys):
        args = ["eval", str(fixture_dir / "t1" / "ontograph.json"),
                str(fixture_dir / "t1" / "statements.json"),
                "--lexicon", str(fixture_dir / "lexicon.json")]
        main(args)
        first = capsys.readouterr().out
        main(args)
        assert capsys.readouterr().out == first


class TestParse:
    def test_unknown_word_is_domain_error(self, lexicon_file, capsys):
        code = main(["parse", "Mary xyzzies Tom.", "--lexicon", lexicon_file])
        assert code == 1
        err = capsys.readouterr().err
        assert "offset 5" in err and "xyzzies" in err

    def test_ast_output(self, lexicon_file, capsys):
        assert main(["parse", "Mary sees Tom.", "--lexicon", lexicon_file]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["kind"] == "simple"

    def test_fol_output(self, lexicon_file, capsys):
        assert main(["parse", "Every man loves a woman.", "--fol",
                     "--lexicon", lexicon_file]) == 0
        assert capsys.readouterr().out.startswith("(forall x ")


class TestValidateAndRender:
    def test_valid_file(self, fixture_dir, capsys):
        assert main(["validate", str(fixture_dir / "t1" / "ontograph.json")]) == 0
        assert capsys.readouterr().out == ""

    def test_violations_are_tsv_and_exit_1(self, tmp_path, capsys):
        from ontographs.world import Ontograph, RelationInstance
        base = fixtures()[0].world
        bad_world = Ontograph(base.id, base.legend, base.individuals,
                              (RelationInstance("admires", "mary", "tom"),))
        bad = tmp_path / "bad.json"
        dump_ontograph(bad_world, bad)
        assert main(["validate", str(bad)]) == 1
        out = capsys.readouterr().out
        assert out.startswith("undeclared_relation\t")

    def test_render_writes_svg(self, fixture_dir, tmp_path, capsys):
        out = tmp_path / "t1.svg"
        assert main(["render", str(fixture_dir / "t1" / "ontograph.json"),
                     "-o", str(out)]) == 0
        assert out.read_text().startswith("<?xml")

    def test_missing_file_is_domain_error(self, capsys):
        assert main(["validate", "/nonexistent/x.json"]) == 1
        assert "error:" in capsys.readouterr().err


class TestKeygen:
    def test_writes_key_file(self, fixture_dir, tmp_path):
        out = tmp_path / "key.json"
        assert main(["keygen", str(fixture_dir / "t1" / "ontograph.json"),
                     str(fixture_dir / "t1" / "statements.json"),
                     "--lexicon", str(fixture_dir / "lexicon.json"),
                     "-o", str(out)]) == 0
        assert load_answer_key(out) == fixtures()[0].key


class TestScore:
    @pytest.fixture
    def log_and_key(self, tmp_path, fixture_dir):
        log = tmp_path / "responses.ndjson"
        log.write_text("".join(format_response_line(r) for r in build_log()))
        key = tmp_path / "key.json"
        from ontographs.logic import dump_answer_key
        from synthetic import combined_key
        dump_answer_key(combined_key(), key)
        return log, key

    def test_table_matches_scoring_module(self, log_and_key, capsys):
        log, key = log_and_key
        assert main(["score", "--key", str(key), "--responses", str(log)]) == 0
        out = capsys.readouterr().out
        from ontographs.scoring import report_table, score
        from synthetic import build_log as rebuild, combined_key
        assert out == report_table(score(rebuild(), combined_key()))

    def test_exclude_flag(self, log_and_key, capsys):
        log, key = log_and_key
        assert main(["score", "--key", str(key), "--responses", str(log),
                     "--exclude", "1/3,1/10,2/7,2/9", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["aggregate"]["n_statements"] == 36
        assert "1/3" not in doc["per_statement"]

    def test_inconsistent_log_is_domain_error(self, tmp_path, log_and_key, capsys):
        log, key = log_and_key
        bad = tmp_path / "bad.ndjson"
        line = format_response_line(build_log()[0])
        bad.write_text(line + line)  # duplicate (subject, statement)
        assert main(["score", "--key", str(key), "--responses", str(bad)]) == 1


class TestUsageErrors:
    def test_unknown_command_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_missing_required_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["parse", "Mary sees Tom."])
        assert exc.value.code == 2
