import json
import shutil
import subprocess
import sys
import xml.dom.minidom

import pytest

from hilbfan.cli import (
    Config,
    _is_prime,
    build_parser,
    main,
    parse_direction,
    parse_ideal,
    parse_substitution,
    staircase_rows,
)
from hilbfan.errors import ParseError
from hilbfan.fan import boundary_diagram, standard_fan
from hilbfan.staircase import Staircase


def I(*steps):
    return Staircase.from_steps(steps)


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def run_json(capsys, *argv):
    rc, out, err = run(capsys, *argv, "--format", "json")
    assert rc == 0, err
    return json.loads(out)


@pytest.fixture()
def golden_copy(tmp_path):
    from importlib import resources

    src = resources.files("hilbfan").joinpath("golden")
    dst = tmp_path / "golden"
    shutil.copytree(str(src), str(dst))
    return dst


class TestIdealGrammar:
    def test_step_form(self):
        assert parse_ideal("I(1,2)") == I(1, 2)
        assert parse_ideal("I(4)") == I(4)
        assert parse_ideal(" I ( 1 , 2 ) ") == I(1, 2)

    def test_zero_steps_allowed_inside(self):
        assert parse_ideal("I(2,0)") == I(2, 0)

    def test_gens_form(self):
        assert parse_ideal("gens: x, y^4") == I(4)
        assert parse_ideal("gens: x^2, x*y, y^5") == I(1, 4)
        assert parse_ideal("gens: y^3,x") == I(3)

    def test_gens_products_accumulate_exponents(self):
        # x*x^2*y is x^3 y, so the corner generators still pin the shape
        assert parse_ideal("gens: x*x^2*y, x^4, y^2") == \
            parse_ideal("gens: x^3*y, x^4, y^2")

    def test_powers_expand_by_staircase_product(self):
        assert parse_ideal("I(4)^3") == I(4) ** 3
        assert parse_ideal("I(1,2)^2") == I(1, 2) * I(1, 2)
        assert parse_ideal("gens: x, y^4") ** 2 == parse_ideal("I(4)^2")

    def test_unit_ideal_rejected(self):
        for text in ("I()", "I(0)", "I(4)^0", "gens: x^0"):
            with pytest.raises(ParseError, match="unit ideal"):
                parse_ideal(text)

    def test_error_positions(self):
        with pytest.raises(ParseError) as e:
            parse_ideal("I(1,-2)")
        assert e.value.pos == 4
        with pytest.raises(ParseError) as e:
            parse_ideal("I(4")
        assert e.value.pos == 3
        with pytest.raises(ParseError) as e:
            parse_ideal("I(4) junk")
        assert e.value.pos == 5
        with pytest.raises(ParseError) as e:
            parse_ideal("gens: z")
        assert e.value.pos == 6

    def test_error_caret_rendering(self):
        with pytest.raises(ParseError) as e:
            parse_ideal("I(4")
        msg = str(e.value)
        lines = msg.splitlines()
        assert lines[1].strip() == "I(4"
        assert lines[2].rstrip() == "  " + " " * 3 + "^"

    def test_gens_infinite_colength(self):
        with pytest.raises(ParseError, match="finite colength"):
            parse_ideal("gens: x")
        with pytest.raises(ParseError, match="finite colength"):
            parse_ideal("gens: x*y")

    def test_dangling_star(self):
        with pytest.raises(ParseError, match="after '\\*'"):
            parse_ideal("gens: x*, y")


class TestSubstitutionGrammar:
    def test_accepted_forms(self):
        assert parse_substitution("x->x+t*y^2") == ("x", 2)
        assert parse_substitution("y -> y + t*x") == ("y", 1)
        assert parse_substitution("x->x+t*y") == ("x", 1)

    def test_rejections(self):
        for bad in ("z->z+t*y", "x->y+t*y^2", "x->x+t*x^2",
                    "x->x+t*y^0", "x->x+s*y", "x->x+t*y^2 extra"):
            with pytest.raises(ParseError):
                parse_substitution(bad)


class TestDirectionGrammar:
    def test_parses_signed_pairs(self):
        assert parse_direction("1,0") == (1, 0)
        assert parse_direction("-1,-1") == (-1, -1)
        assert parse_direction(" 3 , -8 ") == (3, -8)

    def test_rejects_zero_and_junk(self):
        with pytest.raises(ParseError, match="nonzero"):
            parse_direction("0,0")
        with pytest.raises(ParseError):
            parse_direction("1")
        with pytest.raises(ParseError):
            parse_direction("1,2,3")


class TestConfig:
    def test_prime_check(self):
        assert _is_prime(2) and _is_prime(31)
        assert not _is_prime(1) and not _is_prime(6) and not _is_prime(0)

    def test_defaults(self):
        cfg = Config()
        assert cfg.characteristic == 0 and cfg.family == "auto"
        assert cfg.fmt == "text" and cfg.method == "probe"
        assert cfg.golden_dir is None and cfg.jobs == 1

    def test_bad_characteristic_is_usage_error(self, capsys):
        rc, _, err = run(capsys, "limit", "I(4)", "--dir", "1,0",
                         "--char", "6")
        assert rc == 2 and "prime" in err

    def test_bad_jobs_is_usage_error(self, capsys):
        rc, _, err = run(capsys, "verify", "--jobs", "0")
        assert rc == 2 and "jobs" in err


class TestIdealCommand:
    def test_step_report(self, capsys):
        rc, out, _ = run(capsys, "ideal", "I(1,2)")
        assert rc == 0
        assert "colength   4" in out
        assert "measuring  (2, 1)" in out

    def test_gens_report(self, capsys):
        payload = run_json(capsys, "ideal", "gens: x, y^4")
        assert payload["heights"] == [4]
        assert payload["measuring"] == [4, 1]
        assert payload["schema_version"] == 1

    def test_unit_ideal_exit_code(self, capsys):
        rc, _, err = run(capsys, "ideal", "I()")
        assert rc == 2
        assert "unit ideal" in err and "^" in err

    def test_staircase_art(self):
        assert staircase_rows(I(4)) == [". #"] * 4
        assert staircase_rows(I(1, 2)) == [". # #", ". # #", ". . #"]

    def test_json_round_trips_through_grammar(self, capsys):
        payload = run_json(capsys, "ideal", "I(2,1,2)")
        back = parse_ideal(payload["ideal"])
        assert list(back.steps()) == payload["steps"]
        assert list(back.heights) == payload["heights"]


class TestLimitCommand:
    def test_substitution_example(self, capsys):
        rc, out, _ = run(capsys, "limit", "gens: x,y^3",
                         "--sub", "x->x+t*y^2")
        assert rc == 0
        assert "I(1,1)" in out

    def test_direction_example(self, capsys):
        payload = run_json(capsys, "limit", "I(4)", "--dir", "1,0")
        assert payload["limit"]["ideal"] == "I(2,0)"
        assert payload["family"] == "G41"

    def test_interior_direction_is_identity(self, capsys):
        payload = run_json(capsys, "limit", "I(4)", "--dir", "-1,-1")
        assert payload["limit"]["ideal"] == "I(4)"

    def test_wall_reports_both_sides(self, capsys):
        payload = run_json(capsys, "limit", "I(4)", "--dir", "1,2")
        assert payload["wall"] is True
        assert payload["minus"]["ideal"] == "I(1,2)"
        assert payload["plus"]["ideal"] == "I(2,0)"

    def test_explicit_family_too_small(self, capsys):
        rc, _, err = run(capsys, "limit", "I(4)", "--dir", "1,0",
                         "--family", "g32")
        assert rc == 2 and "G32" in err

    def test_characteristic_flows_through(self, capsys):
        p0 = run_json(capsys, "limit", "I(1,2)", "--sub", "x->x+t*y")
        p2 = run_json(capsys, "limit", "I(1,2)", "--sub", "x->x+t*y",
                      "--char", "2")
        assert p0["char"] == 0 and p2["char"] == 2

    def test_requires_exactly_one_mode(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["limit", "I(4)"])
        assert e.value.code == 2
        capsys.readouterr()
        with pytest.raises(SystemExit) as e:
            main(["limit", "I(4)", "--dir", "1,0", "--sub", "x->x+t*y"])
        assert e.value.code == 2
        capsys.readouterr()


class TestFanCommand:
    def test_three_ray_fan(self, capsys):
        payload = run_json(capsys, "fan", "I(4)")
        assert payload["rays"] == [[0, -1], [1, 2], [-1, 0]]
        labels = [c["label"] for c in payload["cones"]]
        assert labels == ["I(2,0)", "I(1,2)", "I(4)"]

    def test_text_lists_cones(self, capsys):
        rc, out, _ = run(capsys, "fan", "I(4)")
        assert rc == 0
        assert out.count("cone") == 3
        assert "family G41" in out

    def test_pair_fan_tuple_labels(self, capsys):
        payload = run_json(capsys, "fan", "I(3)", "I(1,4)")
        assert all(isinstance(c["label"], list) and len(c["label"]) == 2
                   for c in payload["cones"])

    def test_whole_plane_fan(self, capsys):
        rc, out, _ = run(capsys, "fan", "I(1,1)")
        assert rc == 0 and "whole plane" in out
        payload = run_json(capsys, "fan", "I(1,1)")
        assert payload["rays"] == []

    def test_methods_agree(self, capsys):
        probe = run_json(capsys, "fan", "I(4)", "--method", "probe")
        enum = run_json(capsys, "fan", "I(4)", "--method", "enumerate")
        assert probe["rays"] == enum["rays"]
        assert probe["cones"] == enum["cones"]

    def test_family_override_must_match(self, capsys):
        rc, _, err = run(capsys, "fan", "I(4)", "--family", "g32")
        assert rc == 2 and "does not apply" in err
        rc, _, _ = run(capsys, "fan", "I(4)", "--family", "g41")
        assert rc == 0


class TestDiagramCommand:
    def test_matches_golden_entries(self, capsys, golden_copy):
        payload = run_json(capsys, "diagram", "I(4)^3")
        golden = json.loads((golden_copy / "figure2" / "n3.json").read_text())
        assert payload["entries"] == golden["entries"]
        assert payload["top_ideal"] == "I(3,2,2,2)"
        assert payload["top_shown"] is False

    def test_text_chain(self, capsys):
        rc, out, _ = run(capsys, "diagram", "I(4)^3")
        assert rc == 0
        assert out.count("ray") == 4
        assert "I(1,2,2,2,1)" in out

    def test_entries_rebuild_the_diagram(self, capsys):
        payload = run_json(capsys, "diagram", "I(4)^2")
        rebuilt = []
        for e in payload["entries"]:
            if "ideal" in e:
                rebuilt.append(Staircase.from_steps(e["ideal"]))
            else:
                rebuilt.append(tuple(e["ray"]))
        diag = boundary_diagram(standard_fan(I(4) ** 2))
        assert rebuilt == diag.entries


class TestSupport3Command:
    def test_single_factor_picture(self, capsys):
        payload = run_json(capsys, "support3", "I(3)")
        assert payload["family"] == "G51"
        assert payload["span_dimension"] == 2
        assert payload["points"] == [[0, 0, 0], [1, 0, 0]]
        assert payload["open"] == [] and payload["sporadic"] == []

    def test_two_parameter_family_flattens_c(self, capsys):
        payload = run_json(capsys, "support3", "I(3)", "--family", "g41")
        assert payload["family"] == "G41"
        assert all(p[2] == 0 for p in payload["points"])

    def test_oversized_measuring_rejected(self, capsys):
        rc, _, err = run(capsys, "support3", "gens: x^2, y^2")
        assert rc == 2 and "exceeds" in err

    def test_text_grid_marks_open_columns(self, capsys):
        rc, out, _ = run(capsys, "support3", "I(2)", "I(1,2)")
        assert rc == 0
        assert "span dimension" in out


class TestVerifyCommand:
    def test_small_pass(self, capsys):
        rc, out, _ = run(capsys, "verify", "--claims", "1", "--n", "2")
        assert rc == 0
        assert "summary:" in out and " fail" in out

    def test_all_excludes_claims(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["verify", "--all", "--claims", "1"])
        assert e.value.code == 2
        capsys.readouterr()

    def test_json_schema(self, capsys):
        payload = run_json(capsys, "verify", "--claims", "2", "--n", "1")
        assert payload["schema_version"] == 1
        assert {"pass", "fail", "range"} <= set(payload["summary"])
        assert all({"id", "parameters", "status", "witness",
                    "characteristic"} <= set(r) for r in payload["reports"])

    def test_bad_claim_number(self, capsys):
        rc, _, err = run(capsys, "verify", "--claims", "9")
        assert rc == 2 and "1..8" in err

    def test_bad_power_bound(self, capsys):
        rc, _, err = run(capsys, "verify", "--n", "0")
        assert rc == 2 and "positive" in err

    def test_figure3_included_on_request(self, capsys):
        rc, out, _ = run(capsys, "verify", "--claims", "1", "--n", "1",
                         "--figure3")
        assert rc == 0
        assert "figure3" in out

    def test_doctored_golden_fails_with_exit_1(self, capsys, golden_copy):
        n1 = golden_copy / "figure2" / "n1.json"
        data = json.loads(n1.read_text())
        data["entries"][1]["ideal"] = [9, 9]
        n1.write_text(json.dumps(data))
        rc, out, _ = run(capsys, "verify", "--claims", "1", "--n", "1",
                         "--golden", str(golden_copy))
        assert rc == 1
        assert "fail" in out and "figure2-1" in out

    def test_golden_env_override(self, capsys, golden_copy, monkeypatch):
        n1 = golden_copy / "figure2" / "n1.json"
        data = json.loads(n1.read_text())
        data["entries"][1]["ideal"] = [9, 9]
        n1.write_text(json.dumps(data))
        monkeypatch.setenv("HILBFAN_GOLDEN", str(golden_copy))
        rc, _, _ = run(capsys, "verify", "--claims", "1", "--n", "1")
        assert rc == 1

    def test_missing_golden_dir_is_usage_error(self, capsys, tmp_path):
        rc, _, err = run(capsys, "verify", "--claims", "1", "--n", "1",
                         "--golden", str(tmp_path / "nowhere"))
        assert rc == 2

    def test_jobs_give_same_report(self, capsys):
        one = run_json(capsys, "verify", "--claims", "3", "--n", "2")
        two = run_json(capsys, "verify", "--claims", "3", "--n", "2",
                       "--jobs", "2")
        assert one == two


class TestOutputPlumbing:
    def test_atomic_file_output(self, capsys, tmp_path):
        dest = tmp_path / "fan.json"
        rc, out, _ = run(capsys, "fan", "I(4)", "--format", "json",
                         "-o", str(dest))
        assert rc == 0 and out == ""
        assert json.loads(dest.read_text())["command"] == "fan"
        assert not list(tmp_path.glob(".hilbfan-*"))

    def test_unwritable_destination(self, capsys, tmp_path):
        rc, _, err = run(capsys, "ideal", "I(4)",
                         "-o", str(tmp_path / "no" / "dir.txt"))
        assert rc == 2

    def test_svg_to_stdout_and_file(self, capsys, tmp_path):
        rc, out, _ = run(capsys, "fan", "I(4)", "--format", "svg")
        assert rc == 0 and out.startswith("<svg")
        xml.dom.minidom.parseString(out)
        dest = tmp_path / "fan.svg"
        rc, _, _ = run(capsys, "diagram", "I(4)^2", "--format", "svg",
                       "-o", str(dest))
        assert rc == 0
        xml.dom.minidom.parseString(dest.read_text())

    def test_support3_svg_hollow_circles(self, capsys):
        rc, out, _ = run(capsys, "support3", "I(3)", "I(4)", "I(1,4)",
                         "I(5)", "I(1,5)", "--format", "svg")
        assert rc == 0
        assert out.count("fill='none'") == 6  # one hollow dot per open column

    def test_no_svg_for_scalar_reports(self, capsys):
        for cmd in (["ideal", "I(4)"], ["limit", "I(4)", "--dir", "1,0"],
                    ["verify", "--claims", "1", "--n", "1"]):
            rc, _, err = run(capsys, *cmd, "--format", "svg")
            assert rc == 2 and "no SVG form" in err

    def test_render_writes_file(self, capsys, tmp_path):
        dest = tmp_path / "out.svg"
        rc, out, _ = run(capsys, "render", "fan", "I(4)", "-o", str(dest))
        assert rc == 0 and str(dest) in out
        assert dest.read_text().startswith("<svg")

    def test_render_diagram_single_spec_only(self, capsys, tmp_path):
        rc, _, err = run(capsys, "render", "diagram", "I(4)", "I(3)",
                         "-o", str(tmp_path / "d.svg"))
        assert rc == 2 and "exactly one" in err

    def test_render_support3(self, capsys, tmp_path):
        dest = tmp_path / "pic.svg"
        rc, _, _ = run(capsys, "render", "support3", "I(3)", "-o", str(dest))
        assert rc == 0
        xml.dom.minidom.parseString(dest.read_text())


class TestDeterminism:
    def test_repeat_runs_identical(self, capsys):
        first = run(capsys, "fan", "I(4)", "I(3)", "--format", "json")
        second = run(capsys, "fan", "I(4)", "I(3)", "--format", "json")
        assert first == second

    def test_svg_repeatable(self, capsys):
        a = run(capsys, "support3", "I(3)", "--format", "svg")
        b = run(capsys, "support3", "I(3)", "--format", "svg")
        assert a == b


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "hilbfan.cli", "ideal", "I(1,2)"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert "colength" in proc.stdout

    def test_parser_builds_and_names_subcommands(self):
        parser = build_parser()
        text = parser.format_help()
        for name in ("ideal", "limit", "fan", "diagram", "support3",
                     "verify", "render"):
            assert name in text
