import json

import pytest

from command import parse_command
from errors import CommandParseError
from hecke_cocenter import cocenter_for
from main import EXIT_DOMAIN, EXIT_OK, EXIT_PARSE, EXIT_RESOURCE, execute, main

SL4_ELEMENT = "s1 s2 s0 s1 s2 s3 s2 s1 s0 s1"


def run_json(*argv: str) -> dict:
    result = execute([*argv, "--json"])
    assert result.exit_code == EXIT_OK
    return json.loads(result.output)


class TestParseCommand:
    def test_elements_are_parsed(self):
        cmd = parse_command(["length", "--group", "SL3", "--w", "s1 s2"])
        assert cmd.verb == "length"
        assert cmd.elements["w"].length == 2
        assert not cmd.json

    def test_budget_flags(self):
        cmd = parse_command(["describe", "--group", "SL3", "--length-bound", "6"])
        assert cmd.budget.length_bound == 6

    def test_mu_is_converted(self):
        cmd = parse_command(["bgmu", "--group", "SL3", "--mu", "1,0,-1"])
        assert cmd.affine.datum.frame.to_display(cmd.args["mu"]) == (1, 0, -1)

    def test_bad_label_position(self):
        with pytest.raises(CommandParseError) as error:
            parse_command(["length", "--group", "SL3", "--w", "s1 s9"])
        assert error.value.token == "s1 s9"
        assert error.value.position == 4

    def test_out_of_range_parahoric(self):
        with pytest.raises(CommandParseError):
            parse_command(["adm", "--group", "GL3", "--mu", "1,0,0", "--K", "7"])

    def test_preferred_labels_keep_their_order(self):
        cmd = parse_command(["dim", "--group", "SL3", "--w", "s1", "--b", "identity", "--prefer", "2,0"])
        assert cmd.args["prefer"] == (2, 0)
        with pytest.raises(CommandParseError):
            parse_command(["dim", "--group", "SL3", "--w", "s1", "--b", "identity", "--prefer", "5"])

    def test_no_abbreviations(self):
        with pytest.raises(CommandParseError):
            parse_command(["length", "--gr", "SL3", "--w", "s1"])

    def test_chartable_needs_no_group(self):
        assert parse_command(["chartable"]).group == "A2"


class TestVerbs:
    def test_describe(self):
        report = run_json("describe", "--group", "SL3", "--twist", "diagram")
        assert report["finite_weyl_order"] == 6
        assert report["twist_order"] == 2

    def test_length(self):
        report = run_json("length", "--group", "GL3", "--w", "t[1,0,0]")
        assert report["element"]["length"] == 2
        assert report["straight"] is True
        assert report["invariant"]["newton"] == ["1", "0", "0"]

    def test_reduce(self, tmp_path):
        dot = tmp_path / "trace.dot"
        report = run_json("reduce", "--group", "SL2", "--w", "s1 s0 s1", "--dot", str(dot))
        assert report["terminal"]["length"] == 1
        assert dot.read_text().startswith("digraph reduction_trace")

    def test_classpoly(self):
        report = run_json("classpoly", "--group", "SL2", "--w", "s1 s0 s1")
        assert sorted(entry["polynomial"] for entry in report["entries"]) == ["q", "q - 1"]

    def test_classpoly_cache(self, tmp_path):
        argv = ["classpoly", "--group", "SL3", "--w", "s1 s2 s1", "--cache", str(tmp_path), "--json"]
        first = execute(argv)
        second = execute(argv)
        assert first.output == second.output
        assert len(list(tmp_path.glob("*.src.json"))) == 1

    def test_rigid(self):
        assert len(run_json("classpoly", "--group", "PGL3", "--rigid")["classes"]) == 5

    def test_zero_hecke(self):
        assert len(run_json("classpoly", "--group", "SL3", "--zero-hecke", "1,2")["classes"]) == 4

    def test_dim_sl4(self):
        report = run_json("dim", "--group", "SL4", "--w", SL4_ELEMENT, "--b", "identity")
        assert report["dimension"] == "8"
        assert report["irr_max_count"] == 1
        assert report["branch_dimensions"] == ["8", "7"]
        assert report["tree"] is None

    def test_dim_sl4_tree_with_preferred_descent(self):
        report = run_json("dim", "--group", "SL4", "--w", SL4_ELEMENT, "--b", "identity", "--tree", "--prefer", "1")
        assert report["branch_dimensions"] == ["7", "8"]
        assert report["tree"]["label"] == 1

        def leaves(node):
            if not node["children"]:
                return [node["degree"]]
            return [degree for edge in node["children"] for degree in leaves(edge["node"])]

        assert leaves(report["tree"]) == ["-inf", "-inf", "-inf", "3", "-inf", "6"]

    def test_dim_tree(self, tmp_path):
        dot = tmp_path / "tree.dot"
        report = run_json("dim", "--group", "SL2", "--w", "s1 s0 s1", "--b", "identity", "--tree", "--dot", str(dot))
        assert [edge["weight"] for edge in report["tree"]["children"]] == ["q-1", "q"]
        assert "q-1" in dot.read_text()

    def test_dim_parahoric(self):
        report = run_json("dim", "--group", "GL2", "--w", "t[1,0]", "--b", "t[1,0]", "--K", "1")
        assert report["dimension"] == "1"
        assert report["polynomial"] == "q**2 + q"

    def test_adm(self):
        assert run_json("adm", "--group", "GL3", "--mu", "1,0,0")["size"] == 7

    def test_bgmu(self):
        report = run_json("bgmu", "--group", "GL3", "--mu", "1,0,0")
        assert len(report["classes"]) == 3
        assert report["closure"] == [[0, 1], [1, 2]]

    def test_chartable(self, tmp_path):
        csv = tmp_path / "a2.csv"
        report = run_json("chartable", "--group", "A2", "--kernel", "q=-1", "--csv", str(csv))
        assert report["rows"] == ["T_{s1s2}", "T_{s1}", "1"]
        assert report["kernel"] == [["0", "1", "1"]]
        assert report["relations_hold"] is True
        assert csv.read_text().splitlines()[0].startswith("class")

    def test_poset(self):
        report = run_json("poset", "--group", "GL3", "--kind", "newton", "--mu", "1,0,0")
        assert len(report["hasse"]) == 2

    def test_quadruple(self):
        report = run_json("quadruple", "--group", "SL3", "--w", "s1 s2 s1")
        assert report["minimal"]["length"] == 1

    def test_quadruple_enumerate(self):
        report = run_json("quadruple", "--group", "SL3", "--enumerate", "2")
        assert report["length_bound"] == 2


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["frobnicate", "--group", "SL3"],
        ["length", "--w", "s1"],
        ["length", "--group", "SL3", "--w", "s1 *"],
        ["dim", "--group", "SL3", "--w", "s1", "--b", "s9"],
        ["chartable", "--params", "q"],
    ])
    def test_parse_errors(self, argv):
        assert execute(argv).exit_code == EXIT_PARSE

    @pytest.mark.parametrize("argv", [
        ["describe", "--group", "XY7"],
        ["length", "--group", "SL3", "--twist", "flip", "--w", "s1"],
        ["chartable", "--group", "G2"],
        ["poset", "--group", "SL3", "--kind", "bruhat"],
        ["adm", "--group", "GL3", "--mu", "0,1,0"],
    ])
    def test_domain_errors(self, argv):
        assert execute(argv).exit_code == EXIT_DOMAIN

    def test_output_without_renderer(self, tmp_path):
        assert execute(["length", "--group", "SL3", "--w", "s1", "--csv", str(tmp_path / "x.csv")]).exit_code == EXIT_DOMAIN

    def test_resource_error(self):
        assert execute(["quadruple", "--group", "SL3", "--enumerate", "99"]).exit_code == EXIT_RESOURCE

    def test_contexts_do_not_outlive_a_run(self, twist):
        before = cocenter_for(twist("SL3"))
        assert execute(["length", "--group", "SL3", "--w", "s1"]).exit_code == EXIT_OK
        assert cocenter_for(twist("SL3")) is not before


class TestMain:
    def test_writes_json_to_stdout(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("AFFINE_COCENTER_LOG", str(tmp_path / "run.log"))
        assert main(["length", "--group", "SL3", "--w", "s1", "--json"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["element"]["word"] == [1]
        assert (tmp_path / "run.log").exists()

    def test_returns_exit_code(self, tmp_path, monkeypatch):
        monkeypatch.setenv("AFFINE_COCENTER_LOG", str(tmp_path / "run.log"))
        assert main(["length", "--group", "SL3", "--w", "s7"]) == EXIT_PARSE
