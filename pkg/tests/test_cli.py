import json
import pathlib

import pytest

from wcmopt import fixtures as fx
from wcmopt.cli import (
    EXIT_OK,
    EXIT_ORACLE,
    EXIT_PARSE,
    EXIT_UNREMOVABLE,
    ParseError,
    main,
    parse_code,
    parse_config,
    parse_targets,
    serialize_code,
    serialize_config,
    serialize_targets,
)
from wcmopt.removal import Target

FIXDIR = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXDIR / name)


class TestFormats:
    def test_config_round_trip_all_fixtures(self):
        for name, cfg in fx.all_fixture_configurations().items():
            text = serialize_config(cfg)
            parsed = parse_config(text, name)
            assert parsed.edges == cfg.edges
            assert parsed.gamma == cfg.gamma and parsed.field == cfg.field
            assert serialize_config(parsed) == text

    def test_shipped_files_match_builders(self):
        for name, cfg in fx.all_fixture_configurations().items():
            shipped = (FIXDIR / f"{name}.cfg").read_text()
            assert shipped == serialize_config(cfg)

    def test_shipped_code_files_match_builders(self):
        graph, target = fx.toy_code_single_instance()
        assert (FIXDIR / "toy_code.txt").read_text() == serialize_code(graph)
        assert (FIXDIR / "toy_targets.txt").read_text() == serialize_targets([target])
        graph2, targets2 = fx.toy_code_overlapping()
        assert (FIXDIR / "toy_code_overlap.txt").read_text() == serialize_code(graph2)
        assert (FIXDIR / "toy_targets_overlap.txt").read_text() == serialize_targets(targets2)

    def test_code_round_trip(self):
        graph, _ = fx.toy_code_single_instance()
        text = serialize_code(graph)
        parsed = parse_code(text)
        assert parsed == graph
        assert serialize_code(parsed) == text

    def test_targets_round_trip(self):
        targets = [
            Target(vn_ids=(0, 1, 5), kind="gast", expected_params=(3, 1, 1, 2, 0)),
            Target(vn_ids=(2, 3), kind="ost"),
        ]
        text = serialize_targets(targets)
        assert parse_targets(text) == targets

    def test_parse_errors_are_positioned(self):
        with pytest.raises(ParseError):
            parse_config("q=4 gamma=3 a=2 ell=1\n1 1\n")  # column weight broken
        with pytest.raises(ParseError):
            parse_config("")
        with pytest.raises(ParseError):
            parse_config("q=4 gamma=3 a=2\n")  # missing ell
        with pytest.raises(ParseError):
            parse_config("q=4 gamma=1 a=1 ell=1\n7\n")  # entry out of range
        with pytest.raises(ParseError):
            parse_code("rows=1 cols=1 q=4 gamma=1\n1 1 1\n1 1 2\n")  # duplicate
        with pytest.raises(ParseError):
            parse_targets("kind=gast\n")

    def test_field_poly_override(self):
        text = serialize_config(fx.gast_6_0_0_9_0())
        parsed = parse_config(text, poly_flag=0b111)
        assert parsed.field.primitive_poly == 0b111
        with pytest.raises(ParseError):
            parse_config(text, poly_flag=0b101)  # not primitive


class TestCommands:
    def test_analyze_counts(self, capsys):
        assert main(["analyze", fixture_path("gast_6_2_2_5_2.cfg")]) == EXIT_OK
        out = capsys.readouterr().out
        assert "t=2" in out and "t_prime=5" in out and "reduction=3" in out
        assert "b_st=1" in out and "b_et=2" in out
        assert "group=(c3,O_sg)" in out and "group=(c2,c4,O_sg)" in out
        assert "o_sg" in out and "(c8,c9)" in out

    def test_analyze_membership_summary(self, capsys):
        assert main(["analyze", fixture_path("gast_6_0_0_9_0.cfg")]) == EXIT_OK
        out = capsys.readouterr().out
        assert "smallest_b=0" in out
        assert out.count("status=unbroken") == 10
        assert "in_family=yes" in out
        assert "unbroken=1,2,3,4,5,6,7,8,9,10" in out

    def test_analyze_json_lines(self, capsys):
        assert main(["analyze", fixture_path("gast_6_2_2_5_2.cfg"), "--format", "json-lines"]) == EXIT_OK
        out = capsys.readouterr().out
        blocks = [json.loads(line) for line in out.splitlines()]
        tree = next(b for b in blocks if b["block"] == "tree")
        assert tree["t"] == 2 and tree["t_prime"] == 5 and tree["reduction"] == 3

    def test_analyze_parse_failure_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("q=4 gamma=3 a=2 ell=1\n1 1\n")
        assert main(["analyze", str(bad)]) == EXIT_PARSE

    def test_analyze_ost_mode(self, capsys):
        assert main(["analyze", fixture_path("ost_6_2_11_0.cfg"), "--mode", "ost"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "unlabeled_ost=yes" in out
        assert "b_o_ut=5" in out

    def test_analyze_eas_mode_single_matrix(self, capsys):
        assert main(["analyze", fixture_path("gast_6_2_2_5_2.cfg"), "--mode", "eas"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "t=1" in out and "group=(O_sg)" in out

    def test_verify_oscillating_member(self, capsys):
        assert main(["verify", fixture_path("ost_6_2_11_0.cfg")]) == EXIT_OK
        out = capsys.readouterr().out
        assert "verdict=OST" in out
        assert "wcm_agrees=yes" in out

    def test_verify_member(self, capsys):
        assert main(["verify", fixture_path("gast_6_0_0_9_0.cfg")]) == EXIT_OK
        out = capsys.readouterr().out
        assert "verdict=GAST" in out
        assert "params=(6,0,0,9,0)" in out
        assert "wcm_agrees=yes" in out
        assert main(["verify", fixture_path("gast_6_2_2_5_2.cfg")]) == EXIT_OK
        out = capsys.readouterr().out
        assert "verdict=GAST" in out and "params=(6,2,2,5,2)" in out

    def test_verify_oracle_cap(self, capsys):
        assert main(["verify", fixture_path("gast_6_0_0_9_0.cfg"), "--oracle-cap", "10"]) == EXIT_ORACLE

    def test_analyze_oracle_cap_partial_report(self, capsys):
        # caps degrade analyze to a partial report with a warning, exit 0
        assert main(["analyze", fixture_path("gast_6_0_0_9_0.cfg"), "--oracle-cap", "10"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "oracle skipped" in out
        assert "t=10" in out  # the tree portion still ran

    def test_remove_and_idempotence(self, tmp_path, capsys):
        out_path = tmp_path / "removed.cfg"
        assert main(["remove", fixture_path("gast_6_0_0_9_0.cfg"), "--out", str(out_path)]) == EXIT_OK
        first = capsys.readouterr().out
        assert "result=removed" in first and "num_changes=2" in first
        assert main(["remove", str(out_path), "--out", str(tmp_path / "again.cfg")]) == EXIT_OK
        second = capsys.readouterr().out
        assert "result=not_in_z" in second and "nothing to do" in second
        assert (tmp_path / "again.cfg").read_text() == out_path.read_text()

    def test_remove_unremovable_exit(self, tmp_path, capsys):
        code = main(["remove", fixture_path("gast_borderline_no_deg2.cfg"), "--out", str(tmp_path / "x.cfg")])
        assert code == EXIT_UNREMOVABLE

    def test_remove_oscillating_mode(self, tmp_path, capsys):
        out_path = tmp_path / "removed.cfg"
        assert main([
            "remove", fixture_path("ost_6_2_11_0.cfg"), "--mode", "ost", "--out", str(out_path),
        ]) == EXIT_OK
        out = capsys.readouterr().out
        assert "result=removed" in out and "num_changes=1" in out
        # the object must not survive as either shape of its family
        assert main(["verify", str(out_path)]) == EXIT_OK
        verify_out = capsys.readouterr().out
        assert "ost=no" in verify_out and "gast=no" in verify_out

    def test_remove_verified_post_state(self, tmp_path, capsys):
        out_path = tmp_path / "removed.cfg"
        main(["remove", fixture_path("gast_6_2_2_5_2.cfg"), "--out", str(out_path)])
        capsys.readouterr()
        assert main(["verify", str(out_path)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "verdict=none" in out or "verdict=GAS\n" not in out
        assert "wcm_agrees=yes" in out

    def test_optimize_writes_replayable_output(self, tmp_path, capsys):
        out_path = tmp_path / "opt.txt"
        assert main([
            "optimize", fixture_path("toy_code.txt"), fixture_path("toy_targets.txt"),
            "--out", str(out_path),
        ]) == EXIT_OK
        report = capsys.readouterr().out
        assert "total_changes=2" in report
        original = parse_code((FIXDIR / "toy_code.txt").read_text())
        optimized = parse_code(out_path.read_text())
        diff = {
            rc for rc in original.weights
            if original.weights[rc] != optimized.weights[rc]
        }
        assert len(diff) == 2
        assert all(rc[1] == 0 for rc in diff)

    def test_optimize_empty_targets_identity(self, tmp_path, capsys):
        targets = tmp_path / "targets.txt"
        targets.write_text("# targets\n")
        out_path = tmp_path / "opt.txt"
        assert main(["optimize", fixture_path("toy_code.txt"), str(targets), "--out", str(out_path)]) == EXIT_OK
        assert out_path.read_text() == (FIXDIR / "toy_code.txt").read_text()

    def test_optimize_json_lines(self, tmp_path, capsys):
        out_path = tmp_path / "opt.txt"
        assert main([
            "optimize", fixture_path("toy_code.txt"), fixture_path("toy_targets.txt"),
            "--out", str(out_path), "--format", "json-lines",
        ]) == EXIT_OK
        blocks = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
        summary = next(b for b in blocks if b["block"] == "optimization")
        assert summary["total_changes"] == 2 and summary["removed"] == 1

    def test_verify_json_lines(self, capsys):
        assert main(["verify", fixture_path("gast_6_0_0_9_0.cfg"), "--format", "json-lines"]) == EXIT_OK
        blocks = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
        verdict = next(b for b in blocks if b["block"] == "verify")
        assert verdict["verdict"] == "GAST" and verdict["gas"] == "yes"

    def test_optimize_overlap_reports_protection(self, tmp_path, capsys):
        out_path = tmp_path / "opt.txt"
        assert main([
            "optimize", fixture_path("toy_code_overlap.txt"), fixture_path("toy_targets_overlap.txt"),
            "--out", str(out_path),
        ]) == EXIT_OK
        report = capsys.readouterr().out
        assert "protected_checks=1" in report
        assert "unremovable=-" in report

    def test_enumerate_finds_single_instance(self, tmp_path, capsys):
        out_path = tmp_path / "targets.txt"
        assert main([
            "enumerate", fixture_path("toy_code.txt"), "--max-a", "6", "--out", str(out_path),
        ]) == EXIT_OK
        found = parse_targets(out_path.read_text())
        size6 = [t for t in found if len(t.vn_ids) == 6]
        assert len(size6) == 1
        assert size6[0].vn_ids == (0, 1, 2, 3, 4, 5)
        assert size6[0].expected_params == (6, 0, 0, 9, 0)

    def test_enumerate_max_a_below_instance(self, tmp_path, capsys):
        out_path = tmp_path / "targets.txt"
        main(["enumerate", fixture_path("toy_code.txt"), "--max-a", "2", "--out", str(out_path)])
        assert parse_targets(out_path.read_text()) == []

    def test_enumerate_budget_truncation(self, capsys):
        assert main(["enumerate", fixture_path("toy_code.txt"), "--max-a", "6", "--budget", "5"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "truncated=yes" in out

    def test_enumerate_count_non_increasing_after_optimize(self, tmp_path, capsys):
        before = tmp_path / "before.txt"
        opt = tmp_path / "opt.txt"
        after = tmp_path / "after.txt"
        main(["enumerate", fixture_path("toy_code.txt"), "--max-a", "6", "--out", str(before)])
        main([
            "optimize", fixture_path("toy_code.txt"), fixture_path("toy_targets.txt"),
            "--out", str(opt),
        ])
        main(["enumerate", str(opt), "--max-a", "6", "--out", str(after)])
        assert len(parse_targets(after.read_text())) <= len(parse_targets(before.read_text()))
        assert not [t for t in parse_targets(after.read_text()) if len(t.vn_ids) == 6]

    def test_enumerate_two_disjoint_instances(self, tmp_path, capsys):
        # duplicate the embedded instance into two disjoint column blocks;
        # mixed-block subsets form unions of smaller objects with different
        # parameter tuples, so filtering by the full tuple isolates the two
        graph, _ = fx.toy_code_single_instance()
        weights = dict(graph.weights)
        for (r, c), w in list(graph.weights.items()):
            if r < 9 and c < 6:
                weights[(22 + r, 12 + c)] = w
        from wcmopt.config import CodeGraph
        big = CodeGraph(31, 18, 3, graph.field, weights)
        code_path = tmp_path / "two.txt"
        code_path.write_text(serialize_code(big))
        out_path = tmp_path / "found.txt"
        assert main(["enumerate", str(code_path), "--max-a", "6", "--out", str(out_path)]) == EXIT_OK
        full = [
            t for t in parse_targets(out_path.read_text())
            if t.expected_params == (6, 0, 0, 9, 0)
        ]
        assert [t.vn_ids for t in full] == [tuple(range(6)), tuple(range(12, 18))]
