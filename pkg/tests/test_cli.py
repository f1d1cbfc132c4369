"""
Tests for the gapbench command line.
"""

import json
from unittest.mock import patch

import pytest

from app.cli.main import main
from app.expander.rotation import parse_rotation
from app.instances.dimacs import parse_cnf, parse_graph
from app.models.schemas import VerificationReport
from app.utils.exceptions import VerificationTimeoutException

TRIANGLE = "p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


class TestExpanderCommands:
    """Tests for build-expander and power."""

    def test_build_gg_with_verify(self, tmp_path, capsys):
        out = tmp_path / "gg.json"
        code, report = run(["build-expander", "--family", "gg", "--k", "3", "--verify", "-o", str(out)], capsys)
        assert code == 0
        assert report["verification"]["passed"] is True
        assert parse_rotation(out.read_text()).n == 9

    def test_gg_k1_is_usage_error(self, tmp_path, capsys):
        code, _ = run(["build-expander", "--family", "gg", "--k", "1", "-o", str(tmp_path / "x.json")], capsys)
        assert code == 2

    def test_missing_size(self, tmp_path, capsys):
        code, _ = run(["build-expander", "--family", "complete", "-o", str(tmp_path / "x.json")], capsys)
        assert code == 2

    def test_power_with_verify(self, tmp_path, capsys):
        base = tmp_path / "k5.json"
        run(["build-expander", "--family", "complete", "--n", "5", "-o", str(base)], capsys)
        out = tmp_path / "k5sq.json"
        code, report = run(["power", str(base), "--power", "2", "--verify", "--alpha", "1/4",
                            "-o", str(out)], capsys)
        assert code == 0
        assert report["d"] == 16
        assert report["verification"]["passed"] is True

    def test_power_verify_false_claim(self, tmp_path, capsys):
        base = tmp_path / "k5.json"
        run(["build-expander", "--family", "complete", "--n", "5", "-o", str(base)], capsys)
        code, _ = run(["power", str(base), "--power", "2", "--verify", "--alpha", "1/10",
                       "-o", str(tmp_path / "out.json")], capsys)
        assert code == 1


class TestProductAndAmplify:
    """Tests for product and amplify."""

    def test_product(self, tmp_path, capsys, graph_file):
        h = tmp_path / "k3.json"
        run(["build-expander", "--family", "complete", "--n", "3", "-o", str(h)], capsys)
        out, walks = tmp_path / "prod.dimacs", tmp_path / "walks.json"
        code, report = run(["product", graph_file(TRIANGLE), str(h), "--t", "2", "--walks", str(walks),
                            "-o", str(out)], capsys)
        assert code == 0
        assert report["N"] == 6
        assert parse_graph(out.read_text()).m == 15
        assert len(json.loads(walks.read_text())) == 6

    def test_amplify_with_check(self, tmp_path, capsys, graph_file):
        text = "p edge 12 66\n" + "".join(f"e {u} {v}\n" for u in range(1, 13) for v in range(u + 1, 13))
        out = tmp_path / "amp.dimacs"
        code, cert = run(["amplify", graph_file(text), "--a", "1", "--b", "1/2", "--ratio", "4/5",
                          "--check", "-o", str(out)], capsys)
        assert code == 0
        assert cert["t"] == 1
        assert cert["output_vertices"] == 36
        assert cert["check"]["holds"] is True
        assert parse_graph(out.read_text()).n == 36

    def test_ratio_above_one(self, tmp_path, capsys, graph_file):
        code, _ = run(["amplify", graph_file(TRIANGLE), "--a", "1", "--b", "1/2", "--ratio", "1.5",
                       "-o", str(tmp_path / "o")], capsys)
        assert code == 2


class TestReduceCommand:
    """Tests for reduce."""

    def test_max3sat_to_is_sidecar(self, tmp_path, capsys, graph_file):
        cnf = graph_file("p cnf 3 2\n1 2 3 0\n-1 2 0\n", "f.cnf")
        out = tmp_path / "g.dimacs"
        code, summary = run(["reduce", "max3sat-to-is", cnf, "--K", "2", "-o", str(out)], capsys)
        assert code == 0
        assert summary["vertices"] == 10
        sidecar = json.loads((tmp_path / "g.dimacs.json").read_text())
        assert [len(b) for b in sidecar["blocks"]] == [7, 3]

    def test_is_to_ds_with_partition(self, tmp_path, capsys, graph_file):
        graph = graph_file("p edge 3 2\ne 1 2\ne 1 3\n")
        partition = graph_file(json.dumps({"blocks": [[0, 1], [2]]}), "blocks.json")
        out = tmp_path / "ds.dimacs"
        code, summary = run(["reduce", "is-to-ds", graph, "--partition", partition, "-o", str(out)], capsys)
        assert code == 0
        assert summary["vertices"] == 23

    def test_vc_to_minsat(self, tmp_path, capsys, graph_file):
        out = tmp_path / "f.cnf"
        code, summary = run(["reduce", "vc-to-minsat", graph_file(TRIANGLE), "-o", str(out)], capsys)
        assert code == 0
        assert parse_cnf(out.read_text()).m == 3
        assert summary["variables"] == 3

    def test_malformed_input(self, tmp_path, capsys, graph_file):
        code, _ = run(["reduce", "is-to-cb", graph_file("p edge 2 1\ne 1 1\n"), "-o", str(tmp_path / "o")], capsys)
        assert code == 2


class TestSolveCommand:
    """Tests for solve."""

    def test_clique(self, capsys, graph_file):
        code, result = run(["solve", "clique", graph_file(TRIANGLE)], capsys)
        assert code == 0
        assert result["value"] == 3
        assert result["witness"] == [0, 1, 2]
        assert "elapsed" not in result

    def test_subexp_needs_cap(self, capsys, graph_file):
        code, _ = run(["solve", "subexp-is", graph_file(TRIANGLE)], capsys)
        assert code == 2

    def test_maxlin(self, capsys, graph_file):
        code, result = run(["solve", "maxlin", graph_file("p lin3 3 1\n1 2 3 0\n", "s.lin3")], capsys)
        assert code == 0
        assert result["value"] == 1

    def test_missing_file(self, capsys, tmp_path):
        code, _ = run(["solve", "is", str(tmp_path / "absent.dimacs")], capsys)
        assert code == 2


class TestVerifyCommand:
    """Tests for verify."""

    def test_suite_passes(self, capsys):
        code, report = run(["verify", "roundtrip", "--trials", "2", "--seed", "3"], capsys)
        assert code == 0
        assert report["completed"] is True
        assert report["mismatches"] == []

    @pytest.mark.parametrize("suite", ["claim1", "theorem3-sandwich", "grouping-bound", "product-sandwich"])
    def test_canonical_and_alias_names(self, suite, capsys):
        """Test the registered suite names and their aliases are accepted."""
        code, report = run(["verify", suite, "--trials", "1", "--seed", "7"], capsys)
        assert code == 0
        assert report["suite"] in ("claim1", "theorem3-sandwich")

    def test_output_is_byte_stable(self, capsys):
        main(["verify", "subexp-approx", "--trials", "3", "--seed", "1"])
        first = capsys.readouterr().out
        main(["verify", "subexp-approx", "--trials", "3", "--seed", "1"])
        assert capsys.readouterr().out == first

    def test_mismatch_exit_code(self, capsys):
        failing = VerificationReport(suite="cb", master_seed=0, trial_count=1, config={}, trials=[],
                                     mismatches=["trial 0: MIBS = 3, 2*alpha = 4"], statistics={})
        with patch("app.cli.main.run_suite", return_value=failing):
            code, report = run(["verify", "cb", "--trials", "1"], capsys)
        assert code == 1
        assert report["mismatches"]

    def test_timeout_exit_code(self, capsys):
        partial = VerificationReport(suite="cb", master_seed=0, trial_count=5, config={}, trials=[],
                                     mismatches=[], statistics={}, completed=False)
        error = VerificationTimeoutException("too slow", partial=partial)
        with patch("app.cli.main.run_suite", side_effect=error):
            code, report = run(["verify", "cb", "--trials", "5", "--timeout", "1"], capsys)
        assert code == 3
        assert report["completed"] is False

    def test_unknown_suite_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["verify", "nope"])
        assert info.value.code == 2
