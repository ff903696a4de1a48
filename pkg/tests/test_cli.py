import json

import numpy as np
import pytest

from glctkit import GFT_PARAMS, adjacency, build_operator, cycle_graph, read_signal, write_signal
from glctkit.cli import main


def run(argv):
    return main(argv)


@pytest.fixture()
def signal_file(tmp_path):
    rng = np.random.default_rng(0)
    x = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    path = tmp_path / "s.csv"
    write_signal(x, str(path))
    return path, x


class TestTransform:
    def test_plain_spectrum_flags_give_base_transform(self, tmp_path, signal_file):
        path, x = signal_file
        out = tmp_path / "shat.csv"
        code = run(["transform", "--cycle", "8", "--alpha", "1", "--beta", "1",
                    "--chirp", "0,0", "--signal", str(path), "--out", str(out)])
        assert code == 0
        got = read_signal(str(out))
        op = build_operator(adjacency(cycle_graph(8)), GFT_PARAMS)
        assert np.allclose(got, op.forward @ x, atol=1e-12)
        assert (tmp_path / "manifest.json").exists()

    def test_round_trip_through_files(self, tmp_path, signal_file):
        path, x = signal_file
        mid, back = tmp_path / "mid.csv", tmp_path / "back.csv"
        args = ["--cycle", "8", "--alpha", "0.8", "--beta", "8", "--chirp", "0.5,1"]
        assert run(["transform", *args, "--signal", str(path), "--out", str(mid)]) == 0
        assert run(["transform", *args, "--inverse", "--signal", str(mid), "--out", str(back)]) == 0
        got = read_signal(str(back))
        assert np.linalg.norm(got - x) / np.linalg.norm(x) < 1e-9

    def test_missing_signal_file_exits_2(self, tmp_path, capsys):
        code = run(["transform", "--cycle", "8", "--signal", str(tmp_path / "missing.csv"),
                    "--out", str(tmp_path / "o.csv")])
        assert code == 2
        assert "missing.csv" in capsys.readouterr().err

    def test_unknown_flag_rejected(self):
        with pytest.raises(SystemExit) as exc:
            run(["transform", "--cycle", "8", "--signal", "s", "--out", "o", "--bogus"])
        assert exc.value.code == 2

    def test_defective_shift_matrix_exits_3(self, tmp_path, signal_file):
        # A single directed edge gives a non-diagonalizable adjacency.
        graph = tmp_path / "g.edges"
        graph.write_text("8 directed\n0 1 1.0\n")
        path, _ = signal_file
        code = run(["transform", "--graph", str(graph), "--signal", str(path),
                    "--out", str(tmp_path / "o.csv")])
        assert code == 3


class TestSelect:
    def test_qualified_set_reported(self, tmp_path):
        out = tmp_path / "sel.json"
        code = run(["select", "--cycle", "32", "--alpha", "0.8", "--beta", "32",
                    "--chirp", "0.5,1", "--bandwidth", "4", "--samples", "4",
                    "--strategy", "maxsigmin", "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert len(payload["indices"]) == 4
        assert payload["qualified"] is True
        assert payload["recoverability_margin"] < 1.0

    def test_random_strategy_deterministic_across_runs(self, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            assert run(["select", "--cycle", "16", "--bandwidth", "2", "--samples", "4",
                        "--strategy", "random", "--seed", "1", "--out", str(out)]) == 0
            outs.append(out.read_text())
        assert outs[0] == outs[1]

    def test_oversized_sample_count_exits_2(self, tmp_path):
        code = run(["select", "--cycle", "32", "--bandwidth", "4", "--samples", "40",
                    "--strategy", "maxsig", "--out", str(tmp_path / "x.json")])
        assert code == 2


class TestExperiment:
    def test_malformed_config_exits_2_with_position(self, tmp_path, capsys):
        cfg = tmp_path / "bad.json"
        cfg.write_text('{"kind": "sweep",\n  bogus\n}')
        code = run(["experiment", "--config", str(cfg), "--out", str(tmp_path / "out")])
        assert code == 2
        err = capsys.readouterr().err
        assert "line 2" in err and "column" in err

    def test_failing_assertions_exit_1(self, tmp_path):
        cfg = {
            "kind": "classify", "experiment": "x", "seed": 0,
            "graph": {"generator": "sbm", "n": 40, "p_in": 0.5, "p_out": 0.45, "seed": 3},
            "params": {"alpha": 1.0, "beta": 1.0},
            "bandwidth": 2, "strategy": "maxsigmin", "sample_sizes": [2],
            "min_accuracy": 1.0,
        }
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        code = run(["experiment", "--config", str(path), "--out", str(tmp_path / "out")])
        assert code == 1

    def test_fig3_analog_runs_clean(self, tmp_path):
        cfg = json.loads(open("configs/fig3-analog.json").read())
        cfg["trials"] = 5
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        code = run(["experiment", "--config", str(path), "--out", str(tmp_path / "out")])
        assert code == 0
        rows = (tmp_path / "out" / "results.csv").read_text().splitlines()
        assert rows[0] == "experiment,basis,strategy,m,trial,metric,value"
        assert len(rows) > 1
