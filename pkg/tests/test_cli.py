import itertools
import json
import subprocess
import sys

import numpy as np
import pytest

from bicomm.cli import main
from bicomm.edgestats import Partition, z_d, z_w
from bicomm.evaluation import misclassification_rate
from bicomm.graph import load_edge_list


@pytest.fixture
def two_clique_file(tmp_path):
    lines = [f"a{i} a{j}" for i, j in itertools.combinations(range(5), 2)]
    lines += [f"b{i} b{j}" for i, j in itertools.combinations(range(5), 2)]
    path = tmp_path / "cliques.edges"
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def write_labels(tmp_path, name, values):
    path = tmp_path / name
    path.write_text("\n".join(str(v) for v in values) + "\n")
    return str(path)


def test_detect_auto_recovers_cliques(tmp_path, two_clique_file):
    out = tmp_path / "report.json"
    code = main(["detect", "--edges", two_clique_file, "--undirected",
                 "--seed", "1", "--restarts", "10", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["selected"] == "zw-max"
    assert report["criterion"] == "penalized"
    assert report["n_nodes"] == 10 and report["n_edges"] == 20
    truth = [1 if name.startswith("a") else 0 for name in report["nodes"]]
    assert misclassification_rate(truth, report["labels"]) == 0.0
    assert set(report["candidates"]) == {"zw-max", "zw-min", "zd"}
    assert report["scores"]["clamp_events"] >= 0


def test_detect_gamma_tau_scores(tmp_path, two_clique_file):
    # disjoint equal cliques make a regular graph: the difference statistic
    # is constant there, so the zd candidate is excluded outright
    out = tmp_path / "report.json"
    code = main(["detect", "--edges", two_clique_file, "--undirected",
                 "--criterion", "gamma-tau", "--seed", "1", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["criterion"] == "gamma-tau"
    assert report["selected"] == "zw-max"
    assert report["excluded"] == ["zd"]
    assert report["scores"]["n_gamma_sq"] is None
    assert report["lambda"] is None

    # one cross edge breaks regularity and keeps all three candidates live
    lines = [f"a{i} a{j}" for i, j in itertools.combinations(range(5), 2)]
    lines += [f"b{i} b{j}" for i, j in itertools.combinations(range(5), 2)]
    lines.append("a0 b0")
    path = tmp_path / "bridged.edges"
    path.write_text("\n".join(lines) + "\n")
    code = main(["detect", "--edges", str(path), "--undirected",
                 "--criterion", "gamma-tau", "--seed", "1", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["excluded"] == []
    assert report["selected"] == "zw-max"
    scores = report["scores"]
    assert scores["n_tau_sq_max"] > scores["n_gamma_sq"]


def test_detect_single_method_and_warm_start(tmp_path, two_clique_file):
    out = tmp_path / "report.json"
    code = main(["detect", "--edges", two_clique_file, "--undirected",
                 "--method", "zw-max", "--seed", "2", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert list(report["candidates"]) == ["zw-max"]
    value = report["candidates"]["zw-max"]["objective_value"]

    warm = write_labels(tmp_path, "warm.labels", report["labels"])
    out2 = tmp_path / "warm.json"
    code = main(["detect", "--edges", two_clique_file, "--undirected",
                 "--method", "zw-max", "--restarts", "1", "--seed", "9",
                 "--warm-start", warm, "--out", str(out2)])
    assert code == 0
    again = json.loads(out2.read_text())
    assert again["candidates"]["zw-max"]["objective_value"] == value
    assert again["labels"] == report["labels"]


def test_detect_modularity_notes(tmp_path, two_clique_file):
    out = tmp_path / "report.json"
    code = main(["detect", "--edges", two_clique_file, "--undirected",
                 "--method", "modularity", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert "modularity_convention" in report["notes"]
    truth = [1 if name.startswith("a") else 0 for name in report["nodes"]]
    assert misclassification_rate(truth, report["labels"]) == 0.0


def test_detect_degenerate_graph_exits_4(tmp_path):
    lines = [f"{i} {j}" for i, j in itertools.combinations(range(5), 2)]
    path = tmp_path / "k5.edges"
    path.write_text("\n".join(lines) + "\n")
    code = main(["detect", "--edges", str(path), "--undirected",
                 "--method", "zw-max", "--out", str(tmp_path / "r.json")])
    assert code == 4
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["candidates"]["zw-max"]["degenerate"]
    # auto mode: every candidate degenerate -> no selection possible
    assert main(["detect", "--edges", str(path), "--undirected"]) == 4


def test_moments_payload_matches_library(tmp_path):
    path = tmp_path / "cycle.edges"
    path.write_text("0 1\n1 2\n2 3\n3 0\n")
    labels = write_labels(tmp_path, "cycle.labels", [1, 1, 0, 0])
    out = tmp_path / "moments.json"
    code = main(["moments", "--edges", str(path), "--labels", labels,
                 "--undirected", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    g = load_edge_list(str(path), directed=False)
    part = Partition(np.array([1, 1, 0, 0], dtype=np.int8))
    assert payload["r1"] == 1 and payload["r2"] == 1
    assert payload["r_w"] == pytest.approx(1.0)
    assert payload["r_d"] == 0
    assert payload["z_w"] == pytest.approx(z_w(g, part))
    assert payload["z_d"] == pytest.approx(z_d(g, part))
    assert payload["mu_w"] > 0 and payload["sigma_w"] > 0
    assert isinstance(payload["q"], float)
    assert isinstance(payload["q_d"], float)


def test_moments_flags_degenerate_complete_graph(tmp_path):
    lines = [f"{i} {j}" for i, j in itertools.combinations(range(4), 2)]
    path = tmp_path / "k4.edges"
    path.write_text("\n".join(lines) + "\n")
    labels = write_labels(tmp_path, "k4.labels", [1, 1, 0, 0])
    out = tmp_path / "m.json"
    assert main(["moments", "--edges", str(path), "--labels", labels,
                 "--undirected", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["degenerate_w"] and payload["degenerate_d"]
    assert payload["z_w"] == 0.0 and payload["z_d"] == 0.0


def test_moments_rejects_singleton_group(tmp_path):
    path = tmp_path / "cycle.edges"
    path.write_text("0 1\n1 2\n2 3\n3 0\n")
    labels = write_labels(tmp_path, "bad.labels", [1, 0, 0, 0])
    assert main(["moments", "--edges", str(path), "--labels", labels,
                 "--undirected"]) == 3


def test_eval_outputs(tmp_path, capsys):
    t = write_labels(tmp_path, "t.labels", [1, 1, 0, 0])
    same = write_labels(tmp_path, "same.labels", [1, 1, 0, 0])
    comp = write_labels(tmp_path, "comp.labels", [0, 0, 1, 1])
    off = write_labels(tmp_path, "off.labels", [1, 0, 0, 0])

    assert main(["eval", "--truth", t, "--est", same]) == 0
    assert capsys.readouterr().out == "0.000000\n"
    assert main(["eval", "--truth", t, "--est", comp]) == 0
    assert capsys.readouterr().out == "0.000000\n"
    assert main(["eval", "--truth", t, "--est", off]) == 0
    assert capsys.readouterr().out == "0.250000\n"


def test_eval_text_tokens_map_lexicographically(tmp_path, capsys):
    t = write_labels(tmp_path, "t.labels", ["left", "right", "right", "left"])
    e = write_labels(tmp_path, "e.labels", [0, 1, 1, 0])
    assert main(["eval", "--truth", t, "--est", e]) == 0
    assert capsys.readouterr().out == "0.000000\n"


def test_eval_error_paths(tmp_path, capsys):
    t = write_labels(tmp_path, "t.labels", [1, 1, 0, 0])
    short = write_labels(tmp_path, "short.labels", [1, 0])
    mono = write_labels(tmp_path, "mono.labels", [1, 1, 1])
    triple = write_labels(tmp_path, "three.labels", ["a", "b", "c", "a"])
    assert main(["eval", "--truth", t, "--est", short]) == 3
    assert main(["eval", "--truth", t, "--est", mono]) == 3
    assert main(["eval", "--truth", t, "--est", triple]) == 3
    assert main(["eval", "--truth", t, "--est", str(tmp_path / "nope")]) == 3
    capsys.readouterr()


SIM_ARGS = ["simulate", "--model", "sbm", "--p11", "0.9", "--p12", "0.1",
            "--p21", "0.1", "--p22", "0.9", "--m", "6", "--n", "6",
            "--undirected", "--reps", "4", "--restarts", "5", "--seed", "3"]


def test_simulate_csv_shape_and_determinism(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(SIM_ARGS + ["--out", str(a)]) == 0
    assert main(SIM_ARGS + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()

    lines = a.read_text().splitlines()
    assert lines[0] == "rep,eps_zw_max,eps_zw_min,eps_zd,selected,eps_selected,success"
    assert len(lines) == 6  # header + 4 reps + mean row
    assert [ln.split(",")[0] for ln in lines[1:]] == ["0", "1", "2", "3", "mean"]
    for ln in lines[1:5]:
        fields = ln.split(",")
        assert fields[4] in ("zw-max", "zw-min", "zd", "none")
        assert fields[6] in ("0", "1")


def test_simulate_jobs_do_not_change_output(tmp_path):
    a = tmp_path / "serial.csv"
    b = tmp_path / "parallel.csv"
    assert main(SIM_ARGS + ["--out", str(a)]) == 0
    assert main(SIM_ARGS + ["--jobs", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_parameter_validation(capsys):
    bad_p = [arg if arg != "0.9" else "1.9" for arg in SIM_ARGS]
    assert main(bad_p) == 2
    bad_m = [arg if arg != "6" else "1" for arg in SIM_ARGS]
    assert main(bad_m) == 2
    assert main(SIM_ARGS + ["--reps", "0"]) == 2
    assert main(SIM_ARGS + ["--jobs", "0"]) == 2
    assert main(SIM_ARGS + ["--theta", "pareto"]) == 0  # ignored under sbm
    dc = [arg if arg != "sbm" else "dcsbm" for arg in SIM_ARGS]
    assert main(dc + ["--theta", "pareto"]) == 2
    assert main(dc + ["--theta", "pareto:3", "--reps", "1"]) == 0
    capsys.readouterr()


def test_usage_and_format_exit_codes(tmp_path, capsys):
    assert main(["detect", "--edges", "x", "--undirected",
                 "--method", "zq"]) == 2        # unknown choice
    assert main(["detect"]) == 2                # missing required args
    assert main(["detect", "--edges", str(tmp_path / "missing.edges"),
                 "--undirected"]) == 3
    loop = tmp_path / "loop.edges"
    loop.write_text("0 0\n1 2\n3 4\n")
    assert main(["detect", "--edges", str(loop), "--undirected"]) == 3
    tiny = tmp_path / "tiny.edges"
    tiny.write_text("a b\nb c\n")
    assert main(["detect", "--edges", str(tiny), "--undirected"]) == 3
    capsys.readouterr()


def test_module_entry_point(tmp_path):
    t = tmp_path / "t.labels"
    t.write_text("1\n1\n0\n0\n")
    proc = subprocess.run(
        [sys.executable, "-m", "bicomm.cli", "eval",
         "--truth", str(t), "--est", str(t)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "0.000000\n"
