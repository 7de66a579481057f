import json

import pytest

from cliquemem.cli import main
from cliquemem.core import load_network


@pytest.fixture
def message_file(tmp_path):
    p = tmp_path / "msgs.txt"
    p.write_text("# three messages\n0:1,1:2,2:3,3:0\n1:2,4:1,5:5\n2:0,3:3\n")
    return p


@pytest.fixture
def network_file(tmp_path, message_file):
    out = tmp_path / "net.clqn"
    assert main(["learn", str(message_file), "-o", str(out), "--chi", "6", "--l", "8"]) == 0
    return out


def test_learn_and_inspect(network_file, capsys):
    assert load_network(network_file).edge_count == 6 + 3 + 1
    assert main(["inspect", str(network_file)]) == 0
    out = capsys.readouterr().out
    assert "edges: 10" in out and "chi: 6" in out


def test_retrieve_blind_and_guided(network_file, capsys):
    assert main(["retrieve", str(network_file), "0:1,1:2,2:3"]) == 0
    assert capsys.readouterr().out.strip() == "0:1,1:2,2:3,3:0"
    assert main(["retrieve", str(network_file), "0:1,1:2", "--guided", "--known", "0,1,2,3", "--iters", "3"]) == 0
    assert capsys.readouterr().out.strip() == "0:1,1:2,2:3,3:0"


def test_classify(network_file, capsys):
    assert main(["classify", str(network_file), "1:2,4:1,5:5"]) == 0
    assert capsys.readouterr().out.strip() == "accept"
    assert main(["classify", str(network_file), "1:2,4:1,5:6"]) == 0
    assert capsys.readouterr().out.strip() == "reject"


def test_theory(capsys):
    assert main(["theory", "expected_density", "chi=100", "l=64", "c=12", "M=50000"]) == 0
    assert json.loads(capsys.readouterr().out) == pytest.approx(0.15020546443042184)
    assert main(["theory", "optimal_order", "chi=100", "l=64", "alpha=0.25", "p0=1e-6"]) == 0
    assert json.loads(capsys.readouterr().out)[1] == 15
    assert main(["theory", "max_diversity", "chi=100", "l=64", "c=12..20"]) == 0
    assert json.loads(capsys.readouterr().out) == pytest.approx(127482.72606993890484)


def test_experiment_from_spec(tmp_path, capsys):
    spec = tmp_path / "s.spec"
    spec.write_text("mode = blind\nchi = 20\nl = 8\norder = 5\nerased = 2\nsweep = 300 600\ntrials = 50\nseed = 1\n")
    out = tmp_path / "o.csv"
    svg = tmp_path / "o.svg"
    assert main(["experiment", str(spec), "-o", str(out), "--plot", str(svg)]) == 0
    assert len(out.read_text().splitlines()) == 3 and svg.exists()


def test_experiment_multi_series(tmp_path):
    spec = tmp_path / "s.spec"
    spec.write_text("mode = guided\nchi = 20\nl = 8\norder = 5\nerased = 2\niterations = 1 4\n"
                    "sweep = 300\ntrials = 30\n")
    out = tmp_path / "g.csv"
    assert main(["experiment", str(spec), "-o", str(out)]) == 0
    assert (tmp_path / "g_c5_it1.csv").exists() and (tmp_path / "g_c5_it4.csv").exists()


def test_experiment_preset(tmp_path):
    out = tmp_path / "f4.csv"
    assert main(["experiment", "--figure", "fig4", "-o", str(out)]) == 0
    assert {p.name for p in tmp_path.iterdir()} == {"f4_p0_0.01.csv", "f4_p0_0.0001.csv", "f4_p0_1e-06.csv"}


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["learn"],
    ["theory", "nope"],
    ["theory", "p_type2", "c9"],
    ["theory", "p_type2", "c=9"],
    ["experiment"],
    ["experiment", "--figure", "fig99"],
])
def test_usage_errors(argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_missing_file_is_usage_error(tmp_path):
    assert main(["inspect", str(tmp_path / "nope.clqn")]) == 1


def test_format_errors(tmp_path, network_file):
    bad = tmp_path / "bad.clqn"
    bad.write_bytes(b"JUNK" + network_file.read_bytes()[4:])
    assert main(["inspect", str(bad)]) == 2
    assert main(["classify", str(network_file), "0:1,1"]) == 2
    assert main(["retrieve", str(network_file), "9:0,1:1"]) == 2
    spec = tmp_path / "x.spec"
    spec.write_text("mode = blind\nsweep = 1\nflavour = x\n")
    assert main(["experiment", str(spec)]) == 2


def test_infeasible(tmp_path):
    spec = tmp_path / "x.spec"
    spec.write_text("mode = blind\nchi = 20\nl = 8\norder = 5\nerased = 7\nsweep = 100\n")
    assert main(["experiment", str(spec), "-o", str(tmp_path / "o.csv")]) == 3
    spec.write_text("mode = blind\nchi = 20\nl = 8\norder = 5\nerased = 1\nsweep = 100\ntrials = 0\n")
    assert main(["experiment", str(spec), "-o", str(tmp_path / "o.csv")]) == 3
