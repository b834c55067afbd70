import io
import json
import subprocess
import sys

import pytest

from fdsfield import sds
from fdsfield.cli import EXIT_BUDGET, EXIT_INVALID, EXIT_OK, EXIT_PARSE, run, worked_example
from fdsfield.fds import FunctionTable, StateSpace
from fdsfield.sds import DependencyGraph, LocalUpdate


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv)
    assert code == EXIT_OK, err
    return json.loads(out)


@pytest.fixture
def identity4(tmp_path):
    path = tmp_path / "identity4.json"
    path.write_text(json.dumps(FunctionTable.identity(StateSpace.vectors(2, 2)).to_json()))
    return str(path)


@pytest.fixture
def cycle_plus_tail(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"space": {"kind": "Zm_vectors", "m": 3, "n": 1}, "map": [1, 2, 1]}))
    return str(path)


def test_modorder_example():
    rep = call_json("modorder", "--p", "2", "--n", "3", "--matrix", "0,5;1,2")
    assert rep["schema"] == 1 and rep["command"] == "modorder"
    assert rep["totalOrder"] == 8
    assert rep["e"] == 2 and rep["beta"] == 1
    assert rep["A_pow_e"] == [[5, 2], [2, 1]]
    assert rep["order_of_A_pow_e"] == 4
    assert rep["direct_order"] == 8


def test_modorder_text_input(tmp_path):
    path = tmp_path / "a.txt"
    path.write_text("2 3 2; 0 5; 1 2\n")
    assert call_json("modorder", "--input", str(path))["totalOrder"] == 8
    path.write_text(json.dumps({"p": 3, "n": 2, "matrix": [[1, 0], [0, 1]]}))
    assert call_json("modorder", "--input", str(path))["totalOrder"] == 1


def test_modorder_demo():
    rep = call_json("modorder", "--demo", "--seed", "3")
    assert rep["certificate"]["totalOrder"] == 8
    assert rep["order_of_f"] == rep["order_of_fbar"] == 8
    assert rep["isomorphic"] is True
    assert sorted(rep["bijection"]) == list(range(8))
    assert worked_example(3)["bijection"] == rep["bijection"]


def test_fds_diagram_dot_identity(identity4):
    code, out, _ = call("fds", "diagram", "--input", identity4, "--format", "dot")
    assert code == EXIT_OK
    assert out.startswith("digraph")
    edges = [ln.split("[")[0].split("->") for ln in out.splitlines() if "->" in ln]
    assert len(edges) == 4
    assert all(a.strip() == b.strip() for a, b in edges)


def test_fds_diagram_json(cycle_plus_tail):
    rep = call_json("fds", "diagram", "--input", cycle_plus_tail)
    assert rep["cycle_lengths"] == [2]
    assert rep["max_transient"] == 1
    assert call_json("fds", "order", "--input", cycle_plus_tail)["order"] == 2


def test_fds_iso_and_interpolate(tmp_path, cycle_plus_tail):
    other = tmp_path / "g.json"
    other.write_text(json.dumps({"space": {"kind": "Zm_vectors", "m": 3, "n": 1}, "map": [0, 0, 1]}))
    assert call_json("fds", "iso", "--input", cycle_plus_tail, "--other", str(other))["isomorphic"] is False
    assert call_json("fds", "iso", "--input", cycle_plus_tail, "--other", cycle_plus_tail)["isomorphic"] is True
    rep = call_json("fds", "interpolate", "--input", str(other))
    # 0->0, 1->0, 2->1 over Z_3
    assert rep["poly_str"] == "2*x^2 + x"
    code, _, err = call("fds", "iso", "--input", cycle_plus_tail)
    assert code == EXIT_PARSE and "--other" in err


def test_field_command():
    rep = call_json("field", "--p", "2", "--r", "3")
    assert rep["field"] == "GF(2^3)/1,1,0,1"
    assert rep["elements"] == 8
    assert rep["normal_basis"] == [[1, 1, 0], [1, 0, 1], [1, 1, 1]]
    rep = call_json("field", "--field", "GF(3^2)")
    assert rep["modulus"] == [1, 0, 1]


def test_linpoly_command():
    rep = call_json("linpoly", "--field", "GF(2^2)/1,1,1", "--coeffs", "0,1")
    assert rep["poly_str"] == "x^(2^1)"
    assert rep["invertible"] is True
    assert rep["in_prime_class"] is True
    assert rep["order"] == 2
    rep = call_json("linpoly", "--p", "2", "--r", "2", "--coeffs", "1,1", "--basis", "normal")
    assert rep["invertible"] is False
    assert rep["kernel_dimension"] == 1
    assert rep["quadratic_criterion"] is False
    code, out, _ = call("linpoly", "--p", "2", "--r", "2", "--coeffs", "1,1", "--format", "dot")
    assert code == EXIT_OK and out.startswith("digraph")


def test_sds_command(tmp_path):
    G = DependencyGraph.complete(2)
    locs = [LocalUpdate.from_function(1, (1, 2), lambda v: v[1], 2),
            LocalUpdate.from_function(2, (1, 2), lambda v: v[0], 2)]
    path = tmp_path / "sds.json"
    path.write_text(json.dumps(sds.to_json(G, locs, [1, 2], 2)))
    rep = call_json("sds", "--input", str(path))
    # (0,1) has encoding 2 and maps to (1,1), encoding 3
    assert rep["table"]["map"][2] == 3
    assert rep["table"]["map"] == [0, 0, 3, 3]


def test_msorbits_commands():
    rep = call_json("msorbits", "search", "--p", "2", "--dim", "2", "--S", "identity")
    assert rep["orbitCount"] == 2
    assert rep["complete"] is True
    rep = call_json("msorbits", "search", "--p", "2", "--dim", "2", "--S", "identity", "--exclude-zero")
    assert rep["orbitCount"] == 1
    rep = call_json("msorbits", "enumerate", "--p", "3", "--dim", "2", "--S=-identity", "--M", "identity")
    assert rep["orbitCount"] == 5
    code, out, _ = call("msorbits", "enumerate", "--p", "2", "--dim", "2", "--S", "I", "--M", "0,1;1,1",
                        "--format", "dot")
    assert code == EXIT_OK and out.count("subgraph") == 2


def test_text_format():
    code, out, _ = call("modorder", "--p", "2", "--n", "3", "--matrix", "0,5;1,2", "--format", "text")
    assert code == EXIT_OK
    assert "totalOrder: 8" in out.splitlines()


# -- exit codes ----------------------------------------------------------------


def test_exit_parse(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = call("fds", "diagram", "--input", str(bad))
    assert code == EXIT_PARSE and "line 1" in err
    assert call("fds", "diagram", "--input", str(tmp_path / "missing.json"))[0] == EXIT_PARSE
    assert call("modorder", "--p", "2", "--n", "3", "--matrix", "0,x;1,2")[0] == EXIT_PARSE
    assert call("modorder", "--p", "2")[0] == EXIT_PARSE
    assert call("field", "--field", "GF(2^)")[0] == EXIT_PARSE
    assert call("linpoly", "--p", "2", "--r", "2", "--coeffs", "a")[0] == EXIT_PARSE
    with pytest.raises(SystemExit) as exc:
        call("nosuchcommand")
    assert exc.value.code == EXIT_PARSE


def test_exit_validation(tmp_path):
    code, _, err = call("field", "--p", "2", "--r", "2", "--modulus", "1,0,1")
    assert code == EXIT_INVALID and "validation" in err
    assert call("modorder", "--p", "2", "--n", "3", "--matrix", "2,0;0,1")[0] == EXIT_INVALID
    assert call("field", "--p", "4", "--r", "2")[0] == EXIT_INVALID
    assert call("msorbits", "enumerate", "--p", "2", "--dim", "2", "--S", "0,1;1,0", "--M", "1,1;0,1")[0] == EXIT_INVALID
    table = tmp_path / "t.json"
    table.write_text(json.dumps({"space": {"kind": "Zm_vectors", "m": 2, "n": 1}, "map": [0, 5]}))
    assert call("fds", "order", "--input", str(table))[0] == EXIT_INVALID
    G = DependencyGraph(3, [(1, 2)])
    locs = [LocalUpdate.from_function(1, (1, 3), lambda v: v[1], 2),
            LocalUpdate.identity(2, 2), LocalUpdate.identity(3, 2)]
    path = tmp_path / "nonlocal.json"
    path.write_text(json.dumps(sds.to_json(G, locs, [1, 2, 3], 2)))
    code, _, err = call("sds", "--input", str(path))
    assert code == EXIT_INVALID and "non-neighbour coordinate 3" in err


def test_exit_budget():
    code, out, err = call("msorbits", "search", "--p", "2", "--dim", "2", "--S", "identity", "--budget", "8")
    assert code == EXIT_BUDGET
    rep = json.loads(out)
    assert rep["complete"] is False and rep["examined"] == 8
    code, _, err = call("msorbits", "search", "--p", "2", "--dim", "2", "--S", "identity", "--budget", "1")
    assert code == EXIT_BUDGET and "budget" in err
    assert call("msorbits", "search", "--p", "2", "--dim", "2", "--S", "identity", "--budget", "0")[0] == EXIT_PARSE


# -- determinism -------------------------------------------------------------------


def test_byte_identical_reruns(identity4):
    for argv in [("modorder", "--demo"), ("field", "--p", "3", "--r", "2"),
                 ("msorbits", "search", "--p", "3", "--dim", "2", "--S=-I"),
                 ("fds", "diagram", "--input", identity4, "--format", "dot")]:
        assert call(*argv) == call(*argv)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fdsfield.cli", "modorder", "--p", "2", "--n", "3",
                           "--matrix", "0,5;1,2"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["totalOrder"] == 8
