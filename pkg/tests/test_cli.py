"""End-to-end CLI runs: exit codes, schemas, and reproducibility."""
import json
import math

import pytest

from plaplacian.cli import main
from plaplacian.domains import (
    box, box_union, domain_to_json, interval, packing_from_json, torus,
    validate_packing,
)
from plaplacian.exact import spectrum_from_json, spectrum_to_json


def write_domain(tmp_path, name, d):
    path = tmp_path / name
    path.write_text(json.dumps(domain_to_json(d)))
    return str(path)


def lshape():
    return box_union([([0, 0], [2, 1]), ([0, 1], [1, 1])])


def test_spectrum_unit_interval(tmp_path):
    dom = write_domain(tmp_path, "d.json", interval(1))
    out = tmp_path / "s.json"
    rc = main(["spectrum", "--domain", dom, "--p", "2", "--bc", "dirichlet",
               "--lambda-max", "100", "--output", str(out)])
    assert rc == 0
    s = spectrum_from_json(json.loads(out.read_text()))
    assert len(s.values) == 3
    assert s.values[0] == pytest.approx(math.pi ** 2, rel=1e-12)
    assert s.values[2] == pytest.approx(9 * math.pi ** 2, rel=1e-12)


def test_spectrum_unit_square(tmp_path):
    dom = write_domain(tmp_path, "d.json", box([0, 0], [1, 1]))
    out = tmp_path / "s.json"
    rc = main(["spectrum", "--domain", dom, "--p", "2", "--lambda-max", "50",
               "--output", str(out)])
    assert rc == 0
    s = spectrum_from_json(json.loads(out.read_text()))
    assert list(s.mults) == [1, 2]
    assert s.values[0] == pytest.approx(2 * math.pi ** 2, rel=1e-12)
    assert s.values[1] == pytest.approx(5 * math.pi ** 2, rel=1e-12)


def test_spectrum_torus(tmp_path):
    dom = write_domain(tmp_path, "d.json", torus([1, 1]))
    out = tmp_path / "s.json"
    rc = main(["spectrum", "--domain", dom, "--p", "2", "--bc", "periodic",
               "--lambda-max", "50", "--output", str(out)])
    assert rc == 0
    s = spectrum_from_json(json.loads(out.read_text()))
    assert s.values[0] == 0.0 and s.mults[0] == 1
    assert s.values[1] == pytest.approx(4 * math.pi ** 2, rel=1e-12)
    assert s.mults[1] == 4


def test_spectrum_lshape_p3_refuses(tmp_path, capsys):
    dom = write_domain(tmp_path, "d.json", lshape())
    rc = main(["spectrum", "--domain", dom, "--p", "3", "--lambda-max", "50"])
    assert rc == 2
    assert "--first-eigenvalue" in capsys.readouterr().err


def test_spectrum_lshape_first_eigenvalue(tmp_path):
    dom = write_domain(tmp_path, "d.json", lshape())
    out = tmp_path / "s.json"
    rc = main(["spectrum", "--domain", dom, "--p", "3", "--first-eigenvalue",
               "--h", "0.25", "--tol", "1e-6", "--output", str(out)])
    assert rc == 0
    obj = json.loads(out.read_text())
    assert obj["exactness"] == "variational"
    assert len(obj["eigenvalues"]) == 1
    assert obj["eigenvalues"][0][0] > 0
    assert obj["meta"]["solver"] == "min_p_rayleigh"


def test_spectrum_lshape_p2_discrete(tmp_path):
    dom = write_domain(tmp_path, "d.json", lshape())
    out = tmp_path / "s.json"
    rc = main(["spectrum", "--domain", dom, "--p", "2", "--lambda-max", "100",
               "--h", "0.25", "--output", str(out)])
    assert rc == 0
    obj = json.loads(out.read_text())
    assert obj["exactness"] == "discrete"
    assert obj["meta"]["trusted_below"] > 0
    assert all(v < 100 for v, _ in obj["eigenvalues"])


def test_weyl_interval(tmp_path, capsys):
    dom = write_domain(tmp_path, "d.json", interval(1))
    est_path = tmp_path / "est.json"
    curve_path = tmp_path / "curve.csv"
    rc = main(["weyl", "--domain", dom, "--p", "2", "--lambda-max", "1e6",
               "--lambda-min", "1e4", "--output", str(est_path),
               "--curve-out", str(curve_path)])
    assert rc == 0
    est = json.loads(est_path.read_text())
    assert abs(est["c_hat"] - 1 / math.pi) < 0.01 / math.pi
    assert curve_path.read_text().startswith("lambda,N,f\n")
    assert "c_hat=" in capsys.readouterr().err


def test_weyl_range_below_spectrum_exits_3(tmp_path):
    dom = write_domain(tmp_path, "d.json", interval(1))
    rc = main(["weyl", "--domain", dom, "--p", "2", "--lambda-max", "5",
               "--lambda-min", "0.1"])
    assert rc == 3


def test_weyl_unsupported_domain_exits_2(tmp_path):
    dom = write_domain(tmp_path, "d.json", lshape())
    rc = main(["weyl", "--domain", dom, "--p", "2", "--lambda-max", "1000"])
    assert rc == 2


def test_check_scaling_single_instance(tmp_path):
    out = tmp_path / "r.json"
    rc = main(["check", "scaling", "--a", "2", "--p", "3",
               "--output", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["verdict"] == "pass"
    assert rep["worst_margin"] == 0
    assert rep["details"]["a"] == "2"


def test_check_cutoff_sweep(tmp_path):
    out = tmp_path / "r.json"
    rc = main(["check", "cutoff", "--sweep", "20", "--seed", "1",
               "--output", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["details"]["violations"] == 0
    assert rep["details"]["instances"] == 20


def test_check_ddm_sweep(tmp_path):
    out = tmp_path / "r.json"
    rc = main(["check", "ddm", "--sweep", "5", "--seed", "7",
               "--points", "100", "--lambda-max", "1000",
               "--output", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["statement"] == "ddm"
    assert rep["details"]["seed"] == 7
    assert rep["details"]["violations"] == 0


def test_check_ndm_square_partitions(tmp_path):
    out = tmp_path / "r.json"
    rc = main(["check", "ndm", "--kind", "square", "--sweep", "3",
               "--points", "100", "--lambda-max", "1000",
               "--output", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["verdict"] == "pass"


def test_check_energy_split(tmp_path):
    out = tmp_path / "r.json"
    rc = main(["check", "energy-split", "--sweep", "10", "--seed", "3",
               "--output", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["details"]["violations"] == 0


def test_check_constant_equality(tmp_path):
    dom = write_domain(tmp_path, "d.json", interval(1))
    out = tmp_path / "r.json"
    rc = main(["check", "constant-equality", "--domain", dom, "--p", "2",
               "--lambda-min", "1e4", "--lambda-max", "1e7",
               "--tol", "0.01", "--output", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["verdict"] == "pass"
    assert rep["details"]["gap"] < 0.01 * rep["rhs"][0]


def test_check_friedlander(tmp_path):
    dom = write_domain(tmp_path, "d.json", box([0, 0], [1, 1]))
    out = tmp_path / "r.json"
    rc = main(["check", "friedlander", "--domain", dom, "--p", "2",
               "--lambda-min", "10", "--lambda-max", "1e5",
               "--output", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert 0 < rep["details"]["C1"] <= rep["details"]["C2"]


def test_check_unknown_statement_exits_2():
    assert main(["check", "bogus"]) == 2


def test_pack_partition(tmp_path):
    dom = write_domain(tmp_path, "d.json", box([0, 0], [1, 1]))
    out = tmp_path / "pk.json"
    rc = main(["pack", "--domain", dom, "--partition", "2",
               "--output", str(out)])
    assert rc == 0
    pk = packing_from_json(json.loads(out.read_text()))
    assert len(pk.items) == 4
    assert validate_packing(pk).valid


def test_pack_epsilon(tmp_path):
    dom = write_domain(tmp_path, "d.json", lshape())
    out = tmp_path / "pk.json"
    rc = main(["pack", "--domain", dom, "--epsilon", "1/2",
               "--depth-cap", "6", "--output", str(out)])
    assert rc == 0
    pk = packing_from_json(json.loads(out.read_text()))
    assert validate_packing(pk).valid
    assert float(pk.scaled_volume()) >= 3 - 0.5


def test_pack_depth_exhausted_exits_2(tmp_path, capsys):
    dom = write_domain(tmp_path, "d.json", box([0, 0], ["2/3", "2/3"]))
    rc = main(["pack", "--domain", dom, "--epsilon", "1/1000",
               "--depth-cap", "3"])
    assert rc == 2
    assert "depth-cap" in capsys.readouterr().err


def test_config_file_with_flag_override(tmp_path):
    dom = write_domain(tmp_path, "d.json", interval(1))
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"domain": dom, "p": 2, "bc": "dirichlet",
                               "lambda-max": 100}))
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["spectrum", "--config", str(cfg), "--output", str(out1)]) == 0
    assert len(json.loads(out1.read_text())["eigenvalues"]) == 3
    # explicit flag wins over the config file value
    assert main(["spectrum", "--config", str(cfg), "--lambda-max", "50",
                 "--output", str(out2)]) == 0
    assert len(json.loads(out2.read_text())["eigenvalues"]) == 2


def test_missing_domain_exits_2():
    assert main(["spectrum", "--p", "2", "--lambda-max", "10"]) == 2


def test_byte_identical_reruns(tmp_path):
    dom = write_domain(tmp_path, "d.json", interval(2))
    args = ["check", "ddm", "--sweep", "3", "--seed", "5", "--points", "50",
            "--lambda-max", "100"]
    f1, f2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(args + ["--output", str(f1)]) == 0
    assert main(args + ["--output", str(f2)]) == 0
    assert f1.read_bytes() == f2.read_bytes()
    wargs = ["weyl", "--domain", dom, "--p", "2", "--lambda-max", "1e5",
             "--lambda-min", "1e3"]
    w1, w2 = tmp_path / "w1.json", tmp_path / "w2.json"
    assert main(wargs + ["--output", str(w1)]) == 0
    assert main(wargs + ["--output", str(w2)]) == 0
    assert w1.read_bytes() == w2.read_bytes()


def test_spectrum_json_round_trips(tmp_path):
    dom = write_domain(tmp_path, "d.json", box([0, 0], [1, 2]))
    out = tmp_path / "s.json"
    assert main(["spectrum", "--domain", dom, "--p", "2", "--lambda-max",
                 "200", "--output", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert spectrum_to_json(spectrum_from_json(obj)) == obj


def test_sandwich_lshape(tmp_path, capsys):
    dom = write_domain(tmp_path, "d.json", lshape())
    out = tmp_path / "est.json"
    lo, hi = tmp_path / "lo.csv", tmp_path / "hi.csv"
    rc = main(["sandwich", "--domain", dom, "--lambda-max", "3e4",
               "--lambda-min", "10", "--output", str(out),
               "--lower-out", str(lo), "--upper-out", str(hi)])
    assert rc == 0
    est = json.loads(out.read_text())
    target = 3 / (4 * math.pi)
    assert abs(est["c_hat"] - target) < 0.03 * target
    assert est["method"] == "sandwich"
    assert lo.read_text().startswith("lambda,N,f\n")
    assert hi.read_text().startswith("lambda,N,f\n")
    assert "f_lower(end)=" in capsys.readouterr().err


def test_stdout_default_payload(tmp_path, capsys):
    dom = write_domain(tmp_path, "d.json", interval(1))
    rc = main(["spectrum", "--domain", dom, "--p", "2", "--lambda-max", "100"])
    assert rc == 0
    obj = json.loads(capsys.readouterr().out)
    assert len(obj["eigenvalues"]) == 3
