import json
import pathlib

import numpy as np
import pytest

from liekernel import cli

GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_roots_a2(capsys):
    code, out, _ = run(capsys, "roots", "A2")
    assert code == 0
    data = json.loads(out)
    assert data["simple_roots"][0] == [1.0, 0.0]
    assert data["cartan_matrix"] == [[2, -1], [-1, 2]]


def test_volume_a1(capsys):
    code, out, _ = run(capsys, "volume", "A1")
    data = json.loads(out)
    assert code == 0
    assert abs(data["coset"] - 8.0 * np.pi) < 1e-10


def test_weyl_b2(capsys):
    code, out, _ = run(capsys, "weyl", "B2")
    data = json.loads(out)
    assert code == 0
    assert data["order"] == 8
    assert sorted(set(data["parities"])) == [-1, 1]


def test_kernel_dual_route(capsys):
    code, out, _ = run(capsys, "kernel", "SU2", "--heat", "0.5", "--route", "both", "--grid", "0.3:2.0:9")
    data = json.loads(out)
    assert code == 0
    assert len(data["records"]) == 9
    assert max(r["discrepancy"] for r in data["records"]) < 1e-8


def test_kernel_su11_d0_closed_form_column(capsys):
    code, out, _ = run(
        capsys, "kernel", "SU11", "--domain", "D0", "--t", "1.0", "--theta-grid", "0.1:3.0:30"
    )
    data = json.loads(out)
    assert code == 0
    assert len(data["records"]) == 30
    for rec in data["records"]:
        engine = complex(rec["pathsum_re"], rec["pathsum_im"])
        closed = complex(rec["closed_re"], rec["closed_im"])
        assert abs(engine - closed) < 1e-10
        assert rec["pathsum_tag"] == "OSCILLATORY"


def test_kernel_wall_points_skipped_not_fatal(capsys):
    code, out, _ = run(capsys, "kernel", "SU2", "--heat", "0.5", "--grid", "0.0:2.0:5")
    data = json.loads(out)
    assert code == 0
    first = data["records"][0]
    assert first["phi"] == [0.0]
    assert first.get("pathsum_skipped") == "wall point"
    assert "pathsum_re" in data["records"][1]


def test_kernel_empty_grid_is_usage_error(capsys):
    code, _, err = run(capsys, "kernel", "SU2", "--heat", "0.5", "--grid", "0.3:2.0:0")
    assert code == 2
    assert "grid" in err


def test_kernel_requires_time(capsys):
    code, _, err = run(capsys, "kernel", "SU2", "--grid", "0.3:2.0:4")
    assert code == 2


def test_kernel_spectral_route_rejected_off_compact(capsys):
    code, _, err = run(
        capsys, "kernel", "SU11", "--domain", "D0", "--t", "1.0", "--grid", "0.2:1:3",
        "--route", "spectral",
    )
    assert code == 2
    assert "spectral" in err


def test_kernel_workers_match_serial(capsys):
    args = ["kernel", "SU2", "--heat", "0.4", "--grid", "0.3:2.0:8"]
    _, serial, _ = run(capsys, *args)
    _, parallel, _ = run(capsys, *args, "--workers", "4")
    assert serial == parallel


def test_determinism_byte_identical(capsys):
    args = ["kernel", "SU3", "--heat", "0.5", "--route", "both", "--point", "0.8,0.5"]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_table_unknown_group(capsys):
    code, _, err = run(capsys, "table", "XX9")
    assert code == 2


def test_domains_enumerate(capsys):
    code, out, _ = run(capsys, "domains", "enumerate", "SU(2,1)")
    data = json.loads(out)
    assert code == 0
    assert data["count"] == 2
    assert [d["label"] for d in data["domains"]] == ["D2", "D1"]


def test_domains_classify_matrix_file(capsys, tmp_path):
    theta = 0.8
    c, s = np.cosh(theta / 2), np.sinh(theta / 2)
    g = np.array([[c, s], [s, c]], dtype=complex)
    pairs = [[float(z.real), float(z.imag)] for z in g.ravel()]
    path = tmp_path / "mat.json"
    path.write_text(json.dumps(pairs))
    code, out, _ = run(capsys, "domains", "classify", "SU11", str(path))
    data = json.loads(out)
    assert code == 0
    assert data["domain"] == "D0"
    assert abs(data["radial"][0] - theta) < 1e-9
    assert data["residual"] < 1e-9


def test_domains_classify_requires_matrix(capsys):
    code, _, err = run(capsys, "domains", "classify", "SU11")
    assert code == 2


def test_check_list_and_filter(capsys):
    code, out, _ = run(capsys, "check", "--list")
    assert code == 0
    assert "dual-series-su2" in out
    code, out, _ = run(capsys, "check", "--only", "weyl-orders")
    data = json.loads(out)
    assert code == 0 and data["passed"]


def test_csv_output(capsys):
    code, out, _ = run(capsys, "kernel", "SU2", "--heat", "0.5", "--grid", "0.4:1.6:4", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 5
    assert lines[0].startswith("phi,signature,pathsum_re")


def test_config_file_defaults(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"heat": 0.5, "grid": "0.3:2.0:4"}))
    code, out, _ = run(capsys, "--config", str(cfg), "kernel", "SU2")
    data = json.loads(out)
    assert code == 0 and len(data["records"]) == 4
    # explicit flags win over config values
    code, out, _ = run(capsys, "--config", str(cfg), "kernel", "SU2", "--grid", "0.3:2.0:7")
    assert len(json.loads(out)["records"]) == 7


def test_output_file(capsys, tmp_path):
    target = tmp_path / "roots.json"
    code, out, _ = run(capsys, "roots", "A1", "-o", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["n"] == 3


GOLDEN_NAMES = {
    "SU21": "su21.json", "SL3R": "sl3r.json", "SO41": "so41.json", "SO32": "so32.json",
    "SU31": "su31.json", "SU22": "su22.json", "SO33": "so33.json", "SO51": "so51.json",
    "USP42": "usp42.json", "SP6R": "sp6r.json",
}


@pytest.mark.parametrize("group,fname", sorted(GOLDEN_NAMES.items()))
def test_table_matches_golden_bytes(group, fname, capsys):
    code, out, _ = run(capsys, "table", group)
    assert code == 0
    golden = (GOLDEN_DIR / fname).read_text(encoding="utf-8")
    assert out == golden
