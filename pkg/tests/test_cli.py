from __future__ import annotations

import io
import subprocess
import sys

import pytest

from cykit import category as cat
from cykit import formats as F
from cykit.cli import main
from cykit.frobenius import group_algebra
from cykit.link import kirby_color_sum, linking_matrix

HOPF_10 = "kind = link\nstrands_start = 0\ncup 1\ncup 3\nx- 2\nx- 2\ncap 3\ncap 1\nframing = 1,0\n"


def run(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {
        "sv.cat": "kind = svect\n",
        "semion.cat": "kind = semion\n",
        "hopf.mat": "n = 2; 0 1; 1 0\n",
        "bad.mat": "n = 2\n0 1\n2 0\n",
        "cp2.mat": "kind = matrix\nname = CP2\nn = 1\n1\n",
        "h.link": HOPF_10,
        "k3.inv": "chi = 24\nsigma = -16\nspin = true\n",
        "broken.cat": "kind = pointed\norder = 4\ngroup = 2\ntheta.5 = 1\n",
    }.items():
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
    return paths


def test_cyk_svect_cp2(files):
    code, out, _ = run("cyk", files["sv.cat"], files["cp2.mat"])
    assert code == 0
    assert "value = 0\n" in out
    assert "approx = 0.000000\n" in out


def test_cyk_builtins_and_approx_digits():
    code, out, _ = run("cyk", "@semion", "@CP2", "--approx-digits", "3")
    assert code == 0
    assert "value = 2 + 2*z" in out
    assert "approx = 2.000 + 2.000i" in out


def test_classify_k3():
    code, out, _ = run("classify", "--chi", "24", "--sigma", "-16", "--spin", "--stab", "s2s2")
    assert code == 0
    assert "1 * K3" in out


def test_classify_from_file(files):
    code, out, _ = run("classify", files["k3.inv"])
    assert "reference = 1 * K3" in out


def test_classify_domain_error_exit_1():
    code, out, err = run("classify", "--chi", "3", "--sigma", "0")
    assert code == 1 and out == ""
    assert err.startswith("error[M004]:")


def test_gauss_semion(files):
    code, out, _ = run("gauss", files["semion.cat"])
    assert code == 0
    assert "tau+ = 1 + z\n" in out
    assert "has_fermion = false" in out


def test_center_svect():
    code, out, _ = run("center", "@svect")
    assert "transparent = 1, f" in out
    assert "gluck_is_identity = false" in out


def test_frobenius_reports():
    code, out, _ = run("frobenius", "@tl(4)")
    assert code == 0
    assert "semisimple = true" in out
    assert "indecomposables = 3" in out
    assert "idempotents over order 16:" in out


def test_frobenius_order_cap_limits_splitting(tmp_path):
    p = tmp_path / "z3.alg"
    p.write_text(F.render_algebra(group_algebra(3)))
    _, out, _ = run("frobenius", str(p), "--order-cap", "2")
    assert "idempotents = not split over any order <= 2" in out
    _, out, _ = run("frobenius", str(p), "--order-cap", "3")
    assert "idempotents over order 3:" in out


def test_generators_and_closed_form():
    _, out, _ = run("generators", "@svect")
    assert "zt_k3 = 4194304" in out and "fermionic = true" in out
    _, out, _ = run("closed-form", "@svect", "@K3")
    assert "value = 8388608" in out
    _, out, _ = run("closed-form", "@semion", "--chi", "0", "--sigma", "0", "--pi1", "Z")
    assert "value = 1\n" in out


def test_validate(files):
    code, out, _ = run("validate", files["hopf.mat"], files["sv.cat"], files["h.link"])
    assert code == 0
    assert "result = valid" in out
    assert "linking_matrix = 0 1; 1 0" in out


def test_parse_errors_exit_2(files):
    code, out, err = run("validate", files["bad.mat"])
    assert code == 2 and out == ""
    assert err.strip() == "error[P002]: symmetry: q[1][2] = 1 but q[2][1] = 2"
    code, _, err = run("gauss", files["broken.cat"])
    assert code == 2
    assert err.startswith(f"error[P001]: {files['broken.cat']}:4:")
    code, _, err = run("gauss", "/no/such/file")
    assert code == 2 and "cannot read file" in err
    code, _, err = run("gauss", "@nonsense")
    assert code == 2


def test_backend_mismatch_exit_1(files):
    code, _, err = run("cyk", "@tl(3)", files["hopf.mat"])
    assert code == 1 and err.startswith("error[L004]")


def test_usage_errors_exit_2():
    assert run("slide")[0] == 2
    assert run()[0] == 2


def test_slide_rewrites_and_round_trips(files):
    before = F.parse_file(files["h.link"], "manifold")[1]
    code, out, _ = run("slide", files["h.link"], "1", "2", "-1")
    assert code == 0 and "components = " in out
    after = F.parse_file(files["h.link"], "manifold")[1]
    text = open(files["h.link"]).read()
    assert F.parse_manifold(text) == after
    assert F.render_manifold(after) == text
    for R in (cat.tl(3), cat.tl(4), cat.semion()):
        assert kirby_color_sum(after.body, R) == kirby_color_sum(before.body, R)


def test_slide_matrix_and_output_flag(files, tmp_path):
    target = tmp_path / "out.mat"
    code, _, _ = run("slide", files["hopf.mat"], "1", "2", "1", "-o", str(target))
    assert code == 0
    assert linking_matrix(F.parse_file(target, "manifold")[1].body).q == ((2, 1), (1, 0))
    assert open(files["hopf.mat"]).read() == "n = 2; 0 1; 1 0\n"


def test_slide_bad_index_is_domain_error(files):
    code, _, err = run("slide", files["hopf.mat"], "1", "3", "1")
    assert code == 1 and err.startswith("error[L005]")


def test_reports_are_deterministic(files):
    a = run("frobenius", "@tl(5)")
    b = run("frobenius", "@tl(5)")
    assert a == b


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cykit.cli", "gauss", "@semion"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "tau+ = 1 + z" in proc.stdout


def test_selftest_subset():
    code, out, _ = run("selftest", "1", "8")
    assert code == 0
    assert "PASS criterion  1" in out and "selftest = pass" in out
