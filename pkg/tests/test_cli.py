import subprocess
import sys

import pytest

from branchsep.cli import main

INSTANCE_SAME = """\
f: z - x
alpha.x: t
alpha.z: 2*t
beta.x: t
beta.z: 3*t
box.x: [1/4, 1]
grid: 5
degree_bound: 2
seed: 7
"""

INSTANCE_VIOLATED = INSTANCE_SAME.replace("f: z - x", "f: (z - x)*(z + x)") \
                                 .replace("beta.z: 3*t", "beta.z: -2*t")


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


class TestPolygonCommand:
    def test_edges_and_slopes(self, tmp_path, capsys):
        p = tmp_path / "poly.txt"
        p.write_text("z^2 - (t + t^2)*z + t^3\n")
        code, out = run_cli(["polygon", str(p)], capsys)
        assert code == 0
        assert "slope -2" in out and "slope -1" in out

    def test_svg_emission(self, tmp_path, capsys):
        p = tmp_path / "poly.txt"
        p.write_text("z^2 - t\n")
        svg = tmp_path / "hull.svg"
        code, _ = run_cli(["polygon", str(p), "--svg", str(svg)], capsys)
        assert code == 0
        assert svg.read_text().startswith("<svg")


class TestBranchesCommand:
    def test_listing(self, tmp_path, capsys):
        p = tmp_path / "poly.txt"
        p.write_text("z^2 - (t + t^2)*z + t^3\n")
        code, out = run_cli(["branches", str(p)], capsys)
        assert code == 0
        assert "branch: t |" in out and "branch: t^2 |" in out


class TestValuateCommand:
    def test_value(self, tmp_path, capsys):
        p = tmp_path / "req.txt"
        p.write_text("f: z^2 - x\ngamma.x: t^2\ngamma.z: t\n")
        code, out = run_cli(["valuate", str(p)], capsys)
        assert code == 0
        assert "value: INF" in out  # exact root

    def test_sign(self, tmp_path, capsys):
        p = tmp_path / "req.txt"
        p.write_text("f: z - x\ngamma.x: t\ngamma.z: 2*t\n")
        code, out = run_cli(["valuate", str(p)], capsys)
        assert code == 0
        assert "value: 1" in out and "sign: +" in out


class TestRecenterCommand:
    def test_shift_reported(self, tmp_path, capsys):
        p = tmp_path / "req.txt"
        p.write_text("g: (z - t)^2 - t^3\ngamma.z: t + t^10\n")
        code, out = run_cli(["recenter", str(p)], capsys)
        assert code == 0
        assert "phi: t" in out


class TestSeparateCommand:
    def test_same_component_exit_zero(self, tmp_path, capsys):
        p = tmp_path / "inst.txt"
        p.write_text(INSTANCE_SAME)
        code, out = run_cli(["separate", str(p)], capsys)
        assert code == 0
        assert "verdict: same-component" in out

    def test_violated_exit_code(self, tmp_path, capsys):
        p = tmp_path / "inst.txt"
        p.write_text(INSTANCE_VIOLATED)
        code, out = run_cli(["separate", str(p)], capsys)
        assert code == 2
        assert "verdict: hypothesis-violated" in out

    def test_deterministic_output(self, tmp_path, capsys):
        p = tmp_path / "inst.txt"
        p.write_text(INSTANCE_VIOLATED)
        _, out1 = run_cli(["separate", str(p)], capsys)
        _, out2 = run_cli(["separate", str(p)], capsys)
        assert out1 == out2

    def test_replay_of_emitted_certificate(self, tmp_path, capsys):
        p = tmp_path / "inst.txt"
        p.write_text(INSTANCE_VIOLATED)
        cert = tmp_path / "cert.txt"
        code, _ = run_cli(["separate", str(p), "-o", str(cert)], capsys)
        assert code == 2
        code, out = run_cli(["replay", str(cert)], capsys)
        assert code == 0
        assert "MISMATCH" not in out

    def test_parse_error_exit_code(self, tmp_path, capsys):
        p = tmp_path / "inst.txt"
        p.write_text("nonsense without colon separators\n")
        code = main(["separate", str(p)])
        assert code == 5


class TestVerifyProps:
    def test_tiny_run_passes(self, capsys):
        code, out = run_cli(["verify-props", "--seed", "3", "--scale", "1/50"], capsys)
        assert code == 0
        assert "result: all properties hold" in out
        assert out.count("PASS") >= 10


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "branchsep.cli", "--help"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert "polygon" in proc.stdout
