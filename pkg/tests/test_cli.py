import csv
import json

import pytest

from zakpol.cli import main


def test_waveform_csv(tmp_path):
    out = tmp_path / "p.csv"
    assert main(["waveform", "--kind", "pulsone", "--k0", "2", "-o", str(out)]) == 0
    rows = list(csv.reader(out.open(encoding="utf-8")))
    assert rows[0] == ["n", "re", "im"] and len(rows) == 1148
    assert float(rows[3][1]) == pytest.approx(37**-0.5)


def test_ambiguity_surface(capsys):
    assert main(["ambiguity", "--kind", "spread", "--against", "pulsone"]) == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[0] == ["delay_bin", "doppler_bin", "re", "im"] and len(rows) == 1 + 31 * 37
    mags = [abs(complex(float(r[2]), float(r[3]))) for r in rows[1:]]
    assert max(mags) == pytest.approx(1147**-0.5) and min(mags) == pytest.approx(1147**-0.5)


def test_crystallize_exit_codes(capsys):
    assert main(["crystallize", "--box", "0", "7", "-4", "4"]) == 0
    assert main(["crystallize", "--box", "0", "31", "0", "0"]) == 1
    assert "fails" in capsys.readouterr().out


def test_heatmap_command(tmp_path, capsys):
    assert main(["heatmap", "--out", str(tmp_path), "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "zak: 4 targets found, 0 spurious, 0 missed" in out
    assert (tmp_path / "fmcw_vv.csv").exists()


def test_montecarlo_command_and_config(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"system": "phase_coded", "polarization": "uni", "snr_db": [10], "trials": 50}))
    assert main(["montecarlo", "--config", str(cfg), "--trials", "2", "--out", str(tmp_path / "o")]) == 0
    rows = list(csv.reader((tmp_path / "o" / "phase_coded_uni_trials.csv").open(encoding="utf-8")))
    assert len(rows) == 1 + 2 * 2
    assert "pooled AUC" in capsys.readouterr().out


def test_bad_config_reports_error(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"N": 36}))
    assert main(["montecarlo", "--config", str(cfg)]) == 2
    assert "odd" in capsys.readouterr().err


def test_selftest_command(capsys):
    assert main(["selftest"]) == 0
    assert capsys.readouterr().out.count("PASS") == 6
